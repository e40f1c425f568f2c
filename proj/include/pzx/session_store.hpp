#pragma once

#include "pzx/session.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>

namespace pzx {

/// Sessions persisted as one JSON document per id in a data directory.
/// Mutations of one session are serialized; distinct sessions proceed in
/// parallel. A mutation that throws leaves both cache and file untouched.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path data_dir);

    const std::filesystem::path& data_dir() const noexcept { return dir_; }

    Session create();
    /// Throws NotFoundError.
    Session get(const std::string& id);

    template <class F>
    auto update(const std::string& id, F&& fn) -> std::invoke_result_t<F, Session&> {
        const auto slot = find_slot(id);
        std::lock_guard lock(slot->mutex);
        Session working = load_locked(*slot, id);
        if constexpr (std::is_void_v<std::invoke_result_t<F, Session&>>) {
            fn(working);
            commit_locked(*slot, std::move(working));
        } else {
            auto result = fn(working);
            commit_locked(*slot, std::move(working));
            return result;
        }
    }

    std::filesystem::path path_for(const std::string& id) const;

private:
    struct Slot {
        std::mutex mutex;
        std::optional<Session> cached;
    };

    std::shared_ptr<Slot> find_slot(const std::string& id);
    Session load_locked(Slot& slot, const std::string& id);
    void commit_locked(Slot& slot, Session s);
    void persist(const Session& s) const;

    std::filesystem::path dir_;
    std::mutex slots_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
};

/// Ids are 1-64 characters from [A-Za-z0-9_-].
bool valid_session_id(const std::string& id);

} // namespace pzx
