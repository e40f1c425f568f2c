#include "pzx/session_store.hpp"

#include "pzx/error.hpp"
#include "pzx/serialization.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace pzx {

namespace {

std::string random_id() {
    static std::mutex m;
    static std::mt19937_64 engine{std::random_device{}()};
    std::lock_guard lock(m);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(engine()));
    return buf;
}

} // namespace

bool valid_session_id(const std::string& id) {
    if (id.empty() || id.size() > 64) {
        return false;
    }
    for (unsigned char c : id) {
        if (!std::isalnum(c) && c != '_' && c != '-') {
            return false;
        }
    }
    return true;
}

SessionStore::SessionStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const { return dir_ / (id + ".json"); }

Session SessionStore::create() {
    std::string id;
    do {
        id = random_id();
    } while (std::filesystem::exists(path_for(id)));
    const auto slot = find_slot(id);
    std::lock_guard lock(slot->mutex);
    Session s = create_session(id);
    commit_locked(*slot, s);
    return s;
}

Session SessionStore::get(const std::string& id) {
    const auto slot = find_slot(id);
    std::lock_guard lock(slot->mutex);
    return load_locked(*slot, id);
}

std::shared_ptr<SessionStore::Slot> SessionStore::find_slot(const std::string& id) {
    if (!valid_session_id(id)) {
        throw NotFoundError("unknown session '" + id + "'");
    }
    std::lock_guard lock(slots_mutex_);
    auto& slot = slots_[id];
    if (!slot) {
        slot = std::make_shared<Slot>();
    }
    return slot;
}

Session SessionStore::load_locked(Slot& slot, const std::string& id) {
    if (!slot.cached) {
        std::ifstream in(path_for(id), std::ios::binary);
        if (!in) {
            throw NotFoundError("unknown session '" + id + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        slot.cached = load_session(text.str());
    }
    return *slot.cached;
}

void SessionStore::commit_locked(Slot& slot, Session s) {
    persist(s);
    slot.cached = std::move(s);
}

void SessionStore::persist(const Session& s) const {
    const auto target = path_for(s.id);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << save_session(s);
        if (!out) {
            throw Error("cannot write session file " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

} // namespace pzx
