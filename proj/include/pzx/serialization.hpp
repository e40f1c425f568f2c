#pragma once

#include "pzx/error.hpp"
#include "pzx/export.hpp"
#include "pzx/freq_analysis.hpp"
#include "pzx/gamification.hpp"
#include "pzx/session.hpp"
#include "pzx/templates.hpp"
#include "pzx/time_response.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace pzx {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or unsupported session/catalog document.
class DocumentError : public Error {
public:
    enum class Kind { parse, version, schema };

    DocumentError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

Json to_json(const Polynomial& p);
Json to_json(const TransferFunction& tf);
Json to_json(const TemplateInstance& inst);
Json to_json(const QuizState& qs);
Json to_json(const ProgressState& ps);
/// `with_answer` adds the fields that reveal the solution (kept in persisted sessions).
Json to_json(const QuizQuestion& q, bool with_answer);
Json to_json(const SystemEntry& e);
Json to_json(const Session& s);
Json to_json(const TemplateInfo& info);
Json to_json(const AchievementDef& a);
Json to_json(const AssignmentDef& a);
Json to_json(const SourceText& src);
Json to_json(const StabilityMargins& m);
Json to_json(const HoverLink& h);
Json to_json(const GradeResult& g);
Json to_json(const LayeredAnswer& a);

TransferFunction transfer_function_from_json(const Json& j);
TemplateInstance template_instance_from_json(const Json& j);
QuizState quiz_state_from_json(const Json& j);
ProgressState progress_from_json(const Json& j);
QuizQuestion quiz_question_from_json(const Json& j);
SystemEntry system_entry_from_json(const Json& j);
Session session_from_json(const Json& j);
AchievementDef achievement_from_json(const Json& j);
AssignmentDef assignment_from_json(const Json& j);

/// Catalog documents: {"achievements": [...]} and {"assignments": [...]}.
std::vector<AchievementDef> load_achievement_catalog(std::string_view text);
std::vector<AssignmentDef> load_assignment_catalog(std::string_view text);

// View payloads. Non-finite numbers are emitted as null.
Json bode_payload(const FrequencyResponse& fr);
Json nyquist_payload(const FrequencyResponse& fr);
Json time_payload(const TimeResponse& r);
Json pzmap_payload(const PoleZeroMap& m);
Json badges_payload(const ProgressState& ps, const BadgeScale& scale);

/// {"schema_version": 1, "session": {...}} with sorted keys.
std::string save_session(const Session& s);
/// Throws DocumentError (parse, version or schema).
Session load_session(std::string_view document);

} // namespace pzx
