#pragma once

#include "pzx/templates.hpp"
#include "pzx/transfer_function.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pzx {

// ---- events and achievements ---------------------------------------------

enum class EventKind {
    pole_dragged,
    zero_dragged,
    bode_hovered,
    nyquist_hovered,
    step_hovered,
    system_added,
    system_removed,
    code_exported,
    expression_edited,
    assignment_completed,
    quiz_answered,
    fullscreen_toggled,
    input_kind_changed,
};

inline constexpr std::array kAllEventKinds{
    EventKind::pole_dragged,      EventKind::zero_dragged,         EventKind::bode_hovered,
    EventKind::nyquist_hovered,   EventKind::step_hovered,         EventKind::system_added,
    EventKind::system_removed,    EventKind::code_exported,        EventKind::expression_edited,
    EventKind::assignment_completed, EventKind::quiz_answered,     EventKind::fullscreen_toggled,
    EventKind::input_kind_changed,
};

std::string to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct Event {
    EventKind kind;
    std::map<std::string, std::string> payload;
};

/// Unlocks once `count` events of kind `trigger` have been seen.
struct AchievementDef {
    std::string id;
    std::string title;
    EventKind trigger;
    int count = 1;
    int points = 10;
};

const std::vector<AchievementDef>& achievement_catalog();
/// Throws DomainError on duplicate ids, empty ids, or non-positive counts/points.
void validate(const std::vector<AchievementDef>& defs);

enum class BadgeCategory { achievements, assignments, quiz };
enum class Badge { none, bronze, silver, gold };

inline constexpr std::array kAllBadgeCategories{BadgeCategory::achievements, BadgeCategory::assignments,
                                                BadgeCategory::quiz};

std::string to_string(BadgeCategory c);
std::string to_string(Badge b);
BadgeCategory parse_badge_category(std::string_view text);

inline constexpr int kPointsPerLevel = 50;
inline constexpr int kQuizAttainablePoints = 100;

struct ProgressState {
    int points = 0;
    int level = 0;
    std::map<BadgeCategory, int> category_points;
    std::map<EventKind, int> event_counts;
    std::vector<std::string> unlocked; ///< in unlock order
    std::set<std::string> completed_assignments;

    friend bool operator==(const ProgressState&, const ProgressState&) = default;
};

struct RecordResult {
    ProgressState state;
    std::vector<std::string> newly_unlocked;
};

RecordResult record_event(const ProgressState& progress, const std::vector<AchievementDef>& defs, const Event& e);

/// Adds points to a category and refreshes the level.
ProgressState award(const ProgressState& progress, BadgeCategory category, int points);

/// Attainable points per category, used as the 100% mark for badges.
struct BadgeScale {
    int achievements;
    int assignments;
    int quiz = kQuizAttainablePoints;
};

Badge badge_for(int points, int attainable);
std::map<BadgeCategory, Badge> badge_progress(const ProgressState& ps, const BadgeScale& scale);

// ---- assignments -----------------------------------------------------------

enum class Quantity {
    dominant_pole_re,
    dominant_pole_im,
    dominant_time_constant,
    speedup, ///< reference time constant / dominant time constant
    static_gain,
    damping_ratio,
    natural_frequency,
    delay,
    phase_margin_deg,
    gain_margin_db,
};
enum class Comparator { eq, le, ge };

std::string to_string(Quantity q);
std::string to_string(Comparator c);
Quantity parse_quantity(std::string_view text);
Comparator parse_comparator(std::string_view text);

struct AssignmentDef {
    std::string id;
    TemplateId group;
    std::string prose;
    Quantity quantity;
    Comparator comparator;
    double target;
    double tolerance;
    bool relative_tolerance = false;
    std::optional<double> reference; ///< required by Quantity::speedup
    std::string explanation;
    int points = 10;
};

struct SystemSnapshot {
    TransferFunction tf;
    std::optional<TemplateInstance> instance;
};

struct AssignmentResult {
    bool passed;
    double measured;
    std::optional<std::string> explanation;
};

const std::vector<AssignmentDef>& assignment_catalog();
void validate(const AssignmentDef& def);

/// Measured value of a quantity; NaN when the system has no such feature.
double measure(Quantity q, const TransferFunction& tf, std::optional<double> reference = std::nullopt);

/// Throws DomainError when the snapshot is not an instance of def.group.
AssignmentResult check_assignment(const AssignmentDef& def, const SystemSnapshot& snapshot);

// ---- adaptive quiz -----------------------------------------------------------

enum class QuizCategory { click_frequency, click_time, click_nyquist_angle, click_complexity, odd_one_out };

inline constexpr std::array kAllQuizCategories{QuizCategory::click_frequency, QuizCategory::click_time,
                                               QuizCategory::click_nyquist_angle, QuizCategory::click_complexity,
                                               QuizCategory::odd_one_out};

std::string to_string(QuizCategory c);
QuizCategory parse_quiz_category(std::string_view text);

inline constexpr int kMinDifficulty = 1;
inline constexpr int kMaxDifficulty = 5;

struct CategoryRecord {
    int difficulty = kMinDifficulty;
    int streak = 0;

    friend bool operator==(const CategoryRecord&, const CategoryRecord&) = default;
};

struct QuizState {
    std::array<CategoryRecord, kAllQuizCategories.size()> records{};

    const CategoryRecord& at(QuizCategory c) const { return records[static_cast<std::size_t>(c)]; }
    CategoryRecord& at(QuizCategory c) { return records[static_cast<std::size_t>(c)]; }

    friend bool operator==(const QuizState&, const QuizState&) = default;
};

void validate(const QuizState& qs);

enum class OddProperty { stable, oscillatory, has_zero, has_delay };

std::string to_string(OddProperty p);
OddProperty parse_odd_property(std::string_view text);
bool has_property(const TransferFunction& tf, OddProperty p);

/// Tolerance at difficulty d: decades, seconds (for the given span), or degrees.
double frequency_tolerance(int d);
double time_tolerance(int d, double span);
double angle_tolerance(int d);

struct QuizQuestion {
    QuizCategory category = QuizCategory::click_frequency;
    int difficulty = kMinDifficulty;
    std::string prompt;
    /// Target omega (rad/s), time (s), angle (deg) or pole count.
    double target = 0.0;
    /// Decades, seconds or degrees; 0 for exact-match categories.
    double tolerance = 0.0;
    double time_span = 0.0; ///< click_time only
    std::vector<TransferFunction> systems;
    std::optional<OddProperty> property; ///< odd_one_out only
    /// Index of the correct option (odd_one_out, click_complexity).
    std::optional<int> answer_index;

    friend bool operator==(const QuizQuestion&, const QuizQuestion&) = default;
};

/// Category drawn from the seed when none is given.
QuizQuestion next_question(const QuizState& qs, std::optional<QuizCategory> category, std::uint64_t seed);

/// One of: clicked value (omega or time), clicked complex point, or selected option.
struct QuizAnswer {
    std::optional<double> value;
    std::optional<Complex> point;
    std::optional<int> choice;
};

struct GradeResult {
    bool correct;
    std::string feedback;
};

/// Throws DomainError when the answer does not fit the category.
GradeResult grade(const QuizQuestion& q, const QuizAnswer& answer);

QuizState update_difficulty(const QuizState& qs, QuizCategory category, bool correct);

/// Points for a correct answer at difficulty d.
inline int quiz_points(int difficulty) { return difficulty; }

// ---- layered help ------------------------------------------------------------

struct LayeredAnswer {
    std::string summary;
    std::string expanded;
    std::string mathematical;
};

const std::vector<std::string>& question_topics();
/// Throws DomainError for an unknown topic.
const LayeredAnswer& question_bank(std::string_view topic);

} // namespace pzx
