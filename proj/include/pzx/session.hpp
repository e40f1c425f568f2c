#pragma once

#include "pzx/expression.hpp"
#include "pzx/freq_analysis.hpp"
#include "pzx/gamification.hpp"
#include "pzx/templates.hpp"
#include "pzx/time_response.hpp"
#include "pzx/transfer_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pzx {

inline constexpr std::size_t kMaxSystems = 16;
inline constexpr int kPaletteSize = 8;
/// Slider range for symbols of free-form expressions.
inline constexpr double kFreeSymbolMin = -1e3;
inline constexpr double kFreeSymbolMax = 1e3;

enum class SystemKind {
    template_system, ///< parameters are the template's; tf = instantiate(instance)
    expression_system, ///< parameters are the expression's free symbols
};

struct SystemEntry {
    std::string id;
    SystemKind kind = SystemKind::template_system;
    std::string expression; ///< template form or the user's text
    TransferFunction tf;
    std::optional<TemplateInstance> instance;
    ParameterEnv params; ///< free-symbol values, expression systems only
    int color = 0;

    friend bool operator==(const SystemEntry&, const SystemEntry&) = default;
};

struct Session {
    std::string id;
    std::vector<SystemEntry> systems;
    std::string selected;
    InputKind input = InputKind::step;
    QuizState quiz;
    ProgressState progress;
    std::optional<QuizQuestion> pending_question;
    std::uint64_t question_counter = 0;
    int next_system_number = 1;

    friend bool operator==(const Session&, const Session&) = default;

    const SystemEntry& system(std::string_view id) const;
    SystemEntry& system(std::string_view id);
};

/// Default view: G1-G4 with default parameters, step input, G1 selected.
Session create_session(std::string id);

/// Either a template key ("G5") or an expression.
struct SystemSource {
    std::optional<TemplateId> template_id;
    std::optional<std::string> expression;
};

struct AddResult {
    std::string system_id;
    std::vector<std::string> unlocked;
};

/// Free symbols default to 1. A numeric expression matching a template shape
/// becomes a template system so its sliders apply.
AddResult add_system(Session& s, const SystemSource& source);
std::vector<std::string> remove_system(Session& s, std::string_view system_id);

void update_parameter(Session& s, std::string_view system_id, const std::string& symbol, double value);

/// Index into poles(tf), sorted by (real, imag).
std::vector<std::string> move_pole(Session& s, std::string_view system_id, std::size_t index, Complex to);
/// Index into zeros(tf); supported for G5 and expression systems.
std::vector<std::string> move_zero(Session& s, std::string_view system_id, std::size_t index, Complex to);

void select_system(Session& s, std::string_view system_id);
std::vector<std::string> set_input_kind(Session& s, InputKind kind);

std::vector<std::string> apply_event(Session& s, const Event& e);

// ---- views -------------------------------------------------------------------

struct ViewParams {
    std::optional<double> wmin;
    std::optional<double> wmax;
    std::optional<std::size_t> points;
    std::optional<double> tmax;
    std::optional<std::size_t> time_points;
};

/// Log grid from the params (default [1e-2, 1e3], 1000 points), densified for the delay.
FrequencyGrid view_frequency_grid(const TransferFunction& tf, const ViewParams& p);
TimeGrid view_time_grid(const TransferFunction& tf, const ViewParams& p);

struct PoleZeroMap {
    std::vector<Complex> poles;
    std::vector<Complex> zeros;
};

PoleZeroMap pole_zero_map(const TransferFunction& tf);

// ---- hover linking ---------------------------------------------------------------

enum class HoverPlot { bode_mag, bode_phase, nyquist, step };

std::string to_string(HoverPlot p);
HoverPlot parse_hover_plot(std::string_view text);

struct HoverQuery {
    HoverPlot plot;
    double x; ///< omega, re or t
    double y; ///< dB, degrees, im or output value
    /// Visible output range of the step pane; sets the 2% snap distance.
    double ymin = 0.0;
    double ymax = 1.0;
};

struct SystemAtOmega {
    std::string system_id;
    double mag_db;
    double phase_deg;
    double re;
    double im;
};

struct StepSnap {
    std::string system_id;
    double t;
    double y;
};

struct HoverLink {
    std::optional<double> nyquist_circle_radius;
    std::optional<double> nyquist_ray_deg;
    std::optional<double> bode_mag_db; ///< horizontal line in the magnitude pane
    std::optional<double> bode_phase_deg; ///< horizontal line in the phase pane
    std::optional<double> omega; ///< vertical line in both Bode panes
    std::vector<SystemAtOmega> systems;
    std::optional<StepSnap> snap;
};

HoverLink hover_link(const Session& s, const HoverQuery& q);

// ---- quiz and assignments ----------------------------------------------------------

const QuizQuestion& next_quiz_question(Session& s, std::optional<QuizCategory> category);

struct QuizOutcome {
    GradeResult grade;
    int points_awarded = 0;
    std::vector<std::string> unlocked;
    std::optional<QuizQuestion> next; ///< issued immediately after a correct answer
};

/// Grades the pending question. Throws DomainError when none is pending.
QuizOutcome answer_quiz(Session& s, const QuizAnswer& answer);

struct AssignmentOutcome {
    AssignmentResult result;
    bool newly_completed = false;
    std::vector<std::string> unlocked;
};

AssignmentOutcome check_session_assignment(Session& s, const AssignmentDef& def, std::string_view system_id);

BadgeScale default_badge_scale();

} // namespace pzx
