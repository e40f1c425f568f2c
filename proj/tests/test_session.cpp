#include "fixtures.hpp"

#include "pzx/error.hpp"
#include "pzx/serialization.hpp"
#include "pzx/session.hpp"
#include "pzx/session_store.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <thread>

using namespace pzx;
using Catch::Approx;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("pzx-test-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(dir);
    return dir;
}

bool unlocked(const Session& s, const std::string& id) {
    const auto& u = s.progress.unlocked;
    return std::find(u.begin(), u.end(), id) != u.end();
}

} // namespace

TEST_CASE("create_session defaults", "[session]") {
    const auto s = create_session("abc");
    REQUIRE(s.systems.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.systems[i].instance->id == static_cast<TemplateId>(i));
        CHECK(s.systems[i].tf == instantiate(default_instance(static_cast<TemplateId>(i))));
    }
    CHECK(s.input == InputKind::step);
    CHECK(s.selected == s.systems[0].id);
    for (QuizCategory c : kAllQuizCategories) CHECK(s.quiz.at(c) == CategoryRecord{1, 0});
    CHECK(s.progress.points == 0);
    CHECK_FALSE(s.pending_question);
}

TEST_CASE("add_system", "[session]") {
    auto s = create_session("a");
    const auto g5 = add_system(s, {TemplateId::g5, {}});
    const auto& e5 = s.system(g5.system_id);
    CHECK(zeros(e5.tf).size() == 1);
    CHECK(poles(e5.tf).size() == 2);
    CHECK(unlocked(s, "first_system"));

    const auto g6 = add_system(s, {{}, "1/(1+0.5*s)^4"});
    const auto& e6 = s.system(g6.system_id);
    CHECK(e6.kind == SystemKind::template_system);
    REQUIRE(e6.instance);
    CHECK(e6.instance->id == TemplateId::g6);
    CHECK(e6.instance->at("T_5") == Approx(0.5));
    CHECK(unlocked(s, "edit_expression"));

    try {
        add_system(s, {{}, "1/(1+"});
        FAIL("no error");
    } catch (const ExpressionError& e) {
        CHECK(e.offset() == 5);
    }
    CHECK(s.systems.size() == 6);

    const auto free = add_system(s, {{}, "K/(1+s)^3"});
    const auto& ef = s.system(free.system_id);
    CHECK(ef.kind == SystemKind::expression_system);
    CHECK(ef.params.at("K") == 1.0);
    update_parameter(s, free.system_id, "K", 3.0);
    CHECK(s.system(free.system_id).tf.num == Polynomial{3});
    CHECK_THROWS_AS(update_parameter(s, free.system_id, "K", 1e4), DomainError);
    CHECK_THROWS_AS(update_parameter(s, free.system_id, "Q", 1), DomainError);

    while (s.systems.size() < kMaxSystems) add_system(s, {TemplateId::g1, {}});
    CHECK_THROWS_AS(add_system(s, {TemplateId::g1, {}}), DomainError);
}

TEST_CASE("update_parameter examples", "[session]") {
    auto s = create_session("a");
    const auto g1 = s.systems[0].id, g3 = s.systems[2].id;
    update_parameter(s, g1, "T_1", 2.0);
    CHECK(pole_zero_map(s.system(g1).tf).poles[0].real() == Approx(-0.5));
    update_parameter(s, g3, "zeta", 0.0);
    const auto ps = pole_zero_map(s.system(g3).tf).poles;
    REQUIRE(ps.size() == 2);
    for (const auto& p : ps) {
        CHECK(std::abs(p.real()) < 1e-12);
        CHECK(std::abs(p.imag()) == Approx(2.0));
    }
    const auto before = s;
    CHECK_THROWS_AS(update_parameter(s, g1, "T_1", -1.0), DomainError);
    CHECK_THROWS_AS(update_parameter(s, g1, "omega_0", 1.0), DomainError);
    CHECK_THROWS_AS(update_parameter(s, "nope", "T_1", 1.0), NotFoundError);
    update_parameter(s, g3, "ζ", 0.3);
    CHECK(s.system(g3).instance->at("zeta") == 0.3);
    CHECK(before.system(g1).tf == s.system(g1).tf);
}

TEST_CASE("move_pole examples", "[session]") {
    auto s = create_session("a");
    const auto g1 = s.systems[0].id, g2 = s.systems[1].id, g3 = s.systems[2].id, g4 = s.systems[3].id;
    move_pole(s, g1, 0, {-2, 0});
    CHECK(s.system(g1).instance->at("T_1") == Approx(0.5));
    CHECK(unlocked(s, "first_pole_drag"));

    move_pole(s, g3, 1, {-1, 1});
    CHECK(s.system(g3).instance->at("omega_0") == Approx(std::sqrt(2.0)));
    CHECK(s.system(g3).instance->at("zeta") == Approx(1 / std::sqrt(2.0)));
    const auto ps = poles(s.system(g3).tf);
    CHECK(oracle::root_set_distance({{-1, 1}, {-1, -1}}, ps) < 1e-12);

    CHECK_THROWS_WITH(move_pole(s, g1, 0, {-1, 0.5}), "first-order pole must be real");
    CHECK_THROWS_AS(move_pole(s, g1, 0, {1, 0}), DomainError);
    CHECK_THROWS_AS(move_pole(s, g4, 0, {-2, 0}), DomainError);
    CHECK_THROWS_AS(move_pole(s, g1, 3, {-2, 0}), DomainError);

    // G2 default poles are -5 and -1 (T_3 = 0.2, T_2 = 1); index 0 is -5.
    move_pole(s, g2, 0, {-10, 0});
    CHECK(s.system(g2).instance->at("T_3") == Approx(0.1));
    CHECK(s.system(g2).instance->at("T_2") == Approx(1.0));
}

TEST_CASE("pole move and parameter are dual", "[session][property]") {
    auto s = create_session("a");
    const auto g1 = s.systems[0].id;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> logt(-2, 1);
    for (int i = 0; i < 100; ++i) {
        const double t = std::pow(10.0, logt(rng));
        move_pole(s, g1, 0, {-1.0 / t, 0});
        CHECK(std::abs(s.system(g1).instance->at("T_1") - t) <= 1e-9 * t);
    }
}

TEST_CASE("free systems rebuild the denominator keeping den[0]", "[session]") {
    auto s = create_session("a");
    const auto id = add_system(s, {{}, "(1+s)/(2+3*s+4*s^2+s^3)"}).system_id;
    const SystemEntry before = s.system(id);
    REQUIRE(before.kind == SystemKind::expression_system);
    const auto ps = poles(before.tf);
    std::size_t real_index = 0;
    while (ps[real_index].imag() != 0.0) ++real_index;
    move_pole(s, id, real_index, {-7, 0});
    const auto& after = s.system(id);
    CHECK(after.tf.den[0] == Approx(2.0).epsilon(1e-12));
    CHECK(oracle::root_set_distance({-7.0}, {poles(after.tf)[0]}) < 1e-9);
    CHECK(after.tf.num == before.tf.num);
    CHECK(parse_transfer_function(after.expression) == after.tf);
    // Complex poles move with their conjugate.
    const auto cs = poles(after.tf);
    std::size_t ci = 0;
    while (cs[ci].imag() == 0.0) ++ci;
    move_pole(s, id, ci, {-1, 2});
    const auto moved = poles(s.system(id).tf);
    CHECK(oracle::root_set_distance({-7.0, {-1, 2}, {-1, -2}}, moved) < 1e-9);
}

TEST_CASE("move_zero", "[session]") {
    auto s = create_session("a");
    const auto g5 = add_system(s, {TemplateId::g5, {}}).system_id;
    move_zero(s, g5, 0, {-4, 0});
    CHECK(s.system(g5).instance->at("T_8") == Approx(0.25));
    CHECK(unlocked(s, "first_zero_drag"));
    CHECK_THROWS_AS(move_zero(s, s.systems[0].id, 0, {-1, 0}), DomainError);
}

TEST_CASE("views derive from the stored model", "[session][property]") {
    auto s = create_session("a");
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3, -0.2);
    for (int i = 0; i < 50; ++i) {
        for (auto& e : s.systems) {
            try {
                move_pole(s, e.id, 0, {u(rng), e.instance && e.instance->id == TemplateId::g3 ? -u(rng) : 0.0});
            } catch (const DomainError&) {
            }
            auto expect = roots(e.tf.den);
            sort_canonical(expect);
            CHECK(pole_zero_map(e.tf).poles == expect);
        }
    }
}

TEST_CASE("select, remove and input kind", "[session]") {
    auto s = create_session("a");
    select_system(s, s.systems[2].id);
    CHECK(s.selected == s.systems[2].id);
    CHECK_THROWS_AS(select_system(s, "zzz"), NotFoundError);
    const auto removed = s.systems[2].id;
    remove_system(s, removed);
    CHECK(s.systems.size() == 3);
    CHECK(s.selected == s.systems[0].id);
    CHECK(unlocked(s, "remove_system"));
    CHECK(set_input_kind(s, InputKind::impulse) == std::vector<std::string>{"input_switch"});
    CHECK(s.input == InputKind::impulse);
    CHECK(set_input_kind(s, InputKind::impulse).empty());
}

TEST_CASE("view grids", "[session]") {
    const auto g4 = instantiate(default_instance(TemplateId::g4));
    CHECK(view_frequency_grid(g4, {}).omegas.size() > 1000);
    CHECK(view_frequency_grid(instantiate(default_instance(TemplateId::g1)), {}).omegas.size() == 1000);
    ViewParams p;
    p.wmin = 0.1;
    p.wmax = 10;
    p.points = 50;
    CHECK(view_frequency_grid(instantiate(default_instance(TemplateId::g1)), p).omegas.size() == 50);
    p.tmax = 3;
    p.time_points = 31;
    CHECK(view_time_grid(g4, p).times.back() == 3.0);
    CHECK(view_time_grid(g4, {}).times.size() == 500);
}

TEST_CASE("hover linking", "[session]") {
    auto s = create_session("a");
    auto h = hover_link(s, {HoverPlot::bode_mag, 1.0, 0.0});
    CHECK(*h.nyquist_circle_radius == 1.0);
    CHECK(h.systems.size() == 4);
    h = hover_link(s, {HoverPlot::bode_phase, 1.0, -180.0});
    CHECK(*h.nyquist_ray_deg == -180.0);
    h = hover_link(s, {HoverPlot::nyquist, 0.5, -0.5});
    CHECK(*h.bode_mag_db == Approx(-3.0103).margin(1e-4));
    CHECK(*h.bode_phase_deg == Approx(-45.0));
    // G1 passes through (0.5, -0.5) at omega = 1.
    REQUIRE(h.omega);
    CHECK(*h.omega == Approx(1.0).epsilon(0.02));
    CHECK(h.systems.size() == 1);
    CHECK(h.systems[0].system_id == s.systems[0].id);

    h = hover_link(s, {HoverPlot::step, 1.0, 0.64, 0.0, 3.0});
    REQUIRE(h.snap);
    CHECK(h.snap->system_id == s.systems[0].id);
    CHECK(h.snap->y == Approx(1 - std::exp(-1.0)));
    CHECK_FALSE(hover_link(s, {HoverPlot::step, 1.0, 0.64, 0.0, 0.1}).snap);
}

TEST_CASE("session quiz flow", "[session][quiz]") {
    auto s = create_session("quizzer");
    CHECK_THROWS_AS(answer_quiz(s, {1.0, {}, {}}), DomainError);
    const auto q = next_quiz_question(s, QuizCategory::click_frequency);
    auto out = answer_quiz(s, {q.target, {}, {}});
    CHECK(out.grade.correct);
    CHECK(out.points_awarded == 1);
    REQUIRE(out.next);
    CHECK(s.pending_question == out.next);
    CHECK(unlocked(s, "first_quiz"));
    CHECK(s.quiz.at(QuizCategory::click_frequency).streak == 1);

    auto again = create_session("quizzer");
    CHECK(next_quiz_question(again, QuizCategory::click_frequency) == q);
}

TEST_CASE("session assignments award points once", "[session]") {
    auto s = create_session("a");
    const auto& def = assignment_catalog().front();
    const auto g1 = s.systems[0].id;
    update_parameter(s, g1, "T_1", 2.0);
    auto first = check_session_assignment(s, def, g1);
    CHECK(first.result.passed);
    CHECK(first.newly_completed);
    const int points = s.progress.points;
    auto second = check_session_assignment(s, def, g1);
    CHECK(second.result.passed);
    CHECK_FALSE(second.newly_completed);
    CHECK(s.progress.points == points);
    CHECK_THROWS_AS(check_session_assignment(s, def, s.systems[2].id), DomainError);
}

TEST_CASE("save and load", "[session][persistence]") {
    const auto s = create_session("abc");
    const auto doc = save_session(s);
    CHECK(load_session(doc) == s);
    CHECK(Json::parse(doc).at("schema_version") == 1);

    auto v99 = Json::parse(doc);
    v99["schema_version"] = 99;
    try {
        load_session(v99.dump());
        FAIL("no error");
    } catch (const DocumentError& e) {
        CHECK(e.kind() == DocumentError::Kind::version);
        CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("99"));
    }
    try {
        load_session(doc.substr(0, doc.size() / 2));
        FAIL("no error");
    } catch (const DocumentError& e) {
        CHECK(e.kind() == DocumentError::Kind::parse);
    }
    auto bad = Json::parse(doc);
    bad["session"]["systems"][0]["tf"]["den"] = "oops";
    CHECK_THROWS_AS(load_session(bad.dump()), DocumentError);
}


TEST_CASE("randomized sessions round trip byte-identically", "[session][persistence][property]") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const auto s = fixture::random_session(rng, i);
        const auto doc = save_session(s);
        const auto loaded = load_session(doc);
        CHECK(loaded == s);
        CHECK(save_session(loaded) == doc);
    }
}

TEST_CASE("session store persists and isolates sessions", "[session][store]") {
    const auto dir = temp_dir("store");
    {
        SessionStore store(dir);
        const auto a = store.create();
        const auto b = store.create();
        CHECK(a.id != b.id);
        CHECK(valid_session_id(a.id));
        store.update(a.id, [](Session& s) { update_parameter(s, s.systems[0].id, "T_1", 2.0); });
        CHECK(store.get(b.id).systems[0].tf == instantiate(default_instance(TemplateId::g1)));
        CHECK(std::filesystem::exists(store.path_for(a.id)));

        const auto file_before = oracle::read_file(store.path_for(a.id).string());
        CHECK_THROWS_AS(store.update(a.id,
                                     [](Session& s) {
                                         update_parameter(s, s.systems[0].id, "T_1", 5.0);
                                         update_parameter(s, s.systems[0].id, "T_1", -1.0);
                                     }),
                        DomainError);
        CHECK(oracle::read_file(store.path_for(a.id).string()) == file_before);
        CHECK(store.get(a.id).systems[0].instance->at("T_1") == 2.0);

        CHECK_THROWS_AS(store.get("missing"), NotFoundError);
        CHECK_THROWS_AS(store.get("../etc/passwd"), NotFoundError);

        // Concurrent writers on one session are serialized.
        std::vector<std::thread> threads;
        for (int t = 0; t < 4; ++t) {
            threads.emplace_back([&] {
                for (int i = 0; i < 25; ++i) {
                    store.update(b.id, [](Session& s) { apply_event(s, {EventKind::bode_hovered, {}}); });
                }
            });
        }
        for (auto& t : threads) t.join();
        CHECK(store.get(b.id).progress.event_counts.at(EventKind::bode_hovered) == 100);
        CHECK(store.update(b.id, [](Session& s) { return s.systems.size(); }) == 4);
    }
    {
        // A fresh store reads what the first one wrote.
        SessionStore reopened(dir);
        std::size_t found = 0;
        for (const auto& f : std::filesystem::directory_iterator(dir)) {
            const auto id = f.path().stem().string();
            found += reopened.get(id).systems.size() == 4;
        }
        CHECK(found == 2);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt session files surface as document errors", "[session][store]") {
    const auto dir = temp_dir("corrupt");
    SessionStore store(dir);
    const auto s = store.create();
    {
        SessionStore other(dir);
        oracle::write_file(other.path_for(s.id).string(), "{\"schema_version\": 1, \"sess");
        CHECK_THROWS_AS(other.get(s.id), DocumentError);
    }
    std::filesystem::remove_all(dir);
}
