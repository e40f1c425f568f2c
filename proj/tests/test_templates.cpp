#include "pzx/error.hpp"
#include "pzx/templates.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pzx;
using Catch::Approx;

TEST_CASE("catalog has six families with defaults in range", "[templates]") {
    REQUIRE(template_catalog().size() == kTemplateCount);
    for (const auto& info : template_catalog()) {
        CHECK(parse_template_id(info.key) == info.id);
        for (const auto& p : info.params) {
            CHECK(p.min <= p.default_value);
            CHECK(p.default_value <= p.max);
        }
        CHECK_NOTHROW(validate_slider_range(default_instance(info.id)));
    }
    CHECK(parse_template_id("g3") == TemplateId::g3);
    CHECK_THROWS_AS(parse_template_id("G7"), DomainError);
}

TEST_CASE("instantiate examples", "[templates]") {
    const auto g1 = instantiate({TemplateId::g1, {{"k_1", 1}, {"T_1", 1}}});
    CHECK(g1.num == Polynomial{1});
    CHECK(g1.den == Polynomial{1, 1});
    const auto g3 = instantiate({TemplateId::g3, {{"k_3", 1}, {"omega_0", 2}, {"zeta", 0.5}}});
    CHECK(g3.num == Polynomial{4});
    CHECK(g3.den == Polynomial{4, 2, 1});
    const auto g6 = instantiate({TemplateId::g6, {{"T_5", 1}}});
    CHECK(g6.den == Polynomial{1, 4, 6, 4, 1});
    const auto g4 = instantiate(default_instance(TemplateId::g4));
    CHECK(g4.num == Polynomial{3});
    CHECK(g4.delay == 0.5);
    const auto g5 = instantiate(default_instance(TemplateId::g5));
    CHECK(g5.num == Polynomial{1, 0.5});
    CHECK(g5.den == multiply({1, 1}, {1, 0.1}));
}

TEST_CASE("invalid parameters are rejected", "[templates]") {
    CHECK_THROWS_AS(instantiate({TemplateId::g1, {{"k_1", 1}, {"T_1", -1}}}), DomainError);
    CHECK_THROWS_AS(instantiate({TemplateId::g1, {{"k_1", 1}}}), DomainError);
    CHECK_THROWS_AS(instantiate({TemplateId::g3, {{"k_3", 1}, {"omega_0", 2}, {"zeta", -0.1}}}), DomainError);
    CHECK_THROWS_AS(instantiate({TemplateId::g4, {{"L", -0.1}}}), DomainError);
    CHECK_THROWS_AS(validate_slider_range({TemplateId::g1, {{"k_1", 6}, {"T_1", 1}}}), DomainError);
    CHECK_NOTHROW(instantiate({TemplateId::g2, {{"k_2", 1}, {"T_2", 0.5}, {"T_3", 0.5}}}));
}

TEST_CASE("match_template examples", "[templates]") {
    auto m = match_template({Polynomial{4}, Polynomial{1, 2}, 0.0});
    REQUIRE(m);
    CHECK(m->id == TemplateId::g1);
    CHECK(m->at("k_1") == Approx(4));
    CHECK(m->at("T_1") == Approx(2));

    m = match_template({Polynomial{3}, Polynomial{1, 1}, 0.7});
    REQUIRE(m);
    CHECK(m->id == TemplateId::g4);
    CHECK(m->at("L") == 0.7);

    m = match_template({Polynomial{1, 1}, Polynomial{1, 3, 2}, 0.0});
    REQUIRE(m);
    CHECK(m->id == TemplateId::g5);
    CHECK(m->at("k_4") == Approx(1));
    CHECK(m->at("T_8") == Approx(1));
    const double a = m->at("T_6"), b = m->at("T_7");
    CHECK(std::min(a, b) == Approx(1));
    CHECK(std::max(a, b) == Approx(2));

    CHECK_FALSE(match_template({Polynomial{1, 0, 1}, Polynomial{1, 1, 1, 1}, 0.0}));
    CHECK_FALSE(match_template({Polynomial{2}, Polynomial{1, 1}, 0.7}));
    CHECK_FALSE(match_template({Polynomial{1}, Polynomial{0, 1}, 0.0}));
}

TEST_CASE("G3 with zeta >= 1 has real poles and matches as G2", "[templates]") {
    const auto tf = instantiate({TemplateId::g3, {{"k_3", 1}, {"omega_0", 2}, {"zeta", 1.5}}});
    const auto m = match_template(tf);
    REQUIRE(m);
    CHECK(m->id == TemplateId::g2);
    const auto back = instantiate(*m);
    for (int k = 0; k <= 2; ++k) {
        CHECK(back.den[k] / back.den[0] == Approx(tf.den[k] / tf.den[0]).epsilon(1e-12));
    }
}

namespace {

double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST_CASE("match_template inverts instantiate for random parameters", "[templates][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logt(-2.0, 1.0);
    std::uniform_real_distribution<double> gain_mag(0.1, 5.0);
    std::uniform_real_distribution<double> zeta(0.0, 0.99);
    std::uniform_real_distribution<double> logw(-1.0, 2.0);
    const auto t = [&] { return std::pow(10.0, logt(rng)); };
    const auto k = [&] { return (rng() % 2 ? 1.0 : -1.0) * gain_mag(rng); };
    for (int i = 0; i < 300; ++i) {
        for (const auto& info : template_catalog()) {
            TemplateInstance inst{info.id, {}};
            for (const auto& p : info.params) {
                if (p.name.starts_with("k_")) inst.params[p.name] = k();
                else if (p.name == "zeta") inst.params[p.name] = zeta(rng);
                else if (p.name == "omega_0") inst.params[p.name] = std::pow(10.0, logw(rng));
                else inst.params[p.name] = t();
            }
            const auto m = match_template(instantiate(inst));
            INFO(info.key);
            REQUIRE(m);
            REQUIRE(m->id == inst.id);
            for (const auto& [name, value] : inst.params) {
                if (name == "T_2" || name == "T_3" || name == "T_6" || name == "T_7") continue;
                if (name == "zeta" && value < 1e-6) {
                    CHECK(std::abs(m->at(name)) < 1e-8);
                    continue;
                }
                CHECK(relative_error(m->at(name), value) <= 1e-8);
            }
            const auto pair_check = [&](const char* x, const char* y) {
                const double lo = std::min(inst.at(x), inst.at(y)), hi = std::max(inst.at(x), inst.at(y));
                const double mlo = std::min(m->at(x), m->at(y)), mhi = std::max(m->at(x), m->at(y));
                CHECK(relative_error(mlo, lo) <= 1e-8);
                CHECK(relative_error(mhi, hi) <= 1e-8);
            };
            if (inst.id == TemplateId::g2) pair_check("T_2", "T_3");
            if (inst.id == TemplateId::g5) pair_check("T_6", "T_7");
        }
    }
}
