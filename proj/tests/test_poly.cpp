#include "fixtures.hpp"

#include "pzx/error.hpp"
#include "pzx/poly.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pzx;
using Catch::Approx;

TEST_CASE("eval_complex by substitution", "[poly]") {
    CHECK(eval_complex(Polynomial{1, 1}, {0, 1}) == Complex(1, 1));
    CHECK(eval_complex(Polynomial{1, 0}, {3.5, -2}) == Complex(1, 0));
    CHECK(std::abs(eval_complex(Polynomial{1, 3, 2}, -1.0)) == 0.0);
}

TEST_CASE("construction trims negligible leading coefficients", "[poly]") {
    CHECK(Polynomial{1, 2, 1e-15}.degree() == 1);
    CHECK(Polynomial{0, 0, 0}.is_zero());
    CHECK(Polynomial{}.is_zero());
    CHECK(Polynomial{1, 2, 1e-13}.degree() == 2);
    CHECK_THROWS_AS(Polynomial({1.0, std::nan("")}), DomainError);
}

TEST_CASE("multiply", "[poly]") {
    CHECK(multiply({1, 1}, {1, 2}) == Polynomial{1, 3, 2});
    CHECK(multiply({1}, {2, 3, 4}) == Polynomial{2, 3, 4});
    CHECK(multiply({0}, {1, 1}).is_zero());
}

TEST_CASE("multiply is commutative and associative", "[poly]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(-3, 3);
    std::uniform_int_distribution<int> deg(0, 4);
    const auto random_poly = [&] {
        std::vector<double> v(static_cast<std::size_t>(deg(rng)) + 1);
        for (double& x : v) x = c(rng);
        v.back() = v.back() >= 0 ? v.back() + 0.5 : v.back() - 0.5;
        return Polynomial(v);
    };
    for (int i = 0; i < 200; ++i) {
        const auto a = random_poly(), b = random_poly(), d = random_poly();
        const auto ab = a * b, ba = b * a;
        const auto l = (a * b) * d, r = a * (b * d);
        REQUIRE(ab.degree() == ba.degree());
        REQUIRE(l.degree() == r.degree());
        for (int k = 0; k <= ab.degree(); ++k) {
            CHECK(ab[k] == Approx(ba[k]).epsilon(1e-12).margin(1e-12));
        }
        for (int k = 0; k <= l.degree(); ++k) {
            CHECK(l[k] == Approx(r[k]).epsilon(1e-12).margin(1e-12 * l.max_abs_coeff()));
        }
    }
}

TEST_CASE("add, subtract, power, divide", "[poly]") {
    CHECK(add({1, 2}, {3}) == Polynomial{4, 2});
    CHECK(subtract({1, 2}, {1, 2}).is_zero());
    CHECK(power({1, 1}, 4) == Polynomial{1, 4, 6, 4, 1});
    CHECK(power({1, 1}, 0) == Polynomial{1});
    const auto d = divide({2, 3, 1}, {1, 1});
    CHECK(d.quotient == Polynomial{2, 1});
    CHECK(d.remainder.is_zero());
    CHECK(derivative({1, 3, 2}) == Polynomial{3, 4});
}

TEST_CASE("roots examples", "[poly]") {
    CHECK_THROWS_WITH(roots(Polynomial{3}), "constant polynomial has no roots");
    auto r1 = roots({1, 1});
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].real() == Approx(-1).epsilon(1e-12));
    CHECK(oracle::root_set_distance({-1.0, -0.5}, roots({1, 3, 2})) < 1e-12);
    const double h = std::sqrt(3.0) / 2.0;
    auto r3 = roots({1, 1, 1});
    CHECK(oracle::root_set_distance({{-0.5, h}, {-0.5, -h}}, r3) < 1e-12);
    // Conjugates come out exactly paired.
    sort_canonical(r3);
    CHECK(r3[0] == std::conj(r3[1]));
}

TEST_CASE("roots of polynomials with zero roots", "[poly]") {
    const auto r = roots({0, 0, 1, 1});
    CHECK(oracle::root_set_distance({0.0, 0.0, -1.0}, r) < 1e-12);
}

TEST_CASE("quadruple pole meets the relaxed cluster tolerance", "[poly]") {
    const auto r = roots(power({1, 0.5}, 4));
    REQUIRE(r.size() == 4);
    for (const auto& z : r) {
        CHECK(normalized_residual(power({1, 0.5}, 4), z) <= 1e-8);
        CHECK(std::abs(z - Complex(-2.0)) / 2.0 <= std::pow(1e-8, 0.25));
    }
}

TEST_CASE("from_roots examples", "[poly]") {
    const std::vector<Complex> one{-1.0};
    CHECK(from_roots(one, 1.0) == Polynomial{1, 1});
    const std::vector<Complex> two{-1.0, -0.5};
    CHECK(from_roots(two, 2.0) == Polynomial{1, 3, 2});
    CHECK(from_roots(std::vector<Complex>{}, 3.0) == Polynomial{3});
    const std::vector<Complex> bad{{-1.0, 1.0}};
    CHECK_THROWS_AS(from_roots(bad, 1.0), DomainError);
}


TEST_CASE("root property suite", "[poly][property]") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 500; ++trial) {
        const auto rs = fixture::random_stable_roots(rng);
        const auto p = from_roots(rs, 1.0);
        const auto found = roots(p);
        REQUIRE(found.size() == rs.size());
        for (const auto& r : found) {
            CHECK(normalized_residual(p, r) <= 1e-8);
        }
        for (const auto& r : found) {
            if (r.imag() != 0.0) {
                CHECK(std::count(found.begin(), found.end(), std::conj(r)) >= 1);
            }
        }
        CHECK(oracle::root_set_distance(rs, found) <= 1e-6);
    }
}
