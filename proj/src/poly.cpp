#include "pzx/poly.hpp"

#include "pzx/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace pzx {

namespace {

constexpr double kTrimRelative = 1e-14;

std::vector<double> trimmed(std::vector<double> c) {
    if (c.empty()) {
        return {0.0};
    }
    for (double v : c) {
        if (!std::isfinite(v)) {
            throw DomainError("polynomial coefficients must be finite");
        }
    }
    double max_abs = 0.0;
    for (double v : c) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs == 0.0) {
        return {0.0};
    }
    const double threshold = kTrimRelative * max_abs;
    while (c.size() > 1 && std::abs(c.back()) < threshold) {
        c.pop_back();
    }
    return c;
}

// Parlett-Reinsch balancing; reduces the norm disparity of companion
// matrices built from coefficients spanning many decades.
void balance(Eigen::MatrixXd& a) {
    constexpr double radix = 2.0;
    const double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix;
                double f = 1.0;
                const double s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    a.row(i) *= g;
                    a.col(i) *= f;
                }
            }
        }
    }
}

// Newton steps on the original polynomial, each accepted only if it
// lowers |p|. Clustered roots (p' ~ 0) are left where the eigen solver put them.
Complex polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    double best = std::abs(eval_complex(p, r));
    for (int iter = 0; iter < 8 && best > 0.0; ++iter) {
        const Complex d = eval_complex(dp, r);
        if (d == Complex{}) {
            break;
        }
        const Complex candidate = r - eval_complex(p, r) / d;
        const double value = std::abs(eval_complex(p, candidate));
        if (!(value < best)) {
            break;
        }
        best = value;
        r = candidate;
    }
    return r;
}

double polish_real(const Polynomial& p, const Polynomial& dp, double r) {
    double best = std::abs(eval_real(p, r));
    for (int iter = 0; iter < 8 && best > 0.0; ++iter) {
        const double d = eval_real(dp, r);
        if (d == 0.0) {
            break;
        }
        const double candidate = r - eval_real(p, r) / d;
        const double value = std::abs(eval_real(p, candidate));
        if (!(value < best)) {
            break;
        }
        best = value;
        r = candidate;
    }
    return r;
}

void quadratic_roots(double c0, double c1, double c2, RootSet& out) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
        const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
        const double r1 = q / c2;
        const double r2 = q != 0.0 ? c0 / q : 0.0;
        out.emplace_back(r1, 0.0);
        out.emplace_back(r2, 0.0);
    } else {
        const double re = -c1 / (2.0 * c2);
        const double im = std::sqrt(-disc) / (2.0 * std::abs(c2));
        out.emplace_back(re, im);
        out.emplace_back(re, -im);
    }
}

} // namespace

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(trimmed(std::move(coeffs))) {}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(trimmed(std::vector<double>(coeffs))) {}

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(double c, std::size_t degree) {
    std::vector<double> v(degree + 1, 0.0);
    v[degree] = c;
    return Polynomial(std::move(v));
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double v : coeffs_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Complex eval_complex(const Polynomial& p, Complex s) {
    const auto& c = p.coefficients();
    Complex acc{c.back(), 0.0};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        acc = acc * s + c[k];
    }
    return acc;
}

double eval_real(const Polynomial& p, double s) {
    const auto& c = p.coefficients();
    double acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        acc = acc * s + c[k];
    }
    return acc;
}

Polynomial derivative(const Polynomial& p) {
    const auto& c = p.coefficients();
    if (c.size() == 1) {
        return Polynomial{};
    }
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * c[k];
    }
    return Polynomial(std::move(d));
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) {
        return Polynomial{};
    }
    const auto& a = p.coefficients();
    const auto& b = q.coefficients();
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
    const auto& a = p.coefficients();
    const auto& b = q.coefficients();
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = p[k] + q[k];
    }
    return Polynomial(std::move(out));
}

Polynomial subtract(const Polynomial& p, const Polynomial& q) { return add(p, scale(q, -1.0)); }

Polynomial scale(const Polynomial& p, double factor) {
    std::vector<double> out = p.coefficients();
    for (double& v : out) {
        v *= factor;
    }
    return Polynomial(std::move(out));
}

Polynomial power(const Polynomial& p, unsigned n) {
    Polynomial result = Polynomial::constant(1.0);
    for (unsigned i = 0; i < n; ++i) {
        result = multiply(result, p);
    }
    return result;
}

PolynomialDivision divide(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) {
        throw DomainError("division by the zero polynomial");
    }
    const int dn = den.degree();
    std::vector<double> rem = num.coefficients();
    if (num.degree() < dn) {
        return {Polynomial{}, num};
    }
    std::vector<double> quot(static_cast<std::size_t>(num.degree() - dn + 1), 0.0);
    const double lead = den.leading();
    for (int k = num.degree() - dn; k >= 0; --k) {
        const double factor = rem[static_cast<std::size_t>(k + dn)] / lead;
        quot[static_cast<std::size_t>(k)] = factor;
        for (int j = 0; j <= dn; ++j) {
            rem[static_cast<std::size_t>(k + j)] -= factor * den[static_cast<std::size_t>(j)];
        }
        rem[static_cast<std::size_t>(k + dn)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(std::max(dn, 1)));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

RootSet roots(const Polynomial& p) {
    if (p.degree() < 1) {
        throw DomainError("constant polynomial has no roots");
    }
    RootSet out;
    out.reserve(static_cast<std::size_t>(p.degree()));

    // Exact zero roots come from vanishing low-order coefficients.
    const auto& all = p.coefficients();
    std::size_t shift = 0;
    while (all[shift] == 0.0) {
        out.emplace_back(0.0, 0.0);
        ++shift;
    }
    const std::vector<double> c(all.begin() + static_cast<std::ptrdiff_t>(shift), all.end());
    const std::size_t n = c.size() - 1;

    if (n == 1) {
        out.emplace_back(-c[0] / c[1], 0.0);
    } else if (n == 2) {
        quadratic_roots(c[0], c[1], c[2], out);
    } else if (n > 2) {
        const Eigen::Index dim = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            companion(0, j) = -c[n - 1 - static_cast<std::size_t>(j)] / c[n];
        }
        for (Eigen::Index i = 1; i < dim; ++i) {
            companion(i, i - 1) = 1.0;
        }
        balance(companion);
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw NumericError("eigenvalue iteration did not converge");
        }
        const Polynomial reduced(c);
        const Polynomial dp = derivative(reduced);
        const auto& ev = solver.eigenvalues();
        for (Eigen::Index i = 0; i < dim; ++i) {
            const Complex lambda = ev[i];
            if (lambda.imag() == 0.0) {
                out.emplace_back(polish_real(reduced, dp, lambda.real()), 0.0);
            } else {
                // The real Schur form yields conjugate pairs in adjacent slots.
                const Complex seed = lambda.imag() > 0.0 ? lambda : std::conj(lambda);
                Complex r = polish(reduced, dp, seed);
                if (r.imag() <= 0.0) {
                    r = seed;
                }
                out.push_back(r);
                out.push_back(std::conj(r));
                ++i;
            }
        }
    }
    return out;
}

Polynomial from_roots(std::span<const Complex> rs, double gain) {
    std::vector<Complex> upper;
    std::vector<Complex> lower;
    Polynomial result = Polynomial::constant(1.0);
    for (const Complex& r : rs) {
        const double tol = 1e-9 * std::max(1.0, std::abs(r));
        if (std::abs(r.imag()) <= tol) {
            result = multiply(result, Polynomial{-r.real(), 1.0});
        } else if (r.imag() > 0.0) {
            upper.push_back(r);
        } else {
            lower.push_back(r);
        }
    }
    if (upper.size() != lower.size()) {
        throw DomainError("root set is not closed under complex conjugation");
    }
    std::vector<bool> used(lower.size(), false);
    for (const Complex& r : upper) {
        const double tol = 1e-9 * std::max(1.0, std::abs(r));
        std::size_t best = lower.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (used[j]) {
                continue;
            }
            const double dist = std::abs(r - std::conj(lower[j]));
            if (best == lower.size() || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best == lower.size() || best_dist > tol) {
            throw DomainError("root set is not closed under complex conjugation");
        }
        used[best] = true;
        const Complex mean = 0.5 * (r + std::conj(lower[best]));
        result = multiply(result, Polynomial{std::norm(mean), -2.0 * mean.real(), 1.0});
    }
    return scale(result, gain);
}

void sort_canonical(RootSet& rs) {
    std::sort(rs.begin(), rs.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
}

double normalized_residual(const Polynomial& p, Complex r) {
    const double scale_factor = p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r)), p.degree());
    return std::abs(eval_complex(p, r)) / scale_factor;
}

} // namespace pzx
