#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pzx {

using Complex = std::complex<double>;

/// Real polynomial in s. Coefficients are stored in ascending degree, so
/// coefficients()[k] multiplies s^k. Leading coefficients smaller than
/// 1e-14 * max|c| are trimmed on construction; the zero polynomial is [0].
class Polynomial {
public:
    Polynomial();
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double c);
    /// c * s^degree
    static Polynomial monomial(double c, std::size_t degree);

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    bool is_constant() const noexcept { return coeffs_.size() == 1; }
    double leading() const noexcept { return coeffs_.back(); }
    double max_abs_coeff() const noexcept;

    /// Coefficient of s^k, zero beyond the degree.
    double operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// Multiset of complex roots.
using RootSet = std::vector<Complex>;

Complex eval_complex(const Polynomial& p, Complex s);
double eval_real(const Polynomial& p, double s);
/// Derivative with respect to s.
Polynomial derivative(const Polynomial& p);

Polynomial multiply(const Polynomial& p, const Polynomial& q);
Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial subtract(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, double factor);
/// p^n by repeated multiplication from the left: ((p*p)*p)...
Polynomial power(const Polynomial& p, unsigned n);

struct PolynomialDivision {
    Polynomial quotient;
    Polynomial remainder;
};
PolynomialDivision divide(const Polynomial& num, const Polynomial& den);

/// All roots with multiplicity. Non-real roots are returned as exact
/// conjugate pairs. Throws DomainError for constant polynomials.
RootSet roots(const Polynomial& p);

/// Real polynomial with the given roots and leading coefficient `gain`.
/// Throws DomainError unless the roots are closed under conjugation
/// (pairing tolerance 1e-9 * max(1, |r|)).
Polynomial from_roots(std::span<const Complex> rs, double gain);

/// Sort by (real, imaginary) ascending.
void sort_canonical(RootSet& rs);

/// |p(r)| / (max|coeff| * max(1,|r|)^deg), the residual used by the root contract.
double normalized_residual(const Polynomial& p, Complex r);

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) { return add(a, b); }
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return subtract(a, b); }
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }

} // namespace pzx
