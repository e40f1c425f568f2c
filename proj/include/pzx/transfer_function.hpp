#pragma once

#include "pzx/poly.hpp"

namespace pzx {

/// Rational transfer function num(s)/den(s) times exp(-delay*s).
struct TransferFunction {
    Polynomial num = Polynomial::constant(1.0);
    Polynomial den = Polynomial::constant(1.0);
    double delay = 0.0; ///< seconds, >= 0

    friend bool operator==(const TransferFunction&, const TransferFunction&) = default;
};

/// Throws DomainError if den is zero, delay is negative or anything is non-finite.
void validate(const TransferFunction& tf);
TransferFunction make_transfer_function(Polynomial num, Polynomial den, double delay = 0.0);

/// H(s) including the delay factor.
Complex evaluate(const TransferFunction& tf, Complex s);
/// Rational part only, at a real abscissa.
double evaluate_rational(const TransferFunction& tf, double s);

RootSet poles(const TransferFunction& tf);
RootSet zeros(const TransferFunction& tf);

/// num(0)/den(0); infinite when den(0) == 0.
double static_gain(const TransferFunction& tf);
bool strictly_proper(const TransferFunction& tf);

} // namespace pzx
