#include "pzx/transfer_function.hpp"

#include "pzx/error.hpp"

#include <cmath>
#include <limits>

namespace pzx {

void validate(const TransferFunction& tf) {
    if (tf.den.is_zero()) {
        throw DomainError("denominator is identically zero");
    }
    if (!std::isfinite(tf.delay) || tf.delay < 0.0) {
        throw DomainError("delay must be finite and nonnegative");
    }
}

TransferFunction make_transfer_function(Polynomial num, Polynomial den, double delay) {
    TransferFunction tf{std::move(num), std::move(den), delay};
    validate(tf);
    return tf;
}

Complex evaluate(const TransferFunction& tf, Complex s) {
    Complex h = eval_complex(tf.num, s) / eval_complex(tf.den, s);
    if (tf.delay != 0.0) {
        h *= std::exp(-tf.delay * s);
    }
    return h;
}

double evaluate_rational(const TransferFunction& tf, double s) {
    return eval_real(tf.num, s) / eval_real(tf.den, s);
}

RootSet poles(const TransferFunction& tf) {
    if (tf.den.degree() < 1) {
        return {};
    }
    RootSet r = roots(tf.den);
    sort_canonical(r);
    return r;
}

RootSet zeros(const TransferFunction& tf) {
    if (tf.num.degree() < 1) {
        return {};
    }
    RootSet r = roots(tf.num);
    sort_canonical(r);
    return r;
}

double static_gain(const TransferFunction& tf) {
    if (tf.den[0] == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return tf.num[0] / tf.den[0];
}

bool strictly_proper(const TransferFunction& tf) {
    return tf.num.is_zero() || tf.num.degree() < tf.den.degree();
}

} // namespace pzx
