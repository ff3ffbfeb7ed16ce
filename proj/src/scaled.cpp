#include "freenormal/scaled.hpp"

#include <cmath>
#include <numbers>

namespace freenormal {

ScaledComplex::ScaledComplex(Complex value) : mantissa_(value), log_scale_(0.0) { normalize(); }

ScaledComplex::ScaledComplex(Complex mantissa, double log_scale)
    : mantissa_(mantissa), log_scale_(log_scale) {
    normalize();
}

ScaledComplex ScaledComplex::exp(Complex w) {
    return {std::polar(1.0, w.imag()), w.real()};
}

double ScaledComplex::log_abs() const {
    if (is_zero()) return -INFINITY;
    return std::log(std::abs(mantissa_)) + log_scale_;
}

Complex ScaledComplex::value() const {
    if (is_zero()) return {0.0, 0.0};
    // Split the scale so a value just inside range does not overflow in exp().
    const double half = 0.5 * log_scale_;
    const double f = std::exp(half);
    return mantissa_ * f * f;
}

void ScaledComplex::normalize() {
    const double m = std::abs(mantissa_);
    if (m == 0.0) {
        mantissa_ = {0.0, 0.0};
        log_scale_ = 0.0;
        return;
    }
    if (m >= 0.5 && m < 2.0) return;
    int e = 0;
    std::frexp(m, &e);  // m = f * 2^e with f in [0.5, 1)
    mantissa_ = {std::ldexp(mantissa_.real(), -e), std::ldexp(mantissa_.imag(), -e)};
    log_scale_ += e * std::numbers::ln2;
}

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& o) {
    mantissa_ *= o.mantissa_;
    log_scale_ += o.log_scale_;
    normalize();
    return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& o) {
    mantissa_ /= o.mantissa_;
    log_scale_ -= o.log_scale_;
    normalize();
    return *this;
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const double gap = log_scale_ - o.log_scale_;
    if (gap > kFlushGap) return *this;
    if (gap < -kFlushGap) return *this = o;
    if (gap >= 0.0) {
        mantissa_ += o.mantissa_ * std::exp(-gap);
    } else {
        mantissa_ = mantissa_ * std::exp(gap) + o.mantissa_;
        log_scale_ = o.log_scale_;
    }
    normalize();
    return *this;
}

ScaledComplex ScaledComplex::reciprocal() const {
    return ScaledComplex(Complex(1.0, 0.0)) / *this;
}

}  // namespace freenormal
