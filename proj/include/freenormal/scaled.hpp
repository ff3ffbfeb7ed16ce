#pragma once

#include <cmath>
#include <complex>

namespace freenormal {

using Complex = std::complex<double>;

/// Complex number stored as mantissa * exp(log_scale).
///
/// |mantissa| is kept in [0.5, 2) (or the value is exactly zero), so values
/// such as exp(-z^2/2) deep in the lower half-plane never overflow. Products
/// and quotients renormalize; sums align to the larger scale and drop a
/// summand whose scale is more than kFlushGap below the other.
class ScaledComplex {
public:
    static constexpr double kFlushGap = 750.0;

    ScaledComplex() = default;
    ScaledComplex(Complex value);  // NOLINT(google-explicit-constructor)
    ScaledComplex(Complex mantissa, double log_scale);

    /// exp(w) without forming the possibly overflowing intermediate.
    static ScaledComplex exp(Complex w);

    const Complex& mantissa() const noexcept { return mantissa_; }
    double log_scale() const noexcept { return log_scale_; }
    bool is_zero() const noexcept { return mantissa_ == Complex(0.0, 0.0); }

    /// Natural log of the modulus; -inf for zero.
    double log_abs() const;
    double arg() const { return std::arg(mantissa_); }
    /// Principal complex logarithm, computed without leaving scaled form.
    Complex log() const { return {log_abs(), arg()}; }

    /// Plain value; overflows to inf / underflows to 0 where binary64 must.
    Complex value() const;
    double real() const { return value().real(); }
    double imag() const { return value().imag(); }

    ScaledComplex conj() const { return {std::conj(mantissa_), log_scale_}; }
    ScaledComplex operator-() const { return {-mantissa_, log_scale_}; }

    ScaledComplex& operator*=(const ScaledComplex& o);
    ScaledComplex& operator/=(const ScaledComplex& o);
    ScaledComplex& operator+=(const ScaledComplex& o);
    ScaledComplex& operator-=(const ScaledComplex& o) { return *this += -o; }

    friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
    friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }
    friend ScaledComplex operator+(ScaledComplex a, const ScaledComplex& b) { return a += b; }
    friend ScaledComplex operator-(ScaledComplex a, const ScaledComplex& b) { return a -= b; }

    ScaledComplex reciprocal() const;

private:
    void normalize();

    Complex mantissa_{0.0, 0.0};
    double log_scale_ = 0.0;
};

/// Positive (or zero) real in the same scaled form; used where a real result
/// such as rho(x) or the large-x height can leave binary64 range.
struct ScaledReal {
    double mantissa = 0.0;
    double log_scale = 0.0;

    static ScaledReal from_log(double log_value) { return {1.0, log_value}; }

    double value() const { return mantissa * std::exp(log_scale); }
    double log() const { return std::log(mantissa) + log_scale; }
};

}  // namespace freenormal
