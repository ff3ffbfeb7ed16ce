#pragma once

#include "freenormal/scaled.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>
#include <vector>

namespace freenormal {

using Rational = boost::multiprecision::cpp_rational;

/// Exact coefficient list; coefficients[k] multiplies z^(offset - 2k).
struct RationalSeries {
    std::vector<Rational> coefficients;
    int offset = 0;

    std::size_t size() const { return coefficients.size(); }
    const Rational& operator[](std::size_t k) const { return coefficients[k]; }
    std::vector<double> to_doubles() const;
    /// "p/q" (or "p" for integers).
    std::vector<std::string> to_strings() const;
    /// (numerator, denominator) decimal string pairs.
    std::vector<std::pair<std::string, std::string>> to_fraction_pairs() const;
};

/// Truncated formal power series sum_k c_k u^k with exact coefficients,
/// kept to a fixed order (number of stored coefficients).
class PowerSeries {
public:
    explicit PowerSeries(std::size_t order) : c_(order) {}
    PowerSeries(std::vector<Rational> coefficients) : c_(std::move(coefficients)) {}  // NOLINT

    static PowerSeries constant(const Rational& value, std::size_t order);

    std::size_t order() const { return c_.size(); }
    Rational& operator[](std::size_t k) { return c_[k]; }
    const Rational& operator[](std::size_t k) const { return c_[k]; }
    const std::vector<Rational>& coefficients() const { return c_; }

    PowerSeries& operator+=(const PowerSeries& o);
    PowerSeries& operator-=(const PowerSeries& o);
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator*(PowerSeries a, const Rational& s);

    /// 1/p; requires a nonzero constant term.
    PowerSeries reciprocal() const;
    /// p^n for any integer n (negative powers go through reciprocal()).
    PowerSeries pow(int n) const;
    /// exp(p) for p with zero constant term, by n e_n = sum_k k p_k e_{n-k}.
    PowerSeries exp() const;
    /// Multiply by u^k, dropping terms beyond the order.
    PowerSeries shifted(std::size_t k) const;

    friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }

private:
    std::vector<Rational> c_;
};

/// m_0, m_2, ..., m_{2(N-1)} of N(0,1): (2n-1)!!.
RationalSeries moments(int count);

/// b_2, ..., b_{2N}: F(z) = z - sum b_{2n} z^{1-2n}, the reciprocal of the
/// moment Laurent series.
RationalSeries boolean_cumulants(int count);

/// kappa_2, ..., kappa_{2N}: F^{-1}(w) = w + sum kappa_{2n} w^{1-2n}, obtained
/// by re-substituting the current inverse into the Boolean expansion, one
/// new coefficient per pass.
RationalSeries free_cumulants(int count);

/// a_2, ..., a_{2N} of the large-x height expansion:
///   1 + sum a_{2n} x^{-2n} = (F^{-1})'(x) exp[-(F^{-1}(x)^2 - x^2 - 2)/2].
RationalSeries h_infinity_coefficients(int count);

/// c_2, ..., c_{2N} of the large-x boundary ordinate:
///   1 + sum c_{2n} x^{-2n} = (1 - sum b_{2n} x^{-2n})^2 / (1 + sum (2n-1) b_{2n} x^{-2n}).
RationalSeries f_infinity_coefficients(int count);

/// Full series in u = x^{-2} including the constant 1, for the two families above.
PowerSeries h_infinity_series(int count);
PowerSeries f_infinity_series(int count);

// Floating evaluators of the closed-form asymptotics.

/// x + sum_{n=1}^{N} kappa_{2n} / x^{2n-1}.
double eval_g_asym_infinity(double x, int terms);

/// (1/e) sqrt(pi/2) x^2 exp(-x^2/2) (1 + sum_{n=1}^{N} a_{2n} x^{-2n}); N = 0
/// gives the leading term alone.
ScaledReal eval_h_asym_infinity(double x, int terms);

/// Magnitude of the boundary ordinate at large abscissa,
/// sqrt(pi/2) x^2 exp(-x^2/2) (1 + sum c_{2n} x^{-2n}); f(x) is its negative.
ScaledReal eval_f_asym_infinity(double x, int terms);

/// Zero-regime closed forms with L = log(1/(sqrt(2 pi) x)), S = sqrt(L^2 + pi^2/4):
/// g = sqrt(S - L), h = sqrt(S + L). DomainError unless 0 < x < 1/sqrt(2 pi).
double eval_g_asym_zero(double x);
double eval_h_asym_zero(double x);

/// -pi / (2x). DomainError for x <= 0.
double eval_f_asym_zero(double x);

/// Inverse of the zero-regime g formula: the x with eval_g_asym_zero(x) = g.
/// Returned as log(x) since x underflows quickly as g decreases.
double log_x_for_g_asym_zero(double g);

}  // namespace freenormal
