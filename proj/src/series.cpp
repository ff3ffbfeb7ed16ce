#include "freenormal/series.hpp"

#include "freenormal/errors.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace freenormal {

namespace {

std::string rational_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

void require_count(int count) {
    if (count < 1) fail(ErrorKind::DomainError, "series length must be at least 1");
}

// 1 + sum_{n=1}^{N} s_n u^n from a coefficient list s_1..s_N.
PowerSeries one_plus(const std::vector<Rational>& tail, std::size_t order) {
    PowerSeries p = PowerSeries::constant(1, order);
    for (std::size_t n = 1; n < order && n - 1 < tail.size(); ++n) p[n] = tail[n - 1];
    return p;
}

// Grow-only cache of an exact table whose prefixes are stable in the length.
class TableCache {
public:
    explicit TableCache(std::vector<Rational> (*compute)(int)) : compute_(compute) {}

    RationalSeries get(int count, int offset) {
        std::lock_guard lock(mutex_);
        if (static_cast<int>(table_.size()) < count) {
            // Grow geometrically so repeated small increases stay cheap.
            const int target = std::max(count, 2 * static_cast<int>(table_.size()));
            table_ = compute_(target);
            doubles_.assign(table_.size(), 0.0);
            for (std::size_t k = 0; k < table_.size(); ++k)
                doubles_[k] = static_cast<double>(table_[k]);
        }
        return {std::vector<Rational>(table_.begin(), table_.begin() + count), offset};
    }

    std::vector<double> doubles(int count) {
        get(count, 0);
        std::lock_guard lock(mutex_);
        return {doubles_.begin(), doubles_.begin() + count};
    }

private:
    std::vector<Rational> (*compute_)(int);
    std::mutex mutex_;
    std::vector<Rational> table_;
    std::vector<double> doubles_;
};

std::vector<Rational> compute_boolean(int count) {
    const auto order = static_cast<std::size_t>(count) + 1;
    PowerSeries m(order);
    Rational dfact = 1;
    for (std::size_t n = 0; n < order; ++n) {
        m[n] = dfact;
        dfact *= 2 * static_cast<int>(n) + 1;
    }
    const PowerSeries inv = m.reciprocal();
    std::vector<Rational> b(count);
    for (int n = 1; n <= count; ++n) b[n - 1] = -inv[n];
    return b;
}

std::vector<Rational> compute_free(int count) {
    const auto order = static_cast<std::size_t>(count) + 1;
    const std::vector<Rational> b = compute_boolean(count);
    // F^{-1}(w) = w P(u), u = w^{-2}. F(w P) = w P (1 - sum b_n u^n P^{-2n}) = w
    // gives the fixed point P = 1 + sum b_n u^n P^{1-2n}; each pass fixes one
    // more coefficient.
    PowerSeries p = PowerSeries::constant(1, order);
    for (int pass = 0; pass < count; ++pass) {
        const PowerSeries q = p.reciprocal();
        const PowerSeries q2 = q * q;
        PowerSeries power = q;  // P^{-(2n-1)}, starting at n = 1
        PowerSeries next = PowerSeries::constant(1, order);
        for (int n = 1; n <= count; ++n) {
            next += power.shifted(n) * b[n - 1];
            power = power * q2;
        }
        p = std::move(next);
    }
    std::vector<Rational> kappa(count);
    for (int n = 1; n <= count; ++n) kappa[n - 1] = p[n];
    return kappa;
}

std::vector<Rational> compute_h_coefficients(int count) {
    const auto order = static_cast<std::size_t>(count) + 1;
    // K/u needs kappa through index count + 1.
    const std::vector<Rational> kappa = compute_free(count + 1);
    PowerSeries derivative = PowerSeries::constant(1, order);
    for (int n = 1; n <= count; ++n) derivative[n] = -Rational(2 * n - 1) * kappa[n - 1];

    // F^{-1}(x)^2 - x^2 - 2 = (2K + K^2)/u - 2 with K = sum kappa_n u^n, K_1 = 1.
    PowerSeries k_over_u(order);  // K/u
    for (int n = 0; n <= count; ++n) k_over_u[n] = kappa[n];
    PowerSeries k(order);
    for (int n = 1; n <= count; ++n) k[n] = kappa[n - 1];
    PowerSeries exponent = k_over_u * k;  // K^2/u
    for (int n = 1; n <= count; ++n) exponent[n] += 2 * kappa[n];
    exponent[0] = 0;
    exponent = exponent * Rational(-1, 2);

    const PowerSeries result = derivative * exponent.exp();
    std::vector<Rational> a(count);
    for (int n = 1; n <= count; ++n) a[n - 1] = result[n];
    return a;
}

std::vector<Rational> compute_f_coefficients(int count) {
    const auto order = static_cast<std::size_t>(count) + 1;
    const std::vector<Rational> b = compute_boolean(count);
    PowerSeries one_minus_b = PowerSeries::constant(1, order);
    PowerSeries weighted = PowerSeries::constant(1, order);
    for (int n = 1; n <= count; ++n) {
        one_minus_b[n] = -b[n - 1];
        weighted[n] = Rational(2 * n - 1) * b[n - 1];
    }
    const PowerSeries result = one_minus_b * one_minus_b * weighted.reciprocal();
    std::vector<Rational> c(count);
    for (int n = 1; n <= count; ++n) c[n - 1] = result[n];
    return c;
}

TableCache& boolean_cache() {
    static TableCache cache(compute_boolean);
    return cache;
}
TableCache& free_cache() {
    static TableCache cache(compute_free);
    return cache;
}
TableCache& h_cache() {
    static TableCache cache(compute_h_coefficients);
    return cache;
}
TableCache& f_cache() {
    static TableCache cache(compute_f_coefficients);
    return cache;
}

// 1 + sum_{n=1}^{N} s_n x^{-2n} by Horner in u = x^{-2}.
double one_plus_series(const std::vector<double>& s, double x) {
    const double u = 1.0 / (x * x);
    double acc = 0.0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) acc = (acc + *it) * u;
    return 1.0 + acc;
}

constexpr double kLogSqrtHalfPi = 0.22579135264472743;  // log sqrt(pi/2)
constexpr double kZeroRegimeLimit = 0.3989422804014327;  // 1/sqrt(2 pi)

void require_zero_regime(double x) {
    if (!(x > 0.0 && x < kZeroRegimeLimit))
        fail(ErrorKind::DomainError, "zero-regime formulas need 0 < x < 1/sqrt(2 pi)");
}

// L = log(1/(sqrt(2 pi) x)) and S = sqrt(L^2 + pi^2/4).
std::pair<double, double> zero_regime_ls(double x) {
    require_zero_regime(x);
    const double l = -std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi);
    return {l, std::hypot(l, 0.5 * std::numbers::pi)};
}

}  // namespace

std::vector<double> RationalSeries::to_doubles() const {
    std::vector<double> out;
    out.reserve(coefficients.size());
    for (const auto& c : coefficients) out.push_back(static_cast<double>(c));
    return out;
}

std::vector<std::string> RationalSeries::to_strings() const {
    std::vector<std::string> out;
    out.reserve(coefficients.size());
    for (const auto& c : coefficients) out.push_back(rational_string(c));
    return out;
}

std::vector<std::pair<std::string, std::string>> RationalSeries::to_fraction_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(coefficients.size());
    for (const auto& c : coefficients)
        out.emplace_back(boost::multiprecision::numerator(c).str(),
                         boost::multiprecision::denominator(c).str());
    return out;
}

PowerSeries PowerSeries::constant(const Rational& value, std::size_t order) {
    PowerSeries p(order);
    if (order > 0) p[0] = value;
    return p;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
    for (std::size_t k = 0; k < c_.size() && k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
    for (std::size_t k = 0; k < c_.size() && k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    const std::size_t order = std::min(a.order(), b.order());
    PowerSeries r(order);
    for (std::size_t i = 0; i < order; ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; i + j < order; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
}

PowerSeries operator*(PowerSeries a, const Rational& s) {
    for (auto& c : a.c_) c *= s;
    return a;
}

PowerSeries PowerSeries::reciprocal() const {
    if (c_.empty() || c_[0] == 0)
        fail(ErrorKind::DomainError, "series reciprocal needs a nonzero constant term");
    PowerSeries r(order());
    r.c_[0] = 1 / c_[0];
    for (std::size_t n = 1; n < order(); ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
        r.c_[n] = -acc * r.c_[0];
    }
    return r;
}

PowerSeries PowerSeries::pow(int n) const {
    PowerSeries base = n < 0 ? reciprocal() : *this;
    unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
    PowerSeries result = constant(1, order());
    while (e != 0) {
        if (e & 1U) result = result * base;
        e >>= 1U;
        if (e != 0) base = base * base;
    }
    return result;
}

PowerSeries PowerSeries::exp() const {
    if (!c_.empty() && c_[0] != 0)
        fail(ErrorKind::DomainError, "series exponential needs a zero constant term");
    PowerSeries e(order());
    if (order() == 0) return e;
    e.c_[0] = 1;
    for (std::size_t n = 1; n < order(); ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= n; ++k)
            acc += Rational(static_cast<long long>(k)) * c_[k] * e.c_[n - k];
        e.c_[n] = acc / static_cast<long long>(n);
    }
    return e;
}

PowerSeries PowerSeries::shifted(std::size_t k) const {
    PowerSeries r(order());
    for (std::size_t n = k; n < order(); ++n) r.c_[n] = c_[n - k];
    return r;
}

RationalSeries moments(int count) {
    require_count(count);
    RationalSeries s{{}, -1};
    Rational m = 1;
    for (int n = 0; n < count; ++n) {
        s.coefficients.push_back(m);
        m *= 2 * n + 1;
    }
    return s;
}

RationalSeries boolean_cumulants(int count) {
    require_count(count);
    return boolean_cache().get(count, -1);
}

RationalSeries free_cumulants(int count) {
    require_count(count);
    return free_cache().get(count, -1);
}

RationalSeries h_infinity_coefficients(int count) {
    require_count(count);
    return h_cache().get(count, -2);
}

RationalSeries f_infinity_coefficients(int count) {
    require_count(count);
    return f_cache().get(count, -2);
}

PowerSeries h_infinity_series(int count) {
    return one_plus(h_infinity_coefficients(count).coefficients, count + 1);
}

PowerSeries f_infinity_series(int count) {
    return one_plus(f_infinity_coefficients(count).coefficients, count + 1);
}

double eval_g_asym_infinity(double x, int terms) {
    if (!(x > 0.0)) fail(ErrorKind::DomainError, "large-x series needs x > 0");
    if (terms < 1) return x;
    return x * one_plus_series(free_cache().doubles(terms), x);
}

ScaledReal eval_h_asym_infinity(double x, int terms) {
    if (!(x > 0.0)) fail(ErrorKind::DomainError, "large-x series needs x > 0");
    const double lead = -1.0 + kLogSqrtHalfPi + 2.0 * std::log(x) - 0.5 * x * x;
    const double factor = terms < 1 ? 1.0 : one_plus_series(h_cache().doubles(terms), x);
    return {factor, lead};
}

ScaledReal eval_f_asym_infinity(double x, int terms) {
    if (!(x > 0.0)) fail(ErrorKind::DomainError, "large-x series needs x > 0");
    const double lead = kLogSqrtHalfPi + 2.0 * std::log(x) - 0.5 * x * x;
    const double factor = terms < 1 ? 1.0 : one_plus_series(f_cache().doubles(terms), x);
    return {factor, lead};
}

double eval_g_asym_zero(double x) {
    const auto [l, s] = zero_regime_ls(x);
    // sqrt(S - L) without the cancellation: S - L = (pi^2/4) / (S + L).
    return 0.5 * std::numbers::pi / std::sqrt(s + l);
}

double eval_h_asym_zero(double x) {
    const auto [l, s] = zero_regime_ls(x);
    return std::sqrt(s + l);
}

double eval_f_asym_zero(double x) {
    if (!(x > 0.0)) fail(ErrorKind::DomainError, "f asymptotic needs x > 0");
    return -0.5 * std::numbers::pi / x;
}

double log_x_for_g_asym_zero(double g) {
    if (!(g > 0.0)) fail(ErrorKind::DomainError, "g must be positive");
    // S + L = pi^2 / (4 g^2) and S - L = g^2.
    const double sum = 0.25 * std::numbers::pi * std::numbers::pi / (g * g);
    const double l = 0.5 * (sum - g * g);
    return -l - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace freenormal
