#include "freenormal/transforms.hpp"

#include "freenormal/config.hpp"
#include "freenormal/errors.hpp"
#include "quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace freenormal {

namespace {

using LDouble = long double;
using LComplex = std::complex<LDouble>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrtHalfPi = std::sqrt(kPi / 2.0);
const double kSqrtTwoPi = std::sqrt(2.0 * kPi);
constexpr LDouble kLdEps = std::numeric_limits<LDouble>::epsilon();
constexpr LDouble kSqrt2L = std::numbers::sqrt2_v<LDouble>;
const LDouble kSqrtHalfPiL = std::sqrt(std::numbers::pi_v<LDouble> / 2.0L);

LComplex dawson_maclaurin(LComplex zeta) {
    // D(zeta) = sum_n (-2 zeta^2)^n zeta / (2n+1)!!
    const LComplex q = -2.0L * zeta * zeta;
    LComplex term = zeta;
    LComplex sum = zeta;
    for (int n = 1; n < 500; ++n) {
        term *= q / static_cast<LDouble>(2 * n + 1);
        sum += term;
        if (std::abs(term) <= kLdEps * std::abs(sum) && static_cast<LDouble>(n) > std::abs(q)) break;
    }
    return sum;
}

// Taylor expansion of D about a real center c, from D' = 1 - 2 zeta D:
//   (n+1) c_{n+1} = -2 c c_n - 2 c_{n-1},  c_1 = 1 - 2 c c_0.
LComplex dawson_taylor(LDouble center, LDouble value, LComplex delta) {
    LDouble prev = value;
    LDouble cur = 1.0L - 2.0L * center * value;
    LComplex power = delta;
    LComplex sum = value + cur * delta;
    int small_run = 0;
    for (int n = 1; n < 200; ++n) {
        const LDouble next = (-2.0L * center * cur - 2.0L * prev) / static_cast<LDouble>(n + 1);
        prev = cur;
        cur = next;
        power *= delta;
        const LComplex term = cur * power;
        sum += term;
        small_run = std::abs(term) <= kLdEps * std::abs(sum) ? small_run + 1 : 0;
        if (small_run >= 3) break;
    }
    return sum;
}

LComplex dawson_asymptotic(LComplex zeta) {
    // D(zeta) ~ sum_n (2n-1)!! / (2^{n+1} zeta^{2n+1}), |arg zeta| < pi/4.
    const LComplex inv_sq = 1.0L / (zeta * zeta);
    LComplex term = 0.5L / zeta;
    LComplex sum = term;
    for (int n = 1; n < 400; ++n) {
        const LComplex next = term * (static_cast<LDouble>(2 * n - 1) / 2.0L) * inv_sq;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) <= kLdEps * std::abs(sum)) break;
    }
    return sum;
}

// D at the real centers k * step, marched outward from D(0) = 0. Forward
// marching is stable: perturbations evolve like exp(-x^2).
const std::vector<LDouble>& dawson_table() {
    static const std::vector<LDouble> table = [] {
        const LDouble step = kTransform.table_step;
        const auto count =
            static_cast<std::size_t>(std::ceil(kTransform.dawson_asymptotic_abscissa / step)) + 3;
        std::vector<LDouble> t(count);
        t[0] = 0.0L;
        for (std::size_t k = 1; k < count; ++k) {
            const LDouble c = step * static_cast<LDouble>(k - 1);
            t[k] = dawson_taylor(c, t[k - 1], LComplex(step, 0.0L)).real();
        }
        return t;
    }();
    return table;
}

LComplex dawson_near_axis(LComplex zeta) {
    // zeta has Re > 0 here.
    if (zeta.real() > kTransform.dawson_asymptotic_abscissa) return dawson_asymptotic(zeta);
    const LDouble step = kTransform.table_step;
    const auto k = static_cast<std::size_t>(std::lround(static_cast<double>(zeta.real() / step)));
    const LDouble center = step * static_cast<LDouble>(k);
    return dawson_taylor(center, dawson_table()[k], zeta - center);
}

LComplex exp_neg_half_square(LComplex z) { return std::exp(-0.5L * z * z); }

// -i sqrt(pi/2) E + sqrt(2) D(z / sqrt 2), in extended precision.
Complex combine(LComplex z, LComplex dawson_value) {
    const LComplex e = exp_neg_half_square(z);
    const LComplex g = LComplex(0.0L, -kSqrtHalfPiL) * e + kSqrt2L * dawson_value;
    return {static_cast<double>(g.real()), static_cast<double>(g.imag())};
}

// G on the closed upper half-plane region handled by the continued fraction.
Complex cauchy_upper_cf(Complex z) {
    const Complex w = detail::faddeeva_continued_fraction(z / kSqrt2);
    return Complex(0.0, -kSqrtHalfPi) * w;
}

}  // namespace

namespace detail {

std::complex<long double> dawson(std::complex<long double> zeta) {
    if (zeta.real() < 0.0L) return -dawson(-zeta);
    const LDouble series_r = kTransform.series_radius / kSqrt2L;
    if (std::abs(zeta) <= series_r) return dawson_maclaurin(zeta);
    if (std::abs(zeta.imag()) < kTransform.axis_band) return dawson_near_axis(zeta);
    // Off-axis: D = (sqrt(pi)/2) i (exp(-zeta^2) - w(zeta)) on Im > 0, conjugate below.
    const bool lower = zeta.imag() < 0.0L;
    const LComplex zu = lower ? std::conj(zeta) : zeta;
    const Complex wz = faddeeva_continued_fraction(Complex(static_cast<double>(zu.real()),
                                                           static_cast<double>(zu.imag())));
    const LComplex d = LComplex(0.0L, std::sqrt(std::numbers::pi_v<LDouble>) / 2.0L) *
                       (std::exp(-zu * zu) - LComplex(wz.real(), wz.imag()));
    return lower ? std::conj(d) : d;
}

Complex faddeeva_continued_fraction(Complex zeta) {
    // w(zeta) = (i/sqrt(pi)) / (zeta - (1/2)/(zeta - (2/2)/(zeta - (3/2)/(...)))),
    // evaluated by the modified Lentz method.
    constexpr double tiny = 1e-300;
    Complex f = zeta;
    if (f == Complex(0.0, 0.0)) f = tiny;
    Complex c = f;
    Complex d = 0.0;
    for (int n = 1; n < 50000; ++n) {
        const double a = -0.5 * n;
        d = zeta + a * d;
        if (d == Complex(0.0, 0.0)) d = tiny;
        c = zeta + a / c;
        if (c == Complex(0.0, 0.0)) c = tiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 2e-16) break;
    }
    return Complex(0.0, 1.0 / std::sqrt(kPi)) / f;
}

}  // namespace detail

std::string_view to_string(DomainTag tag) noexcept {
    switch (tag) {
        case DomainTag::UpperHalfPlane: return "UpperHalfPlane";
        case DomainTag::RealAxis: return "RealAxis";
        case DomainTag::XiInterior: return "XiInterior";
        case DomainTag::XiBoundary: return "XiBoundary";
        case DomainTag::OutsideXi: return "OutsideXi";
    }
    return "?";
}

DomainTag classify_domain(Complex z) {
    if (z.imag() > 0.0) return DomainTag::UpperHalfPlane;
    if (z.imag() == 0.0) return DomainTag::RealAxis;
    // Lower half-plane: r^2 sin 2theta = 2 x y, so the boundary is |x y| = pi/2.
    constexpr double half_pi = kPi / 2.0;
    const double band = 4.0 * (std::nextafter(half_pi, 4.0) - half_pi);
    const double product = std::abs(z.real()) * std::abs(z.imag());
    if (std::abs(product - half_pi) <= band) return DomainTag::XiBoundary;
    return product < half_pi ? DomainTag::XiInterior : DomainTag::OutsideXi;
}

bool in_certified_region(Complex z) { return classify_domain(z) != DomainTag::OutsideXi; }

ScaledComplex g_tilde(Complex z) {
    const LComplex zl(z.real(), z.imag());
    const double modulus = std::abs(z);
    if (modulus <= kTransform.series_radius) {
        return ScaledComplex(combine(zl, dawson_maclaurin(zl / kSqrt2L)));
    }
    if (std::abs(z.imag()) / kSqrt2 < kTransform.axis_band) {
        return ScaledComplex(combine(zl, detail::dawson(zl / kSqrt2L)));
    }
    if (z.imag() > 0.0) return ScaledComplex(cauchy_upper_cf(z));
    // Below the axis: G(z) - i sqrt(2 pi) exp(-z^2/2), with G(z) = conj G(conj z).
    const ScaledComplex reflected(std::conj(cauchy_upper_cf(std::conj(z))));
    const ScaledComplex exponential = ScaledComplex::exp(-0.5 * z * z) * ScaledComplex(Complex(0.0, kSqrtTwoPi));
    return reflected - exponential;
}

ScaledComplex g_tilde_prime(Complex z) {
    return ScaledComplex(Complex(1.0, 0.0)) - ScaledComplex(z) * g_tilde(z);
}

ScaledComplex f_tilde(Complex z) {
    const ScaledComplex g = g_tilde(z);
    if (g.is_zero() || g.log_abs() < kTransform.pole_log_threshold) {
        fail(ErrorKind::PoleProximity, "G vanishes to binary64 resolution near the requested point");
    }
    return g.reciprocal();
}

ScaledComplex f_tilde_prime(Complex z) {
    const ScaledComplex f = f_tilde(z);
    return f * (ScaledComplex(z) - f);
}

ScaledReal rho(double x) {
    const ScaledComplex g = g_tilde(Complex(0.0, x));
    return {-g.mantissa().imag(), g.log_scale()};
}

Complex cauchy_integral(Complex z) {
    if (z.imag() >= 0.0) return g_tilde(z).value();
    return std::conj(g_tilde(std::conj(z)).value());
}

namespace {

struct Contour {
    double alpha;  // angle of the right ray, -pi/4 + eta
    Complex right;
    Complex left_dir;
};

double contour_angle(Complex z) {
    double a = std::arg(z);
    if (a < -kPi / 2.0) a += 2.0 * kPi;
    return a;
}

Contour make_contour(double eta, double radius, double inner_radius) {
    if (!(eta > 0.0 && eta < kPi / 4.0)) {
        fail(ErrorKind::InvalidContour, "eta must lie in (0, pi/4)");
    }
    const double s = std::sin(2.0 * eta);
    // Tail of int_R^inf exp(-r^2 s / 2) dr, divided by the distance R - |z|.
    const double tail = std::exp(-0.5 * radius * radius * s) / (radius * s);
    if (!(radius > inner_radius + 1.0) || tail / (radius - inner_radius) > 1e-10) {
        fail(ErrorKind::InvalidContour, "radius too small for a 1e-10 tail bound");
    }
    const double alpha = -kPi / 4.0 + eta;
    return {alpha, std::polar(1.0, alpha), std::polar(1.0, -alpha)};
}

Complex gaussian_density(Complex w) { return std::exp(-0.5 * w * w) / kSqrtTwoPi; }

}  // namespace

Complex g_tilde_contour_oracle(Complex z, double eta, double radius) {
    const double angle = contour_angle(z);
    if (!(angle > -kPi / 4.0 + eta && angle < 5.0 * kPi / 4.0 - eta) || z == Complex(0.0, 0.0)) {
        fail(ErrorKind::InvalidContour, "z is not inside D_eta");
    }
    const Contour c = make_contour(eta, radius, std::abs(z));
    auto integrand = [&](double r) -> Complex {
        const Complex wr = r * c.right;
        const Complex wl = r * c.left_dir;
        return gaussian_density(wr) * c.right / (z - wr) + gaussian_density(wl) * c.left_dir / (z + wl);
    };
    const double split = std::min(std::abs(z), radius);
    const auto near = detail::integrate_gk(integrand, 0.0, split, 1e-14);
    const auto far = detail::integrate_gk(integrand, split, radius, 1e-14);
    return near.value + far.value;
}

Complex contour_moment(int n, double eta, double radius) {
    const Contour c = make_contour(eta, radius, 0.0);
    auto integrand = [&](double r) -> Complex {
        const Complex wr = r * c.right;
        const Complex wl = -r * c.left_dir;
        return std::pow(wr, n) * gaussian_density(wr) * c.right +
               std::pow(wl, n) * gaussian_density(wl) * c.left_dir;
    };
    return detail::integrate_gk(integrand, 0.0, radius, 1e-14).value;
}

}  // namespace freenormal
