#include "freenormal/errors.hpp"
#include "freenormal/transforms.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace freenormal;

namespace {

constexpr double kPi = std::numbers::pi;

double phi(double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); }

template <class F>
double integrate(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

// Cauchy integral of N(0,1) by direct quadrature over [-40, 40]; the tail is below 1e-300.
Complex cauchy_by_quadrature(Complex z) {
    const double re = integrate([&](double x) { return std::real(1.0 / (z - x)) * phi(x); }, -40.0, 40.0);
    const double im = integrate([&](double x) { return std::imag(1.0 / (z - x)) * phi(x); }, -40.0, 40.0);
    return {re, im};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("G at the origin") {
    const Complex g = g_tilde(0.0).value();
    CHECK(g.real() == 0.0);
    CHECK(g.imag() == doctest::Approx(-1.2533141373155).epsilon(1e-13));
}

TEST_CASE("imaginary part on the real line is the Gaussian density") {
    for (int k = 0; k < 1000; ++k) {
        const double x = -8.0 + 16.0 * k / 999.0;
        const double expected = -std::sqrt(kPi / 2.0) * std::exp(-x * x / 2.0);
        CHECK(std::abs(g_tilde(x).imag() - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("agreement with direct quadrature in the upper half-plane") {
    for (Complex z : {Complex(0.0, 2.0), Complex(1.0, 0.5), Complex(-3.0, 1.0), Complex(6.0, 0.2)})
        CHECK(rel(g_tilde(z).value(), cauchy_by_quadrature(z)) <= 1e-10);
}

TEST_CASE("derivative") {
    CHECK(std::abs(g_tilde_prime(0.0).value() - 1.0) < 1e-15);
    const double h = 1e-5;
    const Complex fd = (g_tilde(3.0 + h).value() - g_tilde(3.0 - h).value()) / (2.0 * h);
    CHECK(rel(g_tilde_prime(3.0).value(), fd) <= 1e-8);

    const Complex z = std::polar(50.0, kPi / 3.0);
    const Complex lead = -z * z * g_tilde_prime(z).value();
    CHECK(std::abs(lead - 1.0) <= 4.0 / std::norm(z));
}

TEST_CASE("G' + zG = 1") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int k = 0; k < 300; ++k) {
        const Complex z(u(rng), u(rng) / 2.0);
        const ScaledComplex g = g_tilde(z);
        const ScaledComplex lhs = g_tilde_prime(z) + ScaledComplex(z) * g;
        const double scale = std::max(1.0, std::exp((ScaledComplex(z) * g).log_abs()));
        CHECK(std::abs(lhs.value() - 1.0) <= 1e-10 * scale);
    }
}

TEST_CASE("reflection symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    for (int k = 0; k < 200; ++k) {
        const Complex z(u(rng), u(rng));
        const ScaledComplex a = g_tilde(-std::conj(z));
        const ScaledComplex b = g_tilde(z).conj();
        CHECK(std::abs(a.log_abs() - b.log_abs()) <= 1e-12);
        CHECK(std::abs(((a + b) / a).value()) <= 1e-12);
    }
}

TEST_CASE("F at the origin and along the imaginary axis") {
    const Complex f0 = f_tilde(0.0).value();
    CHECK(f0.real() == 0.0);
    CHECK(f0.imag() == doctest::Approx(0.7978845608).epsilon(1e-10));
    double previous = 0.0;
    for (double t : {-6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0}) {
        const Complex f = f_tilde(Complex(0.0, t)).value();
        CHECK(std::abs(f.real()) <= 1e-15 * std::abs(f));
        CHECK(f.imag() > previous);
        previous = f.imag();
    }
    CHECK(f_tilde(Complex(0.0, 8.0)).value().imag() > 8.0);
    CHECK(f_tilde(Complex(0.0, -6.0)).value().imag() < 1e-7);
}

TEST_CASE("F' = F (z - F)") {
    const Complex z(1.0, 1.0);
    const ScaledComplex f = f_tilde(z);
    const Complex expected = (f * ScaledComplex(z - f.value())).value();
    CHECK(rel(f_tilde_prime(z).value(), expected) <= 1e-10);
}

TEST_CASE("rho") {
    CHECK(rho(0.0).value() == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));
    // rho(-3) = sqrt(2 pi) e^{9/2} - 3 int phi(x) / (x^2 + 9) dx.
    const double tail = integrate([](double x) { return phi(x) / (x * x + 9.0); }, -40.0, 40.0);
    const double expected = std::sqrt(2.0 * kPi) * std::exp(4.5) - 3.0 * tail;
    CHECK(rho(-3.0).value() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rho(1.0).value() > rho(2.0).value());
    double previous = INFINITY;
    for (int k = 0; k <= 600; ++k) {
        const double v = rho(-6.0 + 12.0 * k / 600.0).log();
        CHECK(v < previous);
        previous = v;
    }
    CHECK(std::isfinite(rho(-40.0).log()));
}

TEST_CASE("domain classification") {
    CHECK(classify_domain({1.0, -1.0}) == DomainTag::XiInterior);
    CHECK(classify_domain({1.0, -kPi / 2.0}) == DomainTag::XiBoundary);
    CHECK(classify_domain({2.0, -2.0}) == DomainTag::OutsideXi);
    CHECK(classify_domain({0.0, 1.0}) == DomainTag::UpperHalfPlane);
    CHECK(classify_domain({3.0, 0.0}) == DomainTag::RealAxis);
    CHECK(classify_domain({0.0, -50.0}) == DomainTag::XiInterior);
    CHECK(in_certified_region({-2.0, -0.5}));
    CHECK_FALSE(in_certified_region({-2.0, -2.0}));
}

TEST_CASE("sign of F on and inside the pole-free domain") {
    // Near Re z = 0 the sign of Im F on the boundary is below roundoff.
    for (int k = 0; k < 100; ++k) {
        const double x = 0.25 + 9.75 * k / 99.0;
        CHECK(f_tilde({x, -kPi / (2.0 * x)}).mantissa().imag() < 0.0);
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double x = 10.0 * u(rng) + 1e-3;
        const double y = -kPi / (2.0 * x) * u(rng);
        CHECK(f_tilde({x, y}).mantissa().real() > 0.0);
    }
}

TEST_CASE("large-z expansion") {
    double previous = INFINITY;
    for (double r : {20.0, 40.0, 80.0}) {
        const Complex z = std::polar(r, kPi / 3.0);
        const Complex partial = 1.0 / z + 1.0 / std::pow(z, 3) + 3.0 / std::pow(z, 5);
        const Complex scaled = std::pow(z, 7) * (g_tilde(z).value() - partial);
        const double gap = std::abs(scaled - 15.0);
        CHECK(gap <= 2.0 * 105.0 / (r * r));
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("contour oracle") {
    CHECK(rel(g_tilde_contour_oracle({0.0, 5.0}, kPi / 8.0, 24.0), g_tilde({0.0, 5.0}).value()) <= 1e-10);
    const Complex z = std::polar(4.0, -kPi / 8.0);
    CHECK(rel(g_tilde_contour_oracle(z, kPi / 32.0, 24.0), g_tilde(z).value()) <= 1e-10);
    CHECK(std::abs(contour_moment(0, kPi / 8.0, 24.0) - 1.0) <= 1e-12);
    CHECK(std::abs(contour_moment(2, kPi / 8.0, 24.0) - 1.0) <= 1e-12);
    CHECK(std::abs(contour_moment(4, kPi / 8.0, 24.0) - 3.0) <= 1e-11);
    CHECK_THROWS_AS(g_tilde_contour_oracle({0.0, -2.0}, kPi / 32.0, 24.0), Error);
    CHECK_THROWS_AS(g_tilde_contour_oracle({0.0, 2.0}, kPi / 32.0, 3.0), Error);
}

TEST_CASE("deep lower half-plane stays representable") {
    const ScaledComplex g = g_tilde({0.0, -40.0});
    CHECK(g.log_abs() == doctest::Approx(800.0 + std::log(std::sqrt(2.0 * kPi))).epsilon(1e-12));
    CHECK(f_tilde({0.0, -40.0}).log_abs() < -799.0);
}
