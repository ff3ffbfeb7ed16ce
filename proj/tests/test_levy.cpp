#include "freenormal/curve.hpp"
#include "freenormal/errors.hpp"
#include "freenormal/levy.hpp"
#include "freenormal/series.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace freenormal;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("density is even, positive and decreasing after the x factor") {
    double previous = INFINITY;
    for (int k = 0; k <= 120; ++k) {
        const double x = std::pow(10.0, -3.0 + 4.0 * k / 120.0);
        const double d = levy_density(x);
        CHECK(d > 0.0);
        CHECK(d == levy_density(-x));
        CHECK(x * d < previous);
        previous = x * d;
    }
    CHECK_THROWS_AS(levy_density(0.0), Error);
    CHECK_THROWS_AS(tau_density(0.0), Error);
}

TEST_CASE("density at x = 8 follows the large-x series") {
    const double expected = eval_h_asym_infinity(8.0, 3).value() / (kPi * 64.0);
    CHECK(std::abs(levy_density(8.0) / expected - 1.0) <= 1e-4);
    CHECK(tau_density(8.0) == doctest::Approx(levy_density(8.0) * 64.0 / 65.0).epsilon(1e-14));
}

TEST_CASE("table matches pointwise evaluation") {
    const auto table = levy_density_table(0.01, 10.0, 50);
    REQUIRE(table.size() == 50);
    for (const auto& s : table) CHECK(s.density == doctest::Approx(levy_density(s.x)).epsilon(1e-12));
}

TEST_CASE("density derivative matches the curve equation") {
    const double x = 1.0;
    const double d = 1e-4;
    const CurvePoint p = solve_H(x);
    const double h_prime = -p.h / (x * ((p.g - x) * (p.g - x) + p.h * p.h));
    const double expected = (h_prime / (x * x) - 2.0 * p.h / (x * x * x)) / kPi;
    const double fd = (levy_density(x + d) - levy_density(x - d)) / (2.0 * d);
    CHECK(fd == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("Voiculescu transform") {
    const CurvePoint p = solve_H(1.5);
    const Complex real_case = voiculescu(Complex(1.5, 0.0));
    CHECK(std::abs(real_case - Complex(p.g - 1.5, -p.h)) <= 1e-14);
    const Complex mirrored = voiculescu(Complex(-1.5, 0.0));
    CHECK(std::abs(mirrored - Complex(1.5 - p.g, -p.h)) <= 1e-14);

    CHECK(std::abs(voiculescu(Complex(0.0, 1.0)).real()) <= 1e-12);

    const Complex w = std::polar(20.0, kPi / 3.0);
    const Complex lead = 1.0 / w + 1.0 / (w * w * w);
    CHECK(std::abs(voiculescu(w) - lead) <= 2.0 * 4.0 / std::pow(20.0, 5));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(-6.0, 6.0);
    std::uniform_real_distribution<double> im(0.01, 6.0);
    for (int k = 0; k < 200; ++k) {
        const Complex v(re(rng), im(rng));
        CAPTURE(v);
        const Complex phi = voiculescu(v);
        CHECK(phi.imag() <= 1e-12);
        CHECK(std::abs(voiculescu(-std::conj(v)) + std::conj(phi)) <= 1e-10 * std::max(1.0, std::abs(phi)));
    }
    CHECK_THROWS_AS(voiculescu(0.0), Error);
    CHECK_THROWS_AS(voiculescu(Complex(1.0, -1.0)), Error);
}

TEST_CASE("total mass of tau") {
    const TauMassReport r = tau_mass_report(1e-8);
    CHECK(r.discrepancy <= 1e-6);
    CHECK(r.error_estimate <= 1e-8);
    CHECK(r.mass == doctest::Approx(-voiculescu(Complex(0.0, 1.0)).imag()).epsilon(1e-6));
    CHECK(tau_total_mass(1e-8) == r.mass);

    CHECK(std::isfinite(tau_density(1e-6)));
    CHECK(tau_density(1e-6) * kPi == doctest::Approx(std::sqrt(2.0 * std::log(1e6))).epsilon(0.05));

    const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double x) { return eval_h_asym_infinity(x, 0).value() / (kPi * (1.0 + x * x)); }, 10.0, 40.0, 15,
        1e-12);
    CHECK(tail < 1e-20);
}

TEST_CASE("no mass at zero") {
    const double expected = 6.0 * std::exp(-18.0) / std::sqrt(2.0 * kPi);
    CHECK(semicircular_component_check(6.0) == doctest::Approx(expected).epsilon(0.01));
    double previous = INFINITY;
    for (double t : {3.0, 4.0, 5.0, 6.0}) {
        const double v = semicircular_component_check(t);
        CHECK(v < previous);
        previous = v;
    }
    CHECK(semicircular_component_check(0.0) == 0.0);
    CHECK_THROWS_AS(semicircular_component_check(-1.0), Error);
}
