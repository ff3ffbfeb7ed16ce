#include "freenormal/curve.hpp"
#include "freenormal/errors.hpp"
#include "freenormal/levy.hpp"
#include "freenormal/series.hpp"
#include "freenormal/transforms.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace freenormal;

namespace {

constexpr double kPi = std::numbers::pi;

struct Reference {
    double x, g, h;
};

// H(x) computed independently at 50-digit precision.
const Reference kReference[] = {
    {1e-6, 0.30872142877793034, 5.08806966821973},
    {1e-5, 0.34032263709506924, 4.6156032194561767},
    {1e-4, 0.38402716662087994, 4.0902660821713714},
    {1e-3, 0.45000958603598565, 3.4899974573085493},
    {0.01, 0.56526662469483395, 2.7732511013750908},
    {0.05, 0.71885638242850213, 2.1589354248488768},
    {0.1, 0.82648550984660338, 1.8507298236161104},
    {0.5, 1.3188444335255706, 0.99290612666671793},
    {1.0, 1.768934902491231, 0.56569589364980772},
    {2.0, 2.5771836146056974, 0.17016436285743909},
    {3.0, 3.3926437215867213, 0.030465959015689648},
    {5.0, 5.2098990026501174, 3.8104974452745395e-5},
    {6.0, 6.1719453348124531, 2.3391100544470628e-7},
    {8.0, 8.1270903403306754, 3.5854984696333713e-13},
    {10.0, 10.101042980847052, 8.6653996789470933e-21},
    {12.0, 12.083928917934578, 3.5091252814341082e-30},
};

bool im_g_positive(double x, double y) { return g_tilde({x, y}).mantissa().imag() > 0.0; }

// Root of Im G(x + iy) = 0 on (-pi/(2x), 0) by plain bisection.
double boundary_by_bisection(double x) {
    double lo = -kPi / (2.0 * x);  // Im G > 0 here
    double hi = -1e-300;           // Im G < 0 just below the axis
    REQUIRE(im_g_positive(x, lo));
    REQUIRE_FALSE(im_g_positive(x, hi));
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (im_g_positive(x, mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("solve_H reproduces reference values") {
    for (const auto& r : kReference) {
        CAPTURE(r.x);
        const CurvePoint p = solve_H(r.x);
        CHECK(std::abs(p.g / r.g - 1.0) <= 1e-12);
        CHECK(std::abs(p.h / r.h - 1.0) <= 1e-12);
        CHECK(std::abs(p.log_h - std::log(r.h)) <= 1e-12);
    }
}

TEST_CASE("residual and domain invariants") {
    CurveSolver solver;
    for (int k = 0; k <= 200; ++k) {
        const double x = std::pow(10.0, -6.0 + 7.4 * k / 200.0);
        CAPTURE(x);
        const CurvePoint p = solver.solve(x);
        CHECK(p.residual <= 1e-10 * std::max(1.0, x));
        CHECK(p.g > 0.0);
        CHECK(p.h > 0.0);
        CHECK(p.g * p.h < kPi / 2.0);
        CHECK(in_certified_region(p.z()));
    }
    CHECK(solver.stats().solves > 0);
}

TEST_CASE("regimes") {
    CHECK(solve_H(0.01).regime == AsymptoticRegime::Kind::NearZero);
    CHECK(solve_H(1.0).regime == AsymptoticRegime::Kind::Bulk);
    CHECK(solve_H(8.0).regime == AsymptoticRegime::Kind::NearInfinity);
    const CurvePoint far = solve_H(40.0);
    CHECK(far.g == doctest::Approx(eval_g_asym_infinity(40.0, 3)).epsilon(1e-15));
    CHECK(far.log_h == doctest::Approx(eval_h_asym_infinity(40.0, 3).log()).epsilon(1e-15));
    CHECK(std::isfinite(far.log_h));
    CHECK_THROWS_AS(solve_H(0.0), Error);
    CHECK_THROWS_AS(solve_H(-1.0), Error);
}

TEST_CASE("small-x agreement with the closed forms") {
    for (double x : {1e-3, 1e-5, 1e-7}) {
        const CurvePoint p = solve_H(x);
        CHECK(std::abs(p.g - eval_g_asym_zero(x)) <= std::sqrt(x));
        CHECK(std::abs(p.h - eval_h_asym_zero(x)) <= std::sqrt(x));
    }
}

TEST_CASE("large-x height window") {
    const double x = 12.0;
    const double ratio = std::exp(solve_H(x).log_h - eval_h_asym_infinity(x, 0).log());
    CHECK(ratio >= 1.0 - 5.0 / (x * x) - 0.01);
    CHECK(ratio <= 1.0 + 0.01);
}

TEST_CASE("limits at both ends") {
    CHECK(solve_H(1e-7).g < 0.3);
    CHECK(solve_H(1e-6).h > 4.0);
    CHECK(solve_H(12.0).g > 11.0);
    CHECK(solve_H(12.0).h < 1e-20);
}

TEST_CASE("traces") {
    const CurveTrace trace = trace_p0(0.01, 10.0, 100);
    REQUIRE(trace.points.size() == 100);
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
        CHECK(trace.points[i].g > trace.points[i - 1].g);
        CHECK(trace.points[i].h < trace.points[i - 1].h);
    }
    CHECK(trace.points.front().x == doctest::Approx(0.01));
    CHECK(trace.points.back().x == doctest::Approx(10.0));

    const CurveTrace tiny = trace_p0(1.0, 1.0 + 1e-9, 2);
    REQUIRE(tiny.points.size() == 2);
    CHECK(std::abs(tiny.points[1].g - tiny.points[0].g) < 1e-8);
    CHECK(tiny.points[0].residual <= 1e-10);
    CHECK(tiny.points[1].residual <= 1e-10);

    const CurveTrace small = trace_p0(1e-4, 1e-2, 20);
    const double gap_lo = std::abs(small.points.front().g * small.points.front().h - kPi / 2.0);
    const double gap_hi = std::abs(small.points.back().g * small.points.back().h - kPi / 2.0);
    CHECK(gap_lo < 0.02);
    CHECK(gap_hi > gap_lo);

    CurveTrace broken = trace;
    std::swap(broken.points[10], broken.points[11]);
    CHECK_THROWS_AS(verify_trace(broken), Error);
}

TEST_CASE("finite differences follow the curve equations") {
    const double d = 1e-3;
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(x);
        const CurvePoint p = solve_H(x);
        const CurvePoint up = solve_H(x + d);
        const CurvePoint down = solve_H(x - d);
        const double denom = x * ((p.g - x) * (p.g - x) + p.h * p.h);
        const double g_rhs = (p.g - x) / denom;
        const double h_rhs = -p.h / denom;
        CHECK(std::abs((up.g - down.g) / (2.0 * d) / g_rhs - 1.0) <= 1e-4);
        CHECK(std::abs((up.h - down.h) / (2.0 * d) / h_rhs - 1.0) <= 1e-4);
    }
}

TEST_CASE("boundary of Omega") {
    CHECK(f_of(3.0) == doctest::Approx(boundary_by_bisection(3.0)).epsilon(1e-12));
    CHECK(f_of(1.0) == doctest::Approx(boundary_by_bisection(1.0)).epsilon(1e-12));
    CHECK(f_of(0.4) == doctest::Approx(boundary_by_bisection(0.4)).epsilon(1e-12));
    for (double x : {0.1, 0.7, 2.5, 7.0}) CHECK(f_of(x) == f_of(-x));
    for (double x : {0.1, 0.05, 0.02}) CHECK(f_of(x) * x == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
    const OmegaBoundary b = omega_boundary(3.0);
    CHECK(b.log_epsilon == doctest::Approx(std::log1p(2.0 * 3.0 * b.f / kPi)).epsilon(1e-10));
    CHECK_THROWS_AS(f_of(0.0), Error);
}

TEST_CASE("membership in Omega") {
    CHECK(in_omega({0.0, 1.0}));
    CHECK(in_omega({0.0, -0.5}));
    CHECK_FALSE(in_omega({3.0, -1.0}));
    CHECK(in_omega({3.0, -0.01}));
    CHECK(in_omega({-3.0, -0.01}));
}

TEST_CASE("F maps Omega onto the upper half-plane") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-5.0, 5.0);
    std::uniform_real_distribution<double> im(0.05, 5.0);
    for (int k = 0; k < 50; ++k) {
        const Complex w(re(rng), im(rng));
        CAPTURE(w);
        Complex z = w;
        for (int it = 0; it < 100; ++it) {
            const Complex r = f_tilde(z).value() - w;
            if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(w))) break;
            Complex step = r / f_tilde_prime(z).value();
            while (!in_certified_region(z - step) ||
                   std::abs(f_tilde(z - step).value() - w) > std::abs(r))
                step *= 0.5;
            z -= step;
        }
        CHECK(std::abs(f_tilde(z).value() - w) <= 1e-10);
        CHECK(in_omega(z));
    }
}

TEST_CASE("level sets") {
    const BoundingBox box;
    const double step = 0.02;

    const auto zero = trace_level_set(0.0, box, step);
    REQUIRE(zero.size() == 2);
    CurveSolver solver;
    int compared = 0;
    for (const auto& tr : zero)
        for (const Complex z : tr.points) {
            if (z.imag() >= 0.0) continue;
            const Complex w = tr.branch == Branch::Left ? -std::conj(z) : z;
            const double x = f_tilde(w).value().real();
            if (x < 1e-3 || x > 12.0) continue;
            CHECK(std::abs(w - solver.solve(x).z()) <= 1e-8);
            ++compared;
        }
    CHECK(compared > 100);

    const auto one = trace_level_set(1.0, box, step);
    const Complex target = voiculescu({0.0, 1.0}) + Complex(0.0, 1.0);
    double nearest = INFINITY;
    for (const auto& tr : one)
        for (const Complex z : tr.points) {
            nearest = std::min(nearest, std::abs(z - target));
            CHECK(std::abs(f_tilde(z).value().imag() - 1.0) <= 1e-10);
        }
    CHECK(nearest <= step);

    for (const auto& tr : trace_level_set(0.4, box, step)) {
        REQUIRE(tr.points.size() > 10);
        for (std::size_t i = 1; i < tr.points.size(); ++i) {
            CHECK(tr.points[i].real() > tr.points[i - 1].real());
            if (tr.branch == Branch::Right)
                CHECK(tr.points[i].imag() > tr.points[i - 1].imag());
            else
                CHECK(tr.points[i].imag() < tr.points[i - 1].imag());
            CHECK(std::abs(tr.points[i] - tr.points[i - 1]) <= step * (1.0 + 1e-12));
        }
    }

    CHECK_THROWS_AS(trace_level_set(100.0, box, step), Error);
}
