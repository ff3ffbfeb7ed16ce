#include "freenormal/levy.hpp"

#include "freenormal/curve.hpp"
#include "freenormal/errors.hpp"
#include "freenormal/series.hpp"
#include "freenormal/transforms.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <future>
#include <numbers>

namespace freenormal {

namespace {

constexpr double kPi = std::numbers::pi;
// Upper end of u = -log x in the small-x piece; the rest is bounded analytically.
constexpr double kUMax = 60.0;
// Width of the large-x piece beyond x_hi; the Gaussian factor is gone by then.
constexpr double kTailWidth = 30.0;

double height(double x, const CurveConfig& config) {
    if (x == 0.0 || !std::isfinite(x)) fail(ErrorKind::DomainError, "density needs x != 0");
    return solve_H(std::abs(x), config).h;
}

struct Piece {
    double value = 0.0;
    double error = 0.0;
};

Piece small_x_piece(const CurveConfig& config, double rel_tol) {
    CurveSolver solver(config);
    auto integrand = [&](double u) {
        const double x = std::exp(-u);
        return solver.solve(x).h * x / (kPi * (1.0 + x * x));
    };
    const double u0 = -std::log(config.regime.x_lo);
    const auto r = detail::integrate_gk(integrand, u0, kUMax, rel_tol);
    // Beyond kUMax, h(x) <= 2 h0(x) and the integrand is below 2 h0 e^{-u} / pi.
    const double truncation = 2.0 * eval_h_asym_zero(std::exp(-kUMax)) * std::exp(-kUMax) / kPi;
    return {r.value, r.error_estimate + truncation};
}

Piece bulk_piece(const CurveConfig& config, double rel_tol) {
    CurveSolver solver(config);
    auto integrand = [&](double x) { return solver.solve(x).h / (kPi * (1.0 + x * x)); };
    const auto r = detail::integrate_gk(integrand, config.regime.x_lo, config.regime.x_hi, rel_tol);
    return {r.value, r.error_estimate};
}

Piece large_x_piece(const CurveConfig& config, double rel_tol) {
    const double a = config.regime.x_hi;
    auto at_order = [&](int terms) {
        auto integrand = [&](double x) {
            return eval_h_asym_infinity(x, terms).value() / (kPi * (1.0 + x * x));
        };
        return detail::integrate_gk(integrand, a, a + kTailWidth, rel_tol);
    };
    const auto r3 = at_order(3);
    const auto r2 = at_order(2);
    // The change from the last series term bounds the truncation of the series.
    return {r3.value, r3.error_estimate + std::abs(r3.value - r2.value)};
}

// Newton on F(z) = w, confined to the certified region, with residual damping.
bool newton_inverse(Complex w, Complex z, Complex& root) {
    const double scale = std::max(1.0, std::abs(w));
    auto residual_at = [&](Complex p, Complex& f) {
        f = f_tilde(p).value();
        return std::abs(f - w);
    };
    Complex f;
    double res;
    try {
        if (!in_certified_region(z)) return false;
        res = residual_at(z, f);
        for (int it = 0; it < 60 && res > 1e-15 * scale; ++it) {
            const Complex step = (f - w) / (f * (z - f));
            double lambda = 1.0;
            bool accepted = false;
            for (int k = 0; k <= 8; ++k) {
                const Complex trial = z - lambda * step;
                Complex f_trial;
                if (in_certified_region(trial)) {
                    const double r = residual_at(trial, f_trial);
                    if (r < res) {
                        z = trial;
                        f = f_trial;
                        res = r;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!accepted || std::abs(lambda * step) <= 1e-16 * std::abs(z)) break;
        }
    } catch (const Error&) {
        return false;
    }
    if (!(res <= 1e-10 * scale)) return false;
    root = z;
    return true;
}

}  // namespace

double levy_density(double x, const CurveConfig& config) {
    return height(x, config) / (kPi * x * x);
}

double tau_density(double x, const CurveConfig& config) {
    return height(x, config) / (kPi * (1.0 + x * x));
}

std::vector<LevySample> levy_density_table(double x_min, double x_max, int n,
                                           const CurveConfig& config) {
    const CurveTrace trace = trace_p0(x_min, x_max, n, config);
    std::vector<LevySample> out;
    out.reserve(trace.points.size());
    for (const auto& p : trace.points) out.push_back({p.x, p.h / (kPi * p.x * p.x)});
    return out;
}

Complex voiculescu(Complex w, const CurveConfig& config) {
    if (w == Complex(0.0, 0.0)) fail(ErrorKind::DomainError, "phi is undefined at w = 0");
    if (w.imag() < 0.0) fail(ErrorKind::DomainError, "phi needs Im w >= 0");
    if (w.imag() == 0.0) {
        const double x = w.real();
        const CurvePoint p = solve_H(std::abs(x), config);
        return Complex(std::copysign(p.g, x), -p.h) - x;
    }
    for (const Complex seed : {w + 1.0 / w, w}) {
        Complex z;
        if (newton_inverse(w, seed, z) && in_omega(z, config)) return z - w;
    }
    fail(ErrorKind::NoConvergence, "no preimage in Omega found for phi(w)");
}

namespace {

Piece tau_mass(double quad_tol, const CurveConfig& config) {
    if (!(quad_tol > 0.0)) fail(ErrorKind::DomainError, "quadrature tolerance must be > 0");
    auto small = std::async(std::launch::async, small_x_piece, config, quad_tol);
    auto bulk = std::async(std::launch::async, bulk_piece, config, quad_tol);
    auto large = std::async(std::launch::async, large_x_piece, config, quad_tol);
    const Piece parts[] = {small.get(), bulk.get(), large.get()};
    double mass = 0.0;
    double error = 0.0;
    for (const auto& p : parts) {
        mass += 2.0 * p.value;
        error += 2.0 * p.error;
    }
    if (!(error <= quad_tol * std::max(1.0, mass)))
        fail(ErrorKind::QuadratureFailure, "tau mass error estimate above tolerance");
    return {mass, error};
}

}  // namespace

double tau_total_mass(double quad_tol, const CurveConfig& config) {
    return tau_mass(quad_tol, config).value;
}

TauMassReport tau_mass_report(double quad_tol, const CurveConfig& config) {
    TauMassReport report;
    const Piece mass = tau_mass(quad_tol, config);
    report.mass = mass.value;
    report.error_estimate = mass.error;
    report.im_phi_i = voiculescu({0.0, 1.0}, config).imag();
    report.discrepancy = std::abs(report.mass + report.im_phi_i);
    return report;
}

double semicircular_component_check(double T) {
    if (!(T >= 0.0) || !std::isfinite(T)) fail(ErrorKind::DomainError, "T must be >= 0");
    if (T == 0.0) return 0.0;
    return T * std::exp(-g_tilde({0.0, -T}).log_abs());
}

}  // namespace freenormal
