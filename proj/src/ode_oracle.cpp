#include "freenormal/ode_oracle.hpp"

#include "freenormal/curve.hpp"
#include "freenormal/errors.hpp"
#include "freenormal/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace freenormal {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double im_g(Complex z) { return g_tilde(z).value().imag(); }

// Root of Im G(c + iy) on the Xi segment y in (-pi/(2c), 0).
double boundary_root(double c) {
    double lo = -kHalfPi / c;  // Im G > 0 on the boundary of Xi
    double hi = 0.0;           // Im G < 0 on the real axis
    if (!(im_g({c, lo}) > 0.0 && im_g({c, hi}) < 0.0))
        fail(ErrorKind::NoSignChange, "no sign change of Im G on the Xi segment at Re z = " +
                                          std::to_string(c));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (im_g({c, mid}) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double value_on_boundary(double c) { return f_tilde({c, boundary_root(c)}).value().real(); }

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Fifth-order weights minus the embedded fourth-order ones.
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,           -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};

}  // namespace

AnchorPoint make_anchor(double x0) {
    if (!(x0 >= 0.5 && x0 <= 4.0)) fail(ErrorKind::DomainError, "anchor abscissa must lie in [0.5, 4]");
    double c_lo = 0.75;
    double c_hi = x0 + 2.0;
    if (!(value_on_boundary(c_lo) < x0 && value_on_boundary(c_hi) > x0))
        fail(ErrorKind::NoSignChange, "anchor abscissa scan does not bracket x0");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (c_lo + c_hi);
        if (mid == c_lo || mid == c_hi) break;
        (value_on_boundary(mid) < x0 ? c_lo : c_hi) = mid;
    }
    const double c = 0.5 * (c_lo + c_hi);
    Complex z(c, boundary_root(c));

    AnchorPoint anchor;
    anchor.x0 = x0;
    anchor.method = "bisection";
    const double bound = 1e-12 * std::max(1.0, x0);
    double residual = std::abs(f_tilde(z).value() - x0);
    for (int it = 0; it < 20 && !(residual <= 0.25 * bound); ++it) {
        anchor.method = "newton";
        const Complex f = f_tilde(z).value();
        z -= (f - x0) / (f * (z - f));
        residual = std::abs(f_tilde(z).value() - x0);
    }
    if (!(residual <= bound)) fail(ErrorKind::NoConvergence, "anchor residual above 1e-12");
    anchor.state = {x0, z.real(), -z.imag()};
    anchor.residual = residual;
    return anchor;
}

OdeState integrate(const AnchorPoint& anchor, double x_target, double tol,
                   std::vector<OdeState>* trajectory) {
    return integrate(anchor.state, x_target, tol, trajectory);
}

OdeState integrate(const OdeState& start, double x_target, double tol,
                   std::vector<OdeState>* trajectory) {
    if (!(x_target > 0.0) || !std::isfinite(x_target)) fail(ErrorKind::DomainError, "x_target must be > 0");
    if (!(tol > 0.0)) fail(ErrorKind::DomainError, "tolerance must be > 0");
    if (trajectory) trajectory->push_back(start);
    if (x_target == start.x) return start;

    const bool log_variable = x_target < start.x / 4.0;
    auto to_x = [&](double s) { return log_variable ? std::exp(s) : s; };
    auto rhs = [&](double s, Complex H) {
        const double x = to_x(s);
        return log_variable ? 1.0 / (H - x) : 1.0 / (x * (H - x));
    };
    // One Dormand-Prince step; returns the fifth-order value and the error estimate.
    auto dopri = [&](double s, Complex H, double step) {
        std::array<Complex, 7> k;
        k[0] = rhs(s, H);
        for (int i = 1; i < 7; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < i; ++j) acc += kA[i][j] * k[j];
            k[i] = rhs(s + kC[i] * step, H + step * acc);
        }
        Complex increment = 0.0;
        for (int i = 0; i < 6; ++i) increment += kA[6][i] * k[i];
        Complex err = 0.0;
        for (int i = 0; i < 7; ++i) err += kE[i] * k[i];
        return std::pair<Complex, Complex>{H + step * increment, err * step};
    };
    const double s_start = log_variable ? std::log(start.x) : start.x;
    const double s_end = log_variable ? std::log(x_target) : x_target;
    const double span = std::abs(s_end - s_start);
    // Error per unit step, relative per component.
    auto error_norm = [&](Complex H, Complex H_new, Complex err, double step, double t) {
        const double scale_g = t * std::max(std::abs(H.real()), std::abs(H_new.real()));
        const double scale_h = t * std::max(std::abs(H.imag()), std::abs(H_new.imag()));
        const double norm =
            std::max(std::abs(err.real()) / scale_g, std::abs(err.imag()) / scale_h) * span / std::abs(step);
        return std::isfinite(norm) && H_new.imag() < 0.0 ? norm : INFINITY;
    };

    // Pilot pass at a fixed tolerance fixes the shape of the mesh, so the final
    // mesh, and hence the global error, depends smoothly on tol.
    constexpr double kPilotTol = 1e-6;
    constexpr double kRefinement = 8.0;
    std::vector<double> mesh{s_start};
    {
        double s = s_start;
        Complex H(start.g, -start.h);
        const double direction = s_end > s ? 1.0 : -1.0;
        double step = direction * std::min(1e-3 * span, 1e-2);
        bool last_rejected = false;
        for (;;) {
            const double remaining = s_end - s;
            if (std::abs(step) >= std::abs(remaining)) step = remaining;
            const double x_here = to_x(s);
            const double min_step = log_variable ? 1e-14 : 1e-14 * x_here;
            if (std::abs(step) < min_step && std::abs(remaining) > min_step)
                fail(ErrorKind::StepUnderflow, "step underflow at x = " + std::to_string(x_here));
            const auto [H_new, err] = dopri(s, H, step);
            const double norm = error_norm(H, H_new, err, step, kPilotTol);
            if (norm <= 1.0) {
                s = (step == remaining) ? s_end : s + step;
                H = H_new;
                mesh.push_back(s);
                if (s == s_end) break;
                double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.25), 0.2, 5.0);
                if (last_rejected) factor = std::min(factor, 1.0);
                step *= factor;
                last_rejected = false;
            } else {
                step *= std::isfinite(norm) ? std::clamp(0.9 * std::pow(norm, -0.25), 0.1, 0.9) : 0.1;
                last_rejected = true;
            }
        }
    }

    // Uniform refinement of the pilot mesh in its index variable. The step count
    // grows as tol^(-1/3), so the fifth-order global error falls like tol^(5/3)
    // and halving tol at least halves the error.
    const std::size_t pilot_steps = mesh.size() - 1;
    std::size_t steps = static_cast<std::size_t>(
        std::ceil(kRefinement * static_cast<double>(pilot_steps) * std::pow(kPilotTol / tol, 1.0 / 3.0)));
    steps = std::max<std::size_t>(steps, 1);
    auto node = [&](std::size_t k) {
        if (k == steps) return s_end;
        const double tau = static_cast<double>(k) * pilot_steps / steps;
        const std::size_t i = std::min(static_cast<std::size_t>(tau), pilot_steps - 1);
        return mesh[i] + (tau - i) * (mesh[i + 1] - mesh[i]);
    };

    Complex H(start.g, -start.h);
    double s = s_start;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double s_next = node(k);
        const double step = s_next - s;
        const double min_step = log_variable ? 1e-14 : 1e-14 * to_x(s);
        if (std::abs(step) < min_step)
            fail(ErrorKind::StepUnderflow, "step underflow at x = " + std::to_string(to_x(s)));
        H = dopri(s, H, step).first;
        s = s_next;
        if (!(H.imag() < 0.0) || !std::isfinite(H.real()) || !std::isfinite(H.imag()))
            fail(ErrorKind::NoConvergence, "ODE state diverged at x = " + std::to_string(to_x(s)));
        const OdeState state{k == steps ? x_target : to_x(s), H.real(), -H.imag()};
        if (!(state.g * state.h < kHalfPi))
            fail(ErrorKind::InvariantViolation, "ODE state left Xi at x = " + std::to_string(state.x));
        if (trajectory) trajectory->push_back(state);
    }
    return {x_target, H.real(), -H.imag()};
}

MonotonicityReport monotonicity_certificate(const std::vector<OdeState>& states) {
    MonotonicityReport report;
    for (const auto& st : states) {
        ++report.checked;
        const double d = st.g - st.x;
        const double denom = st.x * (d * d + st.h * st.h);
        const double gp = d / denom;
        const double hp = -st.h / denom;
        std::string reason;
        if (!(denom > 0.0) || !std::isfinite(gp) || !std::isfinite(hp)) {
            reason = "non-finite derivative";
        } else if (!(st.g > st.x)) {
            reason = "g <= x";
        } else if (!(hp < 0.0)) {
            reason = "h' >= 0";
        }
        if (!reason.empty()) report.violations.push_back({st, gp, hp, reason});
    }
    return report;
}

CrossCheck cross_check(const AnchorPoint& anchor, double x_target, double tol,
                       const CurveConfig& config) {
    const OdeState ode = integrate(anchor, x_target, tol);
    const CurvePoint newton = solve_H(x_target, config);
    CrossCheck out;
    out.x_target = x_target;
    out.ode_g = ode.g;
    out.ode_h = ode.h;
    out.newton_g = newton.g;
    out.newton_h = newton.h;
    out.discrepancy = std::max(std::abs(ode.g - newton.g), std::abs(ode.h / newton.h - 1.0));
    return out;
}

}  // namespace freenormal
