#pragma once

#include "freenormal/config.hpp"

#include <string>
#include <vector>

namespace freenormal {

/// A point (x, g(x), h(x)) of the curve as carried by the ODE integrator.
struct OdeState {
    double x = 0.0;
    double g = 0.0;
    double h = 0.0;
};

/// Initial condition for the curve ODE, found without the curve solver.
struct AnchorPoint {
    double x0 = 0.0;
    OdeState state;
    /// "bisection" when the scan alone met the residual bound, "newton" when
    /// a complex Newton polish was needed.
    std::string method;
    double residual = 0.0;
};

/// Locates H(x0) by bisection: for a trial abscissa c, the root y(c) of
/// Im G(c + iy) on (-pi/(2c), 0) is bracketed by the sign change between the
/// real axis (Im G < 0) and the boundary of Xi (Im G > 0); c itself is then
/// bisected until F(c + i y(c)) = x0. A final complex Newton polish brings the
/// residual to 1e-12. x0 must lie in [0.5, 4]; NoSignChange if a scan fails.
AnchorPoint make_anchor(double x0 = 2.0);

/// Dormand-Prince 5(4) integration of H' = 1/(x (H - x)) from start to
/// x_target. A pilot pass with error-per-unit-step control at a fixed
/// tolerance shapes the mesh; that mesh is then refined uniformly by the
/// factor (1e-6 / tol)^(1/3), so the global error falls smoothly with tol
/// (roughly like tol^(5/3)). Uses log x as the independent variable when
/// x_target < start.x / 4. Every state on the final mesh is appended to
/// trajectory when one is supplied. StepUnderflow when a step falls below
/// 1e-14 x; InvariantViolation if a state leaves Xi.
OdeState integrate(const OdeState& start, double x_target, double tol,
                   std::vector<OdeState>* trajectory = nullptr);
OdeState integrate(const AnchorPoint& anchor, double x_target, double tol,
                   std::vector<OdeState>* trajectory = nullptr);

struct MonotonicityViolation {
    OdeState state;
    double g_prime = 0.0;
    double h_prime = 0.0;
    std::string reason;
};

struct MonotonicityReport {
    std::size_t checked = 0;
    std::vector<MonotonicityViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Evaluates g' = (g - x)/D and h' = -h/D, D = x((g - x)^2 + h^2), at every
/// state and lists those where g' > 0 or h' < 0 fails or D is not positive.
MonotonicityReport monotonicity_certificate(const std::vector<OdeState>& states);

/// ODE result against the Newton curve solver at one abscissa.
struct CrossCheck {
    double x_target = 0.0;
    double ode_g = 0.0;
    double ode_h = 0.0;
    double newton_g = 0.0;
    double newton_h = 0.0;
    /// max(|ode_g - newton_g|, |ode_h / newton_h - 1|).
    double discrepancy = 0.0;
};

CrossCheck cross_check(const AnchorPoint& anchor, double x_target, double tol,
                       const CurveConfig& config = {});

}  // namespace freenormal
