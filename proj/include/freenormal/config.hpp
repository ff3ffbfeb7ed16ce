#pragma once

namespace freenormal {

/// Fixed constants of the transform evaluator. Region boundaries are in the
/// z variable unless noted; zeta = z / sqrt(2).
struct TransformConstants {
    /// |z| at or below which the Maclaurin series of the Dawson integral is used.
    double series_radius = 4.0;
    /// |Im zeta| below which the Dawson integral is expanded about the real axis
    /// (Taylor from tabulated centers, or its asymptotic series far out).
    double axis_band = 0.7;
    /// |Re zeta| beyond which the asymptotic Dawson series replaces the table.
    double dawson_asymptotic_abscissa = 6.5;
    /// Spacing of the real-axis Taylor centers (zeta units).
    double table_step = 0.125;
    /// ln(1e-300): |G| below this makes 1/G a PoleProximity error.
    double pole_log_threshold = -690.7755278982137;
    /// Relative accuracy targeted by the evaluator.
    double relative_tolerance = 1e-12;
};

inline constexpr TransformConstants kTransform{};

/// Which family of formulas describes the curve near a given x.
struct AsymptoticRegime {
    enum class Kind { NearZero, Bulk, NearInfinity };

    double x_lo = 0.05;
    double x_hi = 6.0;

    Kind classify(double x) const {
        if (x <= x_lo) return Kind::NearZero;
        return x >= x_hi ? Kind::NearInfinity : Kind::Bulk;
    }
};

/// Runtime-configurable settings of the curve solver. The regime thresholds
/// select the seed family: zero-regime closed forms below x_lo, large-x
/// series above x_hi.
struct CurveConfig {
    AsymptoticRegime regime;
    /// Beyond this x the curve point is taken from the order-3 large-x series.
    double x_series_only = 30.0;
    /// Acceptance bound on |F(H) - x| / max(1, x).
    double residual_tol = 1e-10;
    /// Newton stops once the step is below this relative size.
    double step_tol = 1e-15;
    int max_iterations = 60;
    int max_halvings = 8;
    /// Ratio between consecutive continuation abscissas in the bulk.
    double continuation_ratio = 1.3;
};

}  // namespace freenormal
