#pragma once

#include "freenormal/config.hpp"
#include "freenormal/scaled.hpp"

#include <map>
#include <string_view>
#include <vector>

namespace freenormal {

/// A point H(x) = g - i h of the curve p0+ with F(H) = x.
struct CurvePoint {
    double x = 0.0;
    double g = 0.0;
    double h = 0.0;
    /// |F(g - i h) - x|.
    double residual = 0.0;
    /// log h; stays finite when h itself underflows (x beyond about 37).
    double log_h = 0.0;
    AsymptoticRegime::Kind regime = AsymptoticRegime::Kind::Bulk;
    int iterations = 0;

    Complex z() const { return {g, -h}; }
};

std::string_view to_string(AsymptoticRegime::Kind kind) noexcept;

struct SolverStats {
    int solves = 0;
    int total_iterations = 0;
    int max_iterations = 0;
    int damped_steps = 0;
};

struct CurveTrace {
    std::vector<CurvePoint> points;
    SolverStats solver_stats;
};

/// Newton solver for F(z) = x on Xi, remembering solved points so later
/// solves can continue from the nearest one. Not thread-safe; use one
/// instance per thread.
class CurveSolver {
public:
    explicit CurveSolver(CurveConfig config = {});

    CurvePoint solve(double x);
    const SolverStats& stats() const { return stats_; }
    const CurveConfig& config() const { return config_; }

private:
    CurvePoint solve_bulk(double x, Complex seed);
    CurvePoint solve_split(double x, double seed_abscissa);
    CurvePoint series_point(double x);
    CurvePoint continue_to(double x);
    Complex predict(const CurvePoint& from, double x) const;
    const CurvePoint* nearest(double x) const;
    void record(int iterations, int damped);

    CurveConfig config_;
    std::map<double, CurvePoint> cache_;
    SolverStats stats_;
};

/// H(x) for x > 0. DomainError for x <= 0, NoConvergence if Newton stalls.
CurvePoint solve_H(double x, const CurveConfig& config = {});

/// n points on a log-uniform grid of [x_min, x_max], monotonicity verified.
CurveTrace trace_p0(double x_min, double x_max, int n, const CurveConfig& config = {});

/// Throws InvariantViolation unless g increases, h decreases, and every
/// point satisfies the residual and Xi conditions.
void verify_trace(const CurveTrace& trace, const CurveConfig& config = {});

/// The boundary of Omega below the abscissa x, y = f(x) with
/// f(x) = -(pi / (2|x|)) (1 - epsilon). epsilon is reported in log form because
/// it falls below binary64 resolution of 1 for small |x|.
struct OmegaBoundary {
    double x = 0.0;
    double f = 0.0;
    double log_epsilon = 0.0;
};

/// Height of the boundary of Omega at abscissa x (x != 0), computed as the
/// root of Im G(|x| + iy) = 0 on the Xi segment. The bulk uses Newton on the
/// curve parameter with g' from the curve ODE.
OmegaBoundary omega_boundary(double x, const CurveConfig& config = {});

/// f(x) = -h(g^{-1}(|x|)); even in x. DomainError at x = 0.
double f_of(double x, const CurveConfig& config = {});

/// z in Omega: Re z = 0, or Im z > f(Re z).
bool in_omega(Complex z, const CurveConfig& config = {});

struct BoundingBox {
    double re_min = -5.0;
    double re_max = 5.0;
    double im_min = -5.0;
    double im_max = 2.0;

    bool contains(Complex z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
               z.imag() <= im_max;
    }
};

enum class Branch { Left, Right };
std::string_view to_string(Branch branch) noexcept;

struct LevelSetTrace {
    double t = 0.0;
    Branch branch = Branch::Right;
    std::vector<Complex> points;
};

struct LevelSetConfig {
    int scan_columns = 41;
    int scan_rows = 600;
    /// Accept a corrected point when |Im F - t| <= tolerance * max(1, |F|).
    double tolerance = 1e-11;
    int max_points = 20000;
    /// Smallest allowed step as a fraction of the nominal step.
    double min_step_fraction = 1.0 / 1024.0;
    /// Largest tangent turn per step (radians) before the step is refined.
    double max_turn = 0.15;
};

/// Traces Im F = t inside bbox clipped to the certified region (Xi, upper
/// half-plane, real axis). Each connected curve is split at Re z = 0 into
/// left and right branches ordered by increasing real part.
/// SeedNotFound when no scan column crosses the level.
std::vector<LevelSetTrace> trace_level_set(double t, const BoundingBox& bbox, double step,
                                           const LevelSetConfig& config = {});

}  // namespace freenormal
