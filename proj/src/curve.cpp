#include "freenormal/curve.hpp"

#include "freenormal/errors.hpp"
#include "freenormal/series.hpp"
#include "freenormal/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace freenormal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
// |log(x G(z))| below which the log-form residual is at the evaluator's noise level.
constexpr double kPhiFloor = 1e-15;
constexpr double kPhiNoise = 1e-13;

using Kind = AsymptoticRegime::Kind;

std::string format_x(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool admissible(Complex z) {
    return z.real() > 0.0 && z.imag() < 0.0 && in_certified_region(z);
}

Complex wrap(Complex l) {
    double im = std::remainder(l.imag(), 2.0 * kPi);
    return {l.real(), im};
}

double curve_residual(Complex z, double x) {
    return std::abs(f_tilde(z).value() - x);
}

// Solves Im G(s - i h) = 0 for the height h > 0 at abscissa s, where the
// height is tiny compared to s. Newton in h; the imaginary part is linear in h
// to leading order so a good seed converges in two or three steps.
double boundary_height_large(double s, double seed) {
    double h = seed > 0.0 ? seed : eval_f_asym_infinity(s, 3).value();
    const double h_max = kHalfPi / s;
    if (!(h > 0.0 && h < h_max)) h = 0.5 * h_max;
    for (int it = 0; it < 40; ++it) {
        const Complex z(s, -h);
        const Complex g = g_tilde(z).value();
        const Complex gp = 1.0 - z * g;
        const double dq = -gp.real();
        if (!(std::isfinite(dq) && dq != 0.0))
            fail(ErrorKind::NoConvergence, "flat height equation at abscissa " + format_x(s));
        double next = h - g.imag() / dq;
        if (!(next > 0.0)) next = 0.5 * h;
        if (next >= h_max) next = 0.5 * (h + h_max);
        if (std::abs(next - h) <= 1e-15 * next) return next;
        h = next;
    }
    return h;
}

// x with the regime thresholds ordered and the zero-regime formulas valid.
void check_config(const CurveConfig& config) {
    if (!(config.regime.x_lo > 0.0 && config.regime.x_lo < config.regime.x_hi))
        fail(ErrorKind::DomainError, "regime thresholds must satisfy 0 < x_lo < x_hi");
}

}  // namespace

std::string_view to_string(AsymptoticRegime::Kind kind) noexcept {
    switch (kind) {
        case Kind::NearZero: return "near_zero";
        case Kind::Bulk: return "bulk";
        case Kind::NearInfinity: return "near_infinity";
    }
    return "unknown";
}

std::string_view to_string(Branch branch) noexcept {
    return branch == Branch::Left ? "left" : "right";
}

CurveSolver::CurveSolver(CurveConfig config) : config_(config) { check_config(config_); }

void CurveSolver::record(int iterations, int damped) {
    ++stats_.solves;
    stats_.total_iterations += iterations;
    stats_.max_iterations = std::max(stats_.max_iterations, iterations);
    stats_.damped_steps += damped;
}

const CurvePoint* CurveSolver::nearest(double x) const {
    if (cache_.empty()) return nullptr;
    auto it = cache_.lower_bound(x);
    const CurvePoint* best = nullptr;
    double best_dist = INFINITY;
    auto consider = [&](const CurvePoint& p) {
        const double d = std::abs(std::log(x / p.x));
        if (d < best_dist) {
            best_dist = d;
            best = &p;
        }
    };
    if (it != cache_.end()) consider(it->second);
    if (it != cache_.begin()) consider(std::prev(it)->second);
    return best;
}

// RK4 integration of dH/d(log x) = 1 / (H - x) from a solved point. The
// equation is stiff with rate about x^2, so the sub-step shrinks accordingly.
Complex CurveSolver::predict(const CurvePoint& from, double x) const {
    const double dt_total = std::log(x / from.x);
    const double x_max = std::max(x, from.x);
    const double rate = std::max(20.0, 2.0 * x_max * x_max);
    const int n = std::clamp(static_cast<int>(std::ceil(std::abs(dt_total) * rate)), 1, 5000);
    const double dt = dt_total / n;
    auto rhs = [](Complex h, double t) { return 1.0 / (h - std::exp(t)); };
    Complex h = from.z();
    double t = std::log(from.x);
    for (int i = 0; i < n; ++i) {
        const Complex k1 = rhs(h, t);
        const Complex k2 = rhs(h + 0.5 * dt * k1, t + 0.5 * dt);
        const Complex k3 = rhs(h + 0.5 * dt * k2, t + 0.5 * dt);
        const Complex k4 = rhs(h + dt * k3, t + dt);
        h += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    if (std::isfinite(h.real()) && std::isfinite(h.imag()) && admissible(h)) return h;
    return from.z();
}

CurvePoint CurveSolver::solve_bulk(double x, Complex seed) {
    const double log_x = std::log(x);
    auto phi_at = [&](Complex z) { return wrap(g_tilde(z).log() + log_x); };

    Complex z = seed;
    if (!admissible(z))
        fail(ErrorKind::NoConvergence, "seed outside Xi at x = " + format_x(x));
    Complex phi = phi_at(z);
    int iterations = 0;
    int damped = 0;
    bool converged = std::abs(phi) <= kPhiFloor;
    while (!converged) {
        if (iterations >= config_.max_iterations)
            fail(ErrorKind::NoConvergence, "Newton did not converge at x = " + format_x(x));
        ++iterations;
        // d/dz log G = G'/G = F - z.
        const Complex derivative = f_tilde(z).value() - z;
        const Complex step = phi / derivative;
        double lambda = 1.0;
        bool accepted = false;
        Complex z_next = z;
        Complex phi_next = phi;
        for (int k = 0; k <= config_.max_halvings; ++k) {
            z_next = z - lambda * step;
            if (admissible(z_next)) {
                phi_next = phi_at(z_next);
                if (std::abs(phi_next) < std::abs(phi) || std::abs(phi_next) <= kPhiFloor) {
                    accepted = true;
                    break;
                }
            }
            // At the noise level a full step that fails to improve means convergence.
            if (k == 0 && std::abs(phi) <= kPhiNoise) break;
            lambda *= 0.5;
            ++damped;
        }
        if (!accepted) {
            if (std::abs(phi) <= kPhiNoise) break;
            fail(ErrorKind::NoConvergence, "damped Newton stalled at x = " + format_x(x));
        }
        const double moved = std::abs(z_next - z);
        z = z_next;
        phi = phi_next;
        converged = std::abs(phi) <= kPhiFloor || moved <= config_.step_tol * std::abs(z);
    }
    record(iterations, damped);

    CurvePoint p;
    p.x = x;
    p.g = z.real();
    p.h = -z.imag();
    p.log_h = std::log(p.h);
    p.residual = curve_residual(z, x);
    p.regime = config_.regime.classify(x);
    p.iterations = iterations;
    if (!(p.residual <= config_.residual_tol * std::max(1.0, x)))
        fail(ErrorKind::NoConvergence, "residual above tolerance at x = " + format_x(x));
    return p;
}

// Large x: the height is far below the resolution of the abscissa, so the two
// coordinates are solved separately. For each abscissa s the height follows
// from Im G(s - i h) = 0; then s is adjusted until the (real) value of F equals x.
CurvePoint CurveSolver::solve_split(double x, double seed_abscissa) {
    double s = seed_abscissa;
    double h = boundary_height_large(s, 0.0);
    int iterations = 0;
    for (;;) {
        if (iterations >= config_.max_iterations)
            fail(ErrorKind::NoConvergence, "split solve did not converge at x = " + format_x(x));
        ++iterations;
        const Complex z(s, -h);
        const Complex g = g_tilde(z).value();
        const Complex gp = 1.0 - z * g;
        const double ds = (g.real() - 1.0 / x) / gp.real();
        if (!std::isfinite(ds))
            fail(ErrorKind::NoConvergence, "split solve diverged at x = " + format_x(x));
        s -= ds;
        h = boundary_height_large(s, h);
        if (std::abs(ds) <= 4e-16 * s) break;
    }
    record(iterations, 0);

    CurvePoint p;
    p.x = x;
    p.g = s;
    p.h = h;
    p.log_h = std::log(h);
    p.residual = curve_residual(p.z(), x);
    p.regime = config_.regime.classify(x);
    p.iterations = iterations;
    if (!(p.residual <= config_.residual_tol * std::max(1.0, x)))
        fail(ErrorKind::NoConvergence, "residual above tolerance at x = " + format_x(x));
    return p;
}

CurvePoint CurveSolver::series_point(double x) {
    CurvePoint p;
    p.x = x;
    p.g = eval_g_asym_infinity(x, 3);
    const ScaledReal h = eval_h_asym_infinity(x, 3);
    p.h = h.value();
    p.log_h = h.log();
    p.regime = Kind::NearInfinity;
    try {
        p.residual = curve_residual(p.z(), x);
    } catch (const Error&) {
        p.residual = INFINITY;
    }
    return p;
}

// Bulk point far from anything solved: march geometrically from the closest
// of the regime thresholds or the nearest cached point.
CurvePoint CurveSolver::continue_to(double x) {
    const double ratio = config_.continuation_ratio;
    const double d_lo = std::log(x / config_.regime.x_lo);
    const double d_hi = std::log(config_.regime.x_hi / x);
    const CurvePoint* near = nearest(x);
    const double d_near = near ? std::abs(std::log(x / near->x)) : INFINITY;

    CurvePoint start;
    if (d_near <= std::min(d_lo, d_hi)) {
        start = *near;
    } else {
        start = solve(d_lo <= d_hi ? config_.regime.x_lo : config_.regime.x_hi);
    }
    const double direction = x > start.x ? 1.0 : -1.0;
    const double log_ratio = std::log(ratio);
    CurvePoint prev = start;
    while (std::abs(std::log(x / prev.x)) > log_ratio) {
        const double xs = prev.x * std::exp(direction * log_ratio);
        prev = solve_bulk(xs, predict(prev, xs));
        cache_[xs] = prev;
    }
    return solve_bulk(x, predict(prev, x));
}

CurvePoint CurveSolver::solve(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::DomainError, "solve_H needs x > 0");
    if (auto it = cache_.find(x); it != cache_.end()) return it->second;
    if (x > config_.x_series_only) return series_point(x);

    const Kind kind = config_.regime.classify(x);
    const CurvePoint* near = nearest(x);
    const bool close =
        near != nullptr && std::abs(std::log(x / near->x)) <= std::log(config_.continuation_ratio);

    CurvePoint p;
    if (kind == Kind::NearInfinity) {
        const double s0 = close ? predict(*near, x).real() : eval_g_asym_infinity(x, 3);
        p = solve_split(x, s0);
    } else if (close) {
        p = solve_bulk(x, predict(*near, x));
    } else if (kind == Kind::NearZero) {
        p = solve_bulk(x, {eval_g_asym_zero(x), -eval_h_asym_zero(x)});
    } else {
        p = continue_to(x);
    }
    cache_[x] = p;
    return p;
}

CurvePoint solve_H(double x, const CurveConfig& config) {
    CurveSolver solver(config);
    return solver.solve(x);
}

CurveTrace trace_p0(double x_min, double x_max, int n, const CurveConfig& config) {
    if (!(x_min > 0.0 && x_min < x_max && std::isfinite(x_max)) || n < 2)
        fail(ErrorKind::DomainError, "trace needs 0 < x_min < x_max and n >= 2");
    std::vector<double> grid(n);
    const double span = std::log(x_max / x_min);
    for (int k = 0; k < n; ++k) grid[k] = x_min * std::exp(span * k / (n - 1));
    grid.front() = x_min;
    grid.back() = x_max;

    // Descend from the last grid point below x_hi, then ascend from there.
    int pivot = 0;
    for (int k = 0; k < n; ++k)
        if (grid[k] <= config.regime.x_hi) pivot = k;

    CurveSolver solver(config);
    CurveTrace trace;
    trace.points.resize(n);
    auto solve_at = [&](int k) {
        try {
            trace.points[k] = solver.solve(grid[k]);
        } catch (const Error& e) {
            fail(e.kind(), std::string(e.what()) + " (trace point x = " + format_x(grid[k]) + ")");
        }
    };
    for (int k = pivot; k >= 0; --k) solve_at(k);
    for (int k = pivot + 1; k < n; ++k) solve_at(k);
    trace.solver_stats = solver.stats();
    verify_trace(trace, config);
    return trace;
}

void verify_trace(const CurveTrace& trace, const CurveConfig& config) {
    const auto& pts = trace.points;
    for (const auto& p : pts) {
        const bool series_only = p.x > config.x_series_only;
        if (!series_only && !(p.residual <= config.residual_tol * std::max(1.0, p.x)))
            fail(ErrorKind::InvariantViolation, "residual above tolerance at x = " + format_x(p.x));
        if (!(p.g > 0.0 && std::isfinite(p.log_h) && p.g * p.h < kHalfPi))
            fail(ErrorKind::InvariantViolation, "curve point outside Xi at x = " + format_x(p.x));
    }
    if (pts.size() < 3) return;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (!(pts[k].x > pts[k - 1].x))
            fail(ErrorKind::InvariantViolation, "trace abscissas not increasing");
        if (!(pts[k].g > pts[k - 1].g))
            fail(ErrorKind::InvariantViolation, "g not increasing at x = " + format_x(pts[k].x));
        if (!(pts[k].log_h < pts[k - 1].log_h))
            fail(ErrorKind::InvariantViolation, "h not decreasing at x = " + format_x(pts[k].x));
    }
}

OmegaBoundary omega_boundary(double x, const CurveConfig& config) {
    check_config(config);
    const double a = std::abs(x);
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::DomainError, "f needs x != 0");
    OmegaBoundary out;
    out.x = x;

    if (a >= config.regime.x_hi) {
        const double h = boundary_height_large(a, 0.0);
        out.f = -h;
        out.log_epsilon = std::log1p(-h * a / kHalfPi);
        return out;
    }

    if (a <= eval_g_asym_zero(config.regime.x_lo)) {
        // Write y = -(pi/(2a))(1 - eps). With z = a + iy the continuation splits as
        // G(z) - i sqrt(2 pi) exp(-z^2/2), and Im of it vanishes exactly when
        //   sin(pi eps / 2) = Im G(z) exp((a^2 - y^2)/2) / sqrt(2 pi).
        // The right side depends on eps only through y, weakly for small a.
        double log_eps = -INFINITY;
        for (int it = 0; it < 200; ++it) {
            const double eps = std::exp(log_eps);
            const double y = -(kHalfPi / a) * (1.0 - eps);
            const double im_g = cauchy_integral({a, y}).imag();
            const double log_q =
                std::log(im_g) + 0.5 * (a * a - y * y) - 0.5 * std::log(2.0 * kPi);
            if (!(log_q < 0.0))
                fail(ErrorKind::NoConvergence, "boundary gap equation has no root at x = " + format_x(x));
            const double q = std::exp(log_q);
            const double ratio = q > 0.0 ? std::asin(q) / q : 1.0;
            const double next = std::log(2.0 / kPi) + log_q + std::log(ratio);
            const bool done = std::abs(next - log_eps) <= 1e-15 * std::max(1.0, std::abs(next));
            log_eps = next;
            if (done) {
                out.log_epsilon = log_eps;
                out.f = (kHalfPi / a) * std::expm1(log_eps);
                return out;
            }
        }
        fail(ErrorKind::NoConvergence, "boundary gap iteration did not settle at x = " + format_x(x));
    }

    // Bulk: Newton in u = log s on g(s) = a, with dg/du = s g'(s) from the curve ODE.
    // The bracket is kept from the monotonicity of g.
    CurveSolver solver(config);
    double lo = std::log(config.regime.x_lo) - 1.0;
    double hi = std::log(config.regime.x_hi) + 1.0;
    double u = a > 1.5 ? std::log(std::max(a - 1.0 / a, config.regime.x_lo)) : 0.5 * (lo + hi);
    u = std::clamp(u, lo, hi);
    for (int it = 0; it < config.max_iterations; ++it) {
        const double s = std::exp(u);
        const CurvePoint p = solver.solve(s);
        const double r = p.g - a;
        const double d = p.g - s;
        const double slope = d / (d * d + p.h * p.h);
        if (r < 0.0) lo = u; else hi = u;
        double next = u - r / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::abs(r) <= 1e-14 * a || std::abs(next - u) <= 1e-15) {
            out.f = -p.h;
            out.log_epsilon = std::log1p(-p.h * a / kHalfPi);
            return out;
        }
        u = next;
    }
    fail(ErrorKind::NoConvergence, "inverse of g did not converge at x = " + format_x(x));
}

double f_of(double x, const CurveConfig& config) { return omega_boundary(x, config).f; }

bool in_omega(Complex z, const CurveConfig& config) {
    const double re = z.real();
    if (re == 0.0 || z.imag() >= 0.0) return true;
    const double a = std::abs(re);
    if (z.imag() <= -kHalfPi / a) return false;
    return z.imag() > f_of(re, config);
}

namespace {

struct LevelPoint {
    Complex z;
    Complex f;
    Complex fp;
};

bool evaluate(Complex z, LevelPoint& out) {
    try {
        const Complex g = g_tilde(z).value();
        const Complex f = 1.0 / g;
        const Complex fp = f * (z - f);
        if (!std::isfinite(f.real()) || !std::isfinite(f.imag()) || !std::isfinite(fp.real()) ||
            !std::isfinite(fp.imag()) || std::abs(fp) == 0.0)
            return false;
        out = {z, f, fp};
        return true;
    } catch (const Error&) {
        return false;
    }
}

class LevelTracer {
public:
    LevelTracer(double t, const BoundingBox& bbox, double step, const LevelSetConfig& config)
        : t_(t), bbox_(bbox), step_(step), config_(config) {}

    bool usable(Complex z) const { return bbox_.contains(z) && in_certified_region(z); }

    // Newton transverse to the level curve: the gradient of Im F is i conj(F').
    // Stops once both the level residual and the Newton step are negligible,
    // since |F'| can be small enough that the first alone leaves z loose.
    bool correct(Complex z, LevelPoint& out) const {
        for (int it = 0; it < 12; ++it) {
            if (!evaluate(z, out)) return false;
            const double u = out.f.imag() - t_;
            const bool level_ok = std::abs(u) <= config_.tolerance * std::max(1.0, std::abs(out.f));
            const Complex dz = u * Complex(0.0, 1.0) * std::conj(out.fp) / std::norm(out.fp);
            if (level_ok && std::abs(dz) <= 1e-13 * std::max(1.0, std::abs(z))) return true;
            z -= dz;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return evaluate(z, out) &&
               std::abs(out.f.imag() - t_) <= config_.tolerance * std::max(1.0, std::abs(out.f));
    }

    // Walks from a corrected seed in one orientation of the tangent conj(F').
    std::vector<Complex> walk(const LevelPoint& seed, double orientation) const {
        std::vector<Complex> pts{seed.z};
        LevelPoint cur = seed;
        Complex tangent = orientation * std::conj(cur.fp) / std::abs(cur.fp);
        double h = step_;
        const double h_min = step_ * config_.min_step_fraction;
        while (static_cast<int>(pts.size()) < config_.max_points) {
            const Complex predicted = cur.z + 0.9 * h * tangent;
            LevelPoint next;
            bool ok = usable(predicted) && correct(predicted, next) && usable(next.z);
            Complex next_tangent;
            if (ok) {
                next_tangent = std::conj(next.fp) / std::abs(next.fp);
                if ((next_tangent * std::conj(tangent)).real() < 0.0) next_tangent = -next_tangent;
                const double turn = std::abs(std::arg(next_tangent * std::conj(tangent)));
                ok = std::abs(next.z - cur.z) <= step_ && turn <= config_.max_turn;
            }
            if (!ok) {
                if (h <= h_min) break;
                h = std::max(0.5 * h, h_min);
                continue;
            }
            pts.push_back(next.z);
            cur = next;
            tangent = next_tangent;
            h = std::min(step_, 2.0 * h);
            if (pts.size() > 10 && std::abs(cur.z - seed.z) < 0.5 * h) break;
        }
        return pts;
    }

private:
    double t_;
    BoundingBox bbox_;
    double step_;
    LevelSetConfig config_;
};

}  // namespace

std::vector<LevelSetTrace> trace_level_set(double t, const BoundingBox& bbox, double step,
                                           const LevelSetConfig& config) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::DomainError, "level t must be >= 0");
    if (!(step > 0.0) || !(bbox.re_min < bbox.re_max && bbox.im_min < bbox.im_max))
        fail(ErrorKind::DomainError, "level-set tracing needs step > 0 and a proper box");
    LevelTracer tracer(t, bbox, step, config);

    // Seeds: sign changes of Im F - t down each scan column.
    std::vector<LevelPoint> seeds;
    const int cols = std::max(config.scan_columns, 1);
    const int rows = std::max(config.scan_rows, 2);
    for (int c = 0; c < cols; ++c) {
        const double re = bbox.re_min + (c + 0.5) * (bbox.re_max - bbox.re_min) / cols;
        bool have_prev = false;
        double prev_y = 0.0;
        double prev_u = 0.0;
        for (int r = 0; r <= rows; ++r) {
            const double y = bbox.im_max - r * (bbox.im_max - bbox.im_min) / rows;
            LevelPoint lp;
            if (!in_certified_region({re, y}) || !evaluate({re, y}, lp)) {
                have_prev = false;
                continue;
            }
            const double u = lp.f.imag() - t;
            if (have_prev && (u > 0.0) != (prev_u > 0.0)) {
                double y_hi = prev_y;
                double y_lo = y;
                double u_hi = prev_u;
                for (int it = 0; it < 200 && y_hi != y_lo; ++it) {
                    const double mid = 0.5 * (y_hi + y_lo);
                    if (mid == y_hi || mid == y_lo) break;
                    LevelPoint m;
                    if (!evaluate({re, mid}, m)) break;
                    if ((m.f.imag() - t > 0.0) == (u_hi > 0.0)) {
                        y_hi = mid;
                    } else {
                        y_lo = mid;
                    }
                }
                LevelPoint seed;
                if (tracer.correct({re, 0.5 * (y_hi + y_lo)}, seed) && tracer.usable(seed.z))
                    seeds.push_back(seed);
            }
            have_prev = true;
            prev_y = y;
            prev_u = u;
        }
    }
    if (seeds.empty())
        fail(ErrorKind::SeedNotFound, "no crossing of the level found on the scan columns");

    std::vector<std::vector<Complex>> curves;
    auto already_traced = [&](Complex z) {
        for (const auto& curve : curves)
            for (const auto& p : curve)
                if (std::abs(p - z) < 2.0 * step) return true;
        return false;
    };
    for (const auto& seed : seeds) {
        if (already_traced(seed.z)) continue;
        std::vector<Complex> backward = tracer.walk(seed, -1.0);
        const std::vector<Complex> forward = tracer.walk(seed, 1.0);
        std::reverse(backward.begin(), backward.end());
        backward.insert(backward.end(), forward.begin() + 1, forward.end());
        curves.push_back(std::move(backward));
    }

    std::vector<LevelSetTrace> traces;
    for (const auto& curve : curves) {
        std::size_t begin = 0;
        while (begin < curve.size()) {
            const bool right = curve[begin].real() >= 0.0;
            std::size_t end = begin;
            while (end < curve.size() && (curve[end].real() >= 0.0) == right) ++end;
            if (end - begin >= 2) {
                LevelSetTrace trace;
                trace.t = t;
                trace.branch = right ? Branch::Right : Branch::Left;
                trace.points.assign(curve.begin() + begin, curve.begin() + end);
                if (trace.points.back().real() < trace.points.front().real())
                    std::reverse(trace.points.begin(), trace.points.end());
                traces.push_back(std::move(trace));
            }
            begin = end;
        }
    }
    return traces;
}

}  // namespace freenormal
