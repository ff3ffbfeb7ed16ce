#include "freenormal/verify.hpp"

#include "freenormal/cli.hpp"
#include "freenormal/curve.hpp"
#include "freenormal/errors.hpp"
#include "freenormal/io.hpp"
#include "freenormal/levy.hpp"
#include "freenormal/ode_oracle.hpp"
#include "freenormal/series.hpp"
#include "freenormal/transforms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace freenormal {

namespace {

using nlohmann::json;
using io::json_number;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = false;
    json measured = json::object();
    std::string message;
};

struct CriterionDef {
    const char* name;
    double time_limit;
    Outcome (*run)(Profile);
};

bool full(Profile p) { return p == Profile::Full; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

Outcome exact_cumulant_tables(Profile) {
    Outcome o;
    const RationalSeries k = free_cumulants(4);
    const RationalSeries a = h_infinity_coefficients(3);
    const std::vector<Rational> k_expected{1, 1, 4, 27};
    const std::vector<Rational> a_expected{Rational(-5, 2), Rational(-43, 8), Rational(-579, 16)};
    o.ok = k.coefficients == k_expected && a.coefficients == a_expected;
    o.measured = {{"free", io::to_json(k)}, {"h_infinity", io::to_json(a)}};
    if (!o.ok) o.message = "exact tables differ";
    return o;
}

Outcome stieltjes_identity(Profile p) {
    Outcome o;
    const int n = full(p) ? 10000 : 1000;
    double worst = 0.0;
    double worst_x = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = -8.0 + 16.0 * k / (n - 1);
        const double expected = -std::sqrt(kPi / 2.0) * std::exp(-x * x / 2.0);
        const double err = std::abs(g_tilde(x).imag() / expected - 1.0);
        if (err > worst) {
            worst = err;
            worst_x = x;
        }
    }
    o.ok = worst <= 1e-12;
    o.measured = {{"points", n}, {"max_rel_error", worst}, {"at_x", worst_x}};
    return o;
}

// F' from a trapezoidal Cauchy integral of F on a small circle. Terms are
// formed relative to F(z) so that tiny or huge F stays representable.
Complex derivative_by_circle(Complex z, const ScaledComplex& f0) {
    constexpr int kNodes = 32;
    const double radius = 1e-3 * std::max(1.0, std::abs(z));
    Complex sum = 0.0;
    for (int k = 0; k < kNodes; ++k) {
        const Complex e = std::polar(1.0, 2.0 * kPi * k / kNodes);
        sum += (f_tilde(z + radius * e) / f0).value() / e;
    }
    return (f0 * ScaledComplex(sum / (static_cast<double>(kNodes) * radius))).value();
}

Outcome ode_identity(Profile p) {
    Outcome o;
    const int n = full(p) ? 1000 : 200;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_circle = 0.0;
    double worst_closed = 0.0;
    Complex worst_z = 0.0;
    int drawn = 0;
    int lower = 0;
    while (drawn < n) {
        const Complex z = std::polar(10.0 * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
        if (!in_certified_region(z)) continue;
        ++drawn;
        if (z.imag() < 0.0) ++lower;
        const ScaledComplex f = f_tilde(z);
        const Complex rhs = (f * ScaledComplex(z - f.value())).value();
        const Complex circle = derivative_by_circle(z, f);
        const Complex closed = f_tilde_prime(z).value();
        const double e_circle = std::abs(circle - rhs) / std::max(1.0, std::abs(circle));
        const double e_closed = std::abs(closed - rhs) / std::max(1.0, std::abs(closed));
        if (e_circle > worst_circle) {
            worst_circle = e_circle;
            worst_z = z;
        }
        worst_closed = std::max(worst_closed, e_closed);
    }
    o.ok = worst_circle <= 1e-9 && worst_closed <= 1e-9;
    o.measured = {{"points", n},
                  {"lower_half_plane_points", lower},
                  {"max_rel_error", worst_circle},
                  {"at_z", {worst_z.real(), worst_z.imag()}},
                  {"max_rel_error_closed_form", worst_closed}};
    return o;
}

Outcome contour_oracle_agreement(Profile p) {
    Outcome o;
    std::vector<Complex> points;
    std::vector<double> upper_angles{kPi / 8, kPi / 2, 7 * kPi / 8};
    std::vector<double> moduli{0.5, 1.5, 3.0, 5.0, 8.0};
    if (full(p)) {
        upper_angles.insert(upper_angles.end(), {kPi / 4, 3 * kPi / 4});
        moduli.push_back(10.0);
    }
    for (double a : upper_angles)
        for (double r : moduli) points.push_back(std::polar(r, a));
    for (double r : {1.0, 3.0, 6.0}) points.push_back(std::polar(r, -kPi / 8));
    for (double r : {2.0, 4.0}) points.push_back(std::polar(r, kPi + kPi / 8));
    if (full(p)) {
        for (double r : {2.0, 5.0}) points.push_back(std::polar(r, -kPi / 8));
        for (double r : {1.0, 6.0}) points.push_back(std::polar(r, kPi + kPi / 8));
    }
    constexpr double kEta = kPi / 32;
    constexpr double kRadius = 24.0;
    double worst = 0.0;
    Complex worst_z = 0.0;
    int lower = 0;
    for (const Complex z : points) {
        if (z.imag() < 0.0) ++lower;
        const Complex closed = g_tilde(z).value();
        const Complex oracle = g_tilde_contour_oracle(z, kEta, kRadius);
        const double err = std::abs(oracle - closed) / std::abs(closed);
        if (err > worst) {
            worst = err;
            worst_z = z;
        }
    }
    o.ok = worst <= 1e-10;
    o.measured = {{"points", points.size()},
                  {"lower_half_plane_points", lower},
                  {"eta", kEta},
                  {"radius", kRadius},
                  {"max_rel_error", worst},
                  {"at_z", {worst_z.real(), worst_z.imag()}}};
    return o;
}

Outcome ode_newton_crosscheck(Profile p) {
    Outcome o;
    std::vector<double> xs{0.01, 0.1, 0.5, 1.0, 3.0, 5.0};
    if (full(p)) xs.insert(xs.end(), {0.001, 0.05, 2.0, 4.0, 6.0});
    const AnchorPoint anchor = make_anchor(2.0);
    json rows = json::array();
    double worst = 0.0;
    for (double x : xs) {
        const CrossCheck c = cross_check(anchor, x, 1e-10);
        worst = std::max(worst, c.discrepancy);
        rows.push_back(io::to_json(c));
    }
    o.ok = worst <= 1e-6;
    o.measured = {{"anchor", io::to_json(anchor)}, {"max_discrepancy", worst}, {"checks", rows}};
    return o;
}

Outcome monotonicity(Profile p) {
    Outcome o;
    const int n = full(p) ? 2000 : 400;
    CurveConfig config;
    const CurveTrace trace = trace_p0(1e-3, 12.0, n, config);
    int g_violations = 0;
    int h_violations = 0;
    int k_violations = 0;
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
        const auto& a = trace.points[i - 1];
        const auto& b = trace.points[i];
        if (!(b.g > a.g)) ++g_violations;
        if (!(b.log_h < a.log_h)) ++h_violations;
        // log k = log h - log x - log pi.
        if (!(b.log_h - std::log(b.x) < a.log_h - std::log(a.x))) ++k_violations;
    }
    std::vector<OdeState> states;
    for (const auto& pt : trace.points) states.push_back({pt.x, pt.g, pt.h});
    const MonotonicityReport cert = monotonicity_certificate(states);
    o.ok = g_violations == 0 && h_violations == 0 && k_violations == 0 && cert.ok();
    o.measured = {{"points", trace.points.size()},
                  {"g_violations", g_violations},
                  {"h_violations", h_violations},
                  {"k_violations", k_violations},
                  {"derivative_sign_violations", cert.violations.size()}};
    return o;
}

Outcome h_infinity_convergence(Profile) {
    Outcome o;
    const std::vector<double> a = h_infinity_coefficients(3).to_doubles();
    json rows = json::array();
    bool ok = true;
    for (double x : {6.0, 8.0, 10.0}) {
        const CurvePoint pt = solve_H(x);
        const double ratio = std::exp(pt.log_h - eval_h_asym_infinity(x, 0).log());
        const double x2 = x * x;
        const double deviation = std::abs(ratio - (1.0 + a[0] / x2 + a[1] / (x2 * x2)));
        const double bound = 5.0 * std::abs(a[2]) / (x2 * x2 * x2);
        ok = ok && deviation <= bound;
        rows.push_back({{"x", x}, {"deviation", deviation}, {"bound", bound}});
    }
    const CurvePoint p8 = solve_H(8.0);
    std::vector<double> errors;
    for (int n = 1; n <= 3; ++n)
        errors.push_back(std::abs(std::expm1(eval_h_asym_infinity(8.0, n).log() - p8.log_h)));
    ok = ok && errors[1] < errors[0] && errors[2] < errors[1];
    o.ok = ok;
    o.measured = {{"points", rows}, {"order_errors_at_8", errors}};
    return o;
}

Outcome zero_regime_convergence(Profile) {
    Outcome o;
    CurveSolver solver;
    json rows = json::array();
    double fitted_c = 0.0;
    std::vector<double> gh_gaps;
    for (double x : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const CurvePoint pt = solver.solve(x);
        const double c = std::abs(pt.h - eval_h_asym_zero(x)) / std::sqrt(x);
        const double gap = std::abs(pt.g * pt.h - kPi / 2.0);
        fitted_c = std::max(fitted_c, c);
        gh_gaps.push_back(gap);
        rows.push_back({{"x", x}, {"h", pt.h}, {"h_asym", eval_h_asym_zero(x)}, {"c", c}, {"gh_gap", gap}});
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < gh_gaps.size(); ++i) decreasing = decreasing && gh_gaps[i] < gh_gaps[i - 1];
    o.ok = fitted_c < 10.0 && decreasing && gh_gaps.back() < 1e-2;
    o.measured = {{"fitted_c", fitted_c}, {"gh_gap_decreasing", decreasing}, {"points", rows}};
    return o;
}

Outcome f_zero_sandwich(Profile) {
    Outcome o;
    json rows = json::array();
    bool ok = true;
    for (double x : {0.2, 0.1, 0.05}) {
        const OmegaBoundary b = omega_boundary(x);
        // -x f = (pi/2)(1 - eps); the sandwich is 0 < eps < 1e3 exp(-pi^2/(16 x^2)),
        // compared through logarithms since eps is far below 1 ulp of pi/2.
        const double log_bound = std::log(1e3) - kPi * kPi / (16.0 * x * x);
        const bool inside = std::isfinite(b.log_epsilon) && b.log_epsilon < log_bound;
        ok = ok && inside && -x * b.f <= kPi / 2.0;
        rows.push_back({{"x", x},
                        {"minus_x_f", -x * b.f},
                        {"log_epsilon", json_number(b.log_epsilon)},
                        {"log_epsilon_bound", log_bound}});
    }
    o.ok = ok;
    o.measured = {{"points", rows}};
    return o;
}

Outcome tau_mass_consistency(Profile) {
    Outcome o;
    const TauMassReport r = tau_mass_report(1e-8);
    const Complex phi = voiculescu(Complex(0.0, 1.0));
    o.ok = r.discrepancy <= 1e-6 && std::abs(phi.real()) <= 1e-9;
    o.measured = io::to_json(r);
    o.measured["re_phi_i"] = phi.real();
    return o;
}

Outcome semicircular_component(Profile) {
    Outcome o;
    std::vector<double> values;
    for (double t : {3.0, 4.0, 5.0, 6.0}) values.push_back(semicircular_component_check(t));
    bool decreasing = true;
    for (std::size_t i = 1; i < values.size(); ++i) decreasing = decreasing && values[i] < values[i - 1];
    o.ok = decreasing && values.back() <= 1e-7;
    o.measured = {{"T", {3, 4, 5, 6}}, {"values", values}};
    return o;
}

Outcome figure_regeneration(Profile p) {
    Outcome o;
    std::vector<std::string> problems;
    auto note = [&](const std::string& s) {
        if (problems.size() < 10) problems.push_back(s);
    };

    cli::GridArgs grid;
    if (full(p)) grid.n = 2000;
    const auto curve_rows = parse_csv(cli::cmd_curve(grid, "freenormal curve"));
    if (curve_rows.size() != static_cast<std::size_t>(grid.n)) note("curve row count");
    for (std::size_t i = 0; i < curve_rows.size(); ++i) {
        const double x = std::stod(curve_rows[i][0]);
        const double g = std::stod(curve_rows[i][1]);
        const double h = std::stod(curve_rows[i][2]);
        const double res = std::stod(curve_rows[i][3]);
        if (!(h > 0.0) || !(g * h < kPi / 2.0)) note("curve point outside Xi at x = " + std::to_string(x));
        if (x <= CurveConfig{}.x_series_only && !(res <= 1e-10 * std::max(1.0, x)))
            note("curve residual at x = " + std::to_string(x));
        if (i > 0 && !(g > std::stod(curve_rows[i - 1][1]) && h < std::stod(curve_rows[i - 1][2])))
            note("curve monotonicity at x = " + std::to_string(x));
    }

    const auto density_rows = parse_csv(cli::cmd_density(grid, "freenormal density"));
    if (density_rows.size() != static_cast<std::size_t>(grid.n)) note("density row count");
    for (std::size_t i = 0; i < density_rows.size(); ++i) {
        const double x = std::stod(density_rows[i][0]);
        const double d = std::stod(density_rows[i][1]);
        if (!(d > 0.0)) note("density not positive at x = " + std::to_string(x));
        if (i > 0) {
            const double x0 = std::stod(density_rows[i - 1][0]);
            if (!(x * d < x0 * std::stod(density_rows[i - 1][1])))
                note("k not decreasing at x = " + std::to_string(x));
        }
    }

    cli::LevelSetArgs levels;
    const auto outputs = cli::cmd_levelsets(levels, "freenormal levelsets --t 0,0.1,0.4,0.7,1,1.3");
    if (outputs.size() != levels.t.size()) note("levelset output count");
    std::size_t level_points = 0;
    double t0_match = 0.0;
    std::size_t t0_compared = 0;
    CurveSolver solver;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const double t = levels.t[i];
        const auto rows = parse_csv(outputs[i].content);
        if (rows.empty()) note("empty level set t = " + std::to_string(t));
        level_points += rows.size();
        for (const auto& row : rows) {
            const Complex z(std::stod(row[3]), std::stod(row[4]));
            if (!levels.bbox.contains(z) || !in_certified_region(z)) {
                note("level point outside region");
                continue;
            }
            const Complex f = f_tilde(z).value();
            if (!(std::abs(f.imag() - t) <= 1e-9 * std::max(1.0, std::abs(f))))
                note("level residual at t = " + std::to_string(t));
            if (t != 0.0 || z.imag() >= 0.0) continue;
            // Right branch points are H(Re F); left ones mirror them.
            const Complex w = z.real() < 0.0 ? -std::conj(z) : z;
            const double x = std::real(f_tilde(w).value());
            if (x < grid.x_min || x > grid.x_max) continue;
            const CurvePoint h = solver.solve(x);
            t0_match = std::max(t0_match, std::abs(w - h.z()));
            ++t0_compared;
        }
    }
    if (t0_compared == 0) note("no t = 0 points overlap the curve range");
    if (!(t0_match <= 1e-8)) note("t = 0 level set departs from the curve");

    cli::GridArgs svg_grid = grid;
    svg_grid.format = cli::Format::Svg;
    cli::LevelSetArgs svg_levels = levels;
    svg_levels.format = cli::Format::Svg;
    const std::string curve_svg = cli::cmd_curve(svg_grid, "freenormal curve --format svg");
    const std::string level_svg =
        cli::cmd_levelsets(svg_levels, "freenormal levelsets --format svg").front().content;
    for (const std::string* doc : {&curve_svg, &level_svg})
        if (doc->find("<svg") == std::string::npos || doc->find("</svg>") == std::string::npos ||
            doc->find("<polyline") == std::string::npos)
            note("malformed svg");

    o.ok = problems.empty();
    o.measured = {{"curve_rows", curve_rows.size()},
                  {"density_rows", density_rows.size()},
                  {"level_files", outputs.size()},
                  {"level_points", level_points},
                  {"t0_points_compared", t0_compared},
                  {"t0_max_distance", t0_match},
                  {"problems", problems}};
    if (!problems.empty()) o.message = problems.front();
    return o;
}

const CriterionDef kCriteria[kCriterionCount] = {
    {"exact_cumulant_tables", 1.0, exact_cumulant_tables},
    {"stieltjes_identity", 1.0, stieltjes_identity},
    {"ode_identity", 1.0, ode_identity},
    {"contour_oracle_agreement", 30.0, contour_oracle_agreement},
    {"ode_newton_crosscheck", 10.0, ode_newton_crosscheck},
    {"monotonicity", 20.0, monotonicity},
    {"h_infinity_convergence", 5.0, h_infinity_convergence},
    {"zero_regime_convergence", 10.0, zero_regime_convergence},
    {"f_zero_sandwich", 5.0, f_zero_sandwich},
    {"tau_mass_consistency", 60.0, tau_mass_consistency},
    {"semicircular_component", 1.0, semicircular_component},
    {"figure_regeneration", 60.0, figure_regeneration},
};

}  // namespace

std::optional<Profile> parse_profile(std::string_view name) {
    if (name == "fast") return Profile::Fast;
    if (name == "full") return Profile::Full;
    return std::nullopt;
}

std::string_view to_string(Profile profile) noexcept { return profile == Profile::Full ? "full" : "fast"; }

std::string_view criterion_name(int id) {
    if (id < 1 || id > kCriterionCount) fail(ErrorKind::DomainError, "no criterion " + std::to_string(id));
    return kCriteria[id - 1].name;
}

CriterionResult run_criterion(int id, Profile profile) {
    CriterionResult r;
    r.id = id;
    r.name = std::string(criterion_name(id));
    const CriterionDef& def = kCriteria[id - 1];
    r.time_limit = def.time_limit;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = def.run(profile);
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.message = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.within_time = r.seconds < r.time_limit;
    r.passed = outcome.ok && r.within_time;
    r.measured = std::move(outcome.measured);
    r.message = outcome.message;
    if (outcome.ok && !r.within_time) r.message = "exceeded time limit";
    if (!outcome.ok && r.message.empty()) r.message = "tolerance not met";
    return r;
}

bool VerifyReport::all_passed() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

json VerifyReport::to_json() const {
    json list = json::array();
    for (const auto& c : criteria)
        list.push_back({{"id", c.id},
                        {"name", c.name},
                        {"passed", c.passed},
                        {"seconds", c.seconds},
                        {"time_limit", c.time_limit},
                        {"within_time", c.within_time},
                        {"message", c.message},
                        {"measured", c.measured}});
    return {{"profile", std::string(freenormal::to_string(profile))}, {"passed", all_passed()}, {"criteria", list}};
}

VerifyReport run_acceptance(Profile profile, const CriterionCallback& on_result) {
    VerifyReport report;
    report.profile = profile;
    for (int id = 1; id <= kCriterionCount; ++id) {
        report.criteria.push_back(run_criterion(id, profile));
        if (on_result) on_result(report.criteria.back());
    }
    return report;
}

}  // namespace freenormal
