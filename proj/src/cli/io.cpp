#include "freenormal/io.hpp"

#include <cmath>
#include <cstdio>

namespace freenormal::io {

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json to_json(const CurvePoint& p) {
    return {{"x", json_number(p.x)},
            {"g", json_number(p.g)},
            {"h", json_number(p.h)},
            {"log_h", json_number(p.log_h)},
            {"residual", json_number(p.residual)},
            {"regime", std::string(to_string(p.regime))},
            {"iterations", p.iterations}};
}

json to_json(const CurveTrace& trace) {
    json pts = json::array();
    for (const auto& p : trace.points) pts.push_back(to_json(p));
    const auto& s = trace.solver_stats;
    return {{"points", pts},
            {"solver_stats",
             {{"solves", s.solves},
              {"total_iterations", s.total_iterations},
              {"max_iterations", s.max_iterations},
              {"damped_steps", s.damped_steps}}}};
}

json to_json(const LevelSetTrace& trace) {
    json pts = json::array();
    for (const auto& z : trace.points) pts.push_back({json_number(z.real()), json_number(z.imag())});
    return {{"t", json_number(trace.t)}, {"branch", std::string(to_string(trace.branch))}, {"points", pts}};
}

json to_json(const LevySample& s) { return {{"x", json_number(s.x)}, {"density", json_number(s.density)}}; }

json to_json(const TauMassReport& r) {
    return {{"mass", json_number(r.mass)},
            {"im_phi_i", json_number(r.im_phi_i)},
            {"discrepancy", json_number(r.discrepancy)},
            {"error_estimate", json_number(r.error_estimate)}};
}

json to_json(const OdeState& s) {
    return {{"x", json_number(s.x)}, {"g", json_number(s.g)}, {"h", json_number(s.h)}};
}

json to_json(const AnchorPoint& a) {
    return {{"x0", json_number(a.x0)},
            {"state", to_json(a.state)},
            {"method", a.method},
            {"residual", json_number(a.residual)}};
}

json to_json(const MonotonicityReport& r) {
    json v = json::array();
    for (const auto& e : r.violations)
        v.push_back({{"state", to_json(e.state)},
                     {"g_prime", json_number(e.g_prime)},
                     {"h_prime", json_number(e.h_prime)},
                     {"reason", e.reason}});
    return {{"checked", r.checked}, {"violations", v}};
}

json to_json(const CrossCheck& c) {
    return {{"x_target", json_number(c.x_target)},
            {"ode_g", json_number(c.ode_g)},
            {"ode_h", json_number(c.ode_h)},
            {"newton_g", json_number(c.newton_g)},
            {"newton_h", json_number(c.newton_h)},
            {"discrepancy", json_number(c.discrepancy)}};
}

json to_json(const RationalSeries& s) { return s.to_strings(); }

json to_json_pairs(const RationalSeries& s) {
    json out = json::array();
    for (const auto& [num, den] : s.to_fraction_pairs()) out.push_back({num, den});
    return out;
}

void write_csv(std::ostream& os, const CurveTrace& trace) {
    os << "x,g,h,residual\n";
    for (const auto& p : trace.points)
        os << csv_number(p.x) << ',' << csv_number(p.g) << ',' << csv_number(p.h) << ','
           << csv_number(p.residual) << '\n';
}

void write_csv(std::ostream& os, const std::vector<LevySample>& samples) {
    os << "x,density\n";
    for (const auto& s : samples) os << csv_number(s.x) << ',' << csv_number(s.density) << '\n';
}

void write_csv(std::ostream& os, const std::vector<LevelSetTrace>& traces) {
    os << "t,branch,index,re,im\n";
    for (const auto& tr : traces)
        for (std::size_t k = 0; k < tr.points.size(); ++k)
            os << csv_number(tr.t) << ',' << to_string(tr.branch) << ',' << k << ','
               << csv_number(tr.points[k].real()) << ',' << csv_number(tr.points[k].imag()) << '\n';
}

}  // namespace freenormal::io
