#include "freenormal/cli.hpp"

#include "freenormal/errors.hpp"
#include "freenormal/io.hpp"
#include "freenormal/levy.hpp"
#include "freenormal/series.hpp"
#include "freenormal/svg.hpp"
#include "freenormal/transforms.hpp"
#include "freenormal/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace freenormal::cli {

namespace {

using io::csv_number;
using io::json;
using io::json_number;

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

double parse_real(const std::string& s, std::string_view whole) {
    if (s.empty()) throw std::invalid_argument("malformed complex number: " + std::string(whole));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed complex number: " + std::string(whole));
    }
    if (used != s.size()) throw std::invalid_argument("malformed complex number: " + std::string(whole));
    return v;
}

std::string fmt15(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string complex_text(Complex v) {
    const double im = v.imag() == 0.0 ? 0.0 : v.imag();
    return fmt15(v.real()) + (std::signbit(im) ? " - " : " + ") + fmt15(std::abs(im)) + "i";
}

std::string short_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Splits log_scale into a decimal exponent and a residual factor.
std::pair<long long, double> decimal_split(double log_scale) {
    // Long double keeps the fractional part accurate for large exponents.
    const long double l10 = static_cast<long double>(log_scale) / std::numbers::ln10_v<long double>;
    const long double e = std::floor(l10 + 1e-12L);
    return {static_cast<long long>(e),
            static_cast<double>(std::exp(static_cast<long double>(log_scale) - e * std::numbers::ln10_v<long double>))};
}

std::string exponent_suffix(long long e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%+lld", e);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs;
    for (int k = 0; k < n; ++k)
        xs.push_back(n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1)));
    return xs;
}

void check_grid(const GridArgs& a) {
    if (!(a.x_min > 0.0) || !(a.x_max > a.x_min) || a.n < 2)
        throw std::invalid_argument("need 0 < xmin < xmax and n >= 2");
}

svg::Series xi_boundary(double x_extent, double y_floor, bool left) {
    svg::Series s;
    s.color = "#555555";
    s.dashed = true;
    s.label = left ? "" : "boundary of Xi";
    const double x_start = std::numbers::pi / (2.0 * -y_floor);
    for (const double x : log_grid(x_start, std::max(x_extent, 2.0 * x_start), 200))
        s.points.emplace_back(left ? -x : x, -std::numbers::pi / (2.0 * x));
    return s;
}

std::string curve_svg(const CurveTrace& trace, const std::string& command_line) {
    svg::Panel h_panel;
    h_panel.title = "h(x)";
    h_panel.x_label = "x";
    h_panel.y_label = "h";
    h_panel.log_x = true;
    svg::Series hs;
    hs.color = svg::palette(0);
    for (const auto& p : trace.points) hs.points.emplace_back(p.x, p.h);
    h_panel.series.push_back(hs);

    const double y_floor = -5.0;
    double extent = 1.0;
    for (const auto& p : trace.points) extent = std::max(extent, p.g);
    extent = std::min(extent, 8.0);
    svg::Panel plane;
    plane.title = "boundary curve in the lower half-plane";
    plane.x_label = "Re z";
    plane.y_label = "Im z";
    plane.x_range = std::make_pair(-extent, extent);
    plane.y_range = std::make_pair(y_floor, 0.5);
    svg::Series right;
    right.color = svg::palette(0);
    right.label = "H(x)";
    svg::Series left;
    left.color = svg::palette(0);
    for (const auto& p : trace.points) {
        right.points.emplace_back(p.g, -p.h);
        left.points.emplace_back(-p.g, -p.h);
    }
    plane.series = {right, left, xi_boundary(extent, y_floor, false), xi_boundary(extent, y_floor, true)};
    return svg::render({h_panel, plane}, command_line);
}

std::string levelset_svg(const std::vector<LevelSetTrace>& traces, const std::vector<double>& ts,
                         const BoundingBox& bbox, const std::string& command_line) {
    svg::Panel plane;
    plane.title = "level sets Im F = t";
    plane.x_label = "Re z";
    plane.y_label = "Im z";
    plane.x_range = std::make_pair(bbox.re_min, bbox.re_max);
    plane.y_range = std::make_pair(bbox.im_min, bbox.im_max);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        bool labelled = false;
        for (const auto& tr : traces) {
            if (tr.t != ts[i]) continue;
            svg::Series s;
            s.color = svg::palette(i);
            if (!labelled) s.label = "t = " + short_number(ts[i]);
            labelled = true;
            for (const auto& z : tr.points) s.points.emplace_back(z.real(), z.imag());
            plane.series.push_back(s);
        }
    }
    const double extent = std::max(std::abs(bbox.re_min), std::abs(bbox.re_max));
    if (bbox.im_min < 0.0) {
        plane.series.push_back(xi_boundary(extent, bbox.im_min, false));
        plane.series.push_back(xi_boundary(extent, bbox.im_min, true));
    }
    return svg::render({plane}, command_line);
}

std::string write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return "";
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + path);
    f << content;
    return path;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Format parse_format(std::string_view s) {
    if (s == "text") return Format::Text;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    if (s == "svg") return Format::Svg;
    throw std::invalid_argument("unknown format: " + std::string(s));
}

Complex parse_complex(std::string_view input) {
    std::string s;
    for (char c : input)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, input), 0.0};
    s.pop_back();
    // Split at the last sign that does not belong to an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    const double re = re_part.empty() ? 0.0 : parse_real(re_part, input);
    return {re, parse_real(im_part, input)};
}

std::string format_value(const ScaledComplex& v) {
    if (v.is_zero() || std::abs(v.log_scale()) <= 700.0) return complex_text(v.value());
    const auto [e, factor] = decimal_split(v.log_scale());
    return "(" + complex_text(v.mantissa() * factor) + ")" + exponent_suffix(e);
}

std::string format_value(const ScaledReal& v) {
    if (v.mantissa == 0.0 || std::abs(v.log_scale) <= 700.0) return fmt15(v.value());
    const auto [e, factor] = decimal_split(v.log_scale);
    return fmt15(v.mantissa * factor) + exponent_suffix(e);
}

std::string cmd_eval(const EvalArgs& args) {
    const Complex z = parse_complex(args.z);
    std::string text;
    json j;
    auto record = [&](const ScaledComplex& v) {
        text = format_value(v);
        const Complex m = v.mantissa();
        j = {{"fn", args.fn},
             {"z", {json_number(z.real()), json_number(z.imag())}},
             {"mantissa", {json_number(m.real()), json_number(m.imag())}},
             {"log_scale", json_number(v.log_scale())},
             {"text", text}};
    };
    if (args.fn == "G") {
        record(g_tilde(z));
    } else if (args.fn == "Gprime") {
        record(g_tilde_prime(z));
    } else if (args.fn == "F") {
        record(f_tilde(z));
    } else if (args.fn == "Fprime") {
        record(f_tilde_prime(z));
    } else if (args.fn == "rho") {
        if (z.imag() != 0.0) throw std::invalid_argument("rho takes a real argument");
        const ScaledReal r = rho(z.real());
        text = format_value(r);
        j = {{"fn", args.fn},
             {"z", {json_number(z.real()), 0.0}},
             {"mantissa", json_number(r.mantissa)},
             {"log_scale", json_number(r.log_scale)},
             {"text", text}};
    } else {
        throw std::invalid_argument("unknown function: " + args.fn + " (expected G, Gprime, F, Fprime, rho)");
    }
    if (args.format == Format::Json) return json_text(j);
    if (args.format != Format::Text) throw std::invalid_argument("eval supports text and json output");
    return text + "\n";
}

std::string cmd_curve(const GridArgs& args, const std::string& command_line) {
    check_grid(args);
    const CurveTrace trace = trace_p0(args.x_min, args.x_max, args.n);
    switch (args.format) {
        case Format::Json: return json_text(io::to_json(trace));
        case Format::Svg: return curve_svg(trace, command_line);
        case Format::Csv: {
            std::ostringstream os;
            io::write_csv(os, trace);
            return os.str();
        }
        default: throw std::invalid_argument("curve supports csv, json and svg output");
    }
}

std::string cmd_density(const GridArgs& args, const std::string& command_line) {
    check_grid(args);
    const auto table = levy_density_table(args.x_min, args.x_max, args.n);
    switch (args.format) {
        case Format::Json: {
            json arr = json::array();
            for (const auto& s : table) arr.push_back(io::to_json(s));
            return json_text(arr);
        }
        case Format::Svg: {
            svg::Panel panel;
            panel.title = "free Levy density h(x) / (pi x^2)";
            panel.x_label = "x";
            panel.y_label = "density";
            panel.log_x = true;
            panel.log_y = true;
            svg::Series s;
            s.color = svg::palette(0);
            for (const auto& p : table) s.points.emplace_back(p.x, p.density);
            panel.series.push_back(s);
            return svg::render({panel}, command_line);
        }
        case Format::Csv: {
            std::ostringstream os;
            io::write_csv(os, table);
            return os.str();
        }
        default: throw std::invalid_argument("density supports csv, json and svg output");
    }
}

std::vector<Output> cmd_levelsets(const LevelSetArgs& args, const std::string& command_line) {
    if (args.t.empty()) throw std::invalid_argument("need at least one level t");
    if (!(args.step > 0.0)) throw std::invalid_argument("step must be positive");
    std::vector<std::vector<LevelSetTrace>> per_t;
    for (double t : args.t) {
        if (!(t >= 0.0)) throw std::invalid_argument("levels must satisfy t >= 0");
        per_t.push_back(trace_level_set(t, args.bbox, args.step));
    }
    std::vector<Output> outputs;
    if (args.format == Format::Svg) {
        std::vector<LevelSetTrace> all;
        for (const auto& v : per_t) all.insert(all.end(), v.begin(), v.end());
        outputs.push_back({"", levelset_svg(all, args.t, args.bbox, command_line)});
        return outputs;
    }
    for (std::size_t i = 0; i < per_t.size(); ++i) {
        const std::string suffix = "_t" + short_number(args.t[i]);
        if (args.format == Format::Json) {
            json arr = json::array();
            for (const auto& tr : per_t[i]) arr.push_back(io::to_json(tr));
            outputs.push_back({suffix, json_text(arr)});
        } else if (args.format == Format::Csv) {
            std::ostringstream os;
            io::write_csv(os, per_t[i]);
            outputs.push_back({suffix, os.str()});
        } else {
            throw std::invalid_argument("levelsets supports csv, json and svg output");
        }
    }
    return outputs;
}

std::string cmd_cumulants(const CumulantArgs& args) {
    if (args.order < 2) throw std::invalid_argument("order must be at least 2");
    const int count = args.order / 2;
    const RationalSeries m = moments(count + 1);
    const RationalSeries b = boolean_cumulants(count);
    const RationalSeries k = free_cumulants(count);
    const RationalSeries a = h_infinity_coefficients(count);
    const RationalSeries c = f_infinity_coefficients(count);
    if (args.format == Format::Json) {
        json j = {{"order", 2 * count},
                  {"moments", io::to_json(m)},
                  {"boolean", io::to_json(b)},
                  {"free", io::to_json(k)},
                  {"h_infinity", io::to_json(a)},
                  {"f_infinity", io::to_json(c)},
                  {"fractions",
                   {{"moments", io::to_json_pairs(m)},
                    {"boolean", io::to_json_pairs(b)},
                    {"free", io::to_json_pairs(k)},
                    {"h_infinity", io::to_json_pairs(a)},
                    {"f_infinity", io::to_json_pairs(c)}}}};
        return json_text(j);
    }
    if (args.format != Format::Csv && args.format != Format::Text)
        throw std::invalid_argument("cumulants supports json and csv output");
    const auto ms = m.to_strings();
    const auto bs = b.to_strings();
    const auto ks = k.to_strings();
    const auto as = a.to_strings();
    const auto cs = c.to_strings();
    std::ostringstream os;
    os << "index,moment,boolean,free,h_infinity,f_infinity\n";
    os << "0," << ms[0] << ",,,,\n";
    for (int n = 1; n <= count; ++n)
        os << 2 * n << ',' << ms[n] << ',' << bs[n - 1] << ',' << ks[n - 1] << ',' << as[n - 1] << ','
           << cs[n - 1] << '\n';
    return os.str();
}

std::string cmd_asymptotics(const AsymptoticsArgs& args, const std::string& command_line) {
    struct Row {
        double x, g, g_asym, h, h_asym, rel_g, rel_h, extra;
    };
    std::vector<Row> rows;
    std::string extra_name;
    CurveSolver solver;
    if (args.regime == "zero") {
        extra_name = "gh_minus_half_pi";
        for (double x : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
            const CurvePoint p = solver.solve(x);
            const double ga = eval_g_asym_zero(x);
            const double ha = eval_h_asym_zero(x);
            rows.push_back({x, p.g, ga, p.h, ha, std::abs(p.g / ga - 1.0), std::abs(p.h / ha - 1.0),
                            p.g * p.h - std::numbers::pi / 2.0});
        }
    } else if (args.regime == "infinity") {
        extra_name = "h_rel_err_order1";
        for (double x = 6.0; x <= 14.0; x += 1.0) {
            const CurvePoint p = solver.solve(x);
            const double ga = eval_g_asym_infinity(x, 3);
            const ScaledReal ha = eval_h_asym_infinity(x, 3);
            const ScaledReal h1 = eval_h_asym_infinity(x, 1);
            rows.push_back({x, p.g, ga, p.h, ha.value(), std::abs(p.g / ga - 1.0),
                            std::abs(std::expm1(p.log_h - ha.log())), std::abs(std::expm1(p.log_h - h1.log()))});
        }
    } else {
        throw std::invalid_argument("regime must be zero or infinity");
    }

    switch (args.format) {
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"x", json_number(r.x)},
                               {"g_solver", json_number(r.g)},
                               {"g_asym", json_number(r.g_asym)},
                               {"rel_err_g", json_number(r.rel_g)},
                               {"h_solver", json_number(r.h)},
                               {"h_asym", json_number(r.h_asym)},
                               {"rel_err_h", json_number(r.rel_h)},
                               {extra_name, json_number(r.extra)}});
            return json_text({{"regime", args.regime}, {"rows", arr}});
        }
        case Format::Svg: {
            svg::Panel panel;
            panel.title = "relative error of the " + args.regime + " asymptotics";
            panel.x_label = "x";
            panel.y_label = "relative error";
            panel.log_x = args.regime == "zero";
            panel.log_y = true;
            svg::Series sg{{}, svg::palette(0), false, "g"};
            svg::Series sh{{}, svg::palette(3), false, "h"};
            for (const auto& r : rows) {
                sg.points.emplace_back(r.x, r.rel_g);
                sh.points.emplace_back(r.x, r.rel_h);
            }
            panel.series = {sg, sh};
            return svg::render({panel}, command_line);
        }
        case Format::Csv:
        case Format::Text: {
            std::ostringstream os;
            os << "x,g_solver,g_asym,rel_err_g,h_solver,h_asym,rel_err_h," << extra_name << '\n';
            for (const auto& r : rows)
                os << csv_number(r.x) << ',' << csv_number(r.g) << ',' << csv_number(r.g_asym) << ','
                   << csv_number(r.rel_g) << ',' << csv_number(r.h) << ',' << csv_number(r.h_asym) << ','
                   << csv_number(r.rel_h) << ',' << csv_number(r.extra) << '\n';
            return os.str();
        }
    }
    return {};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::string command_line = "freenormal";
    for (int k = 1; k < argc; ++k) command_line += std::string(" ") + argv[k];

    CLI::App app{"Cauchy transform of the standard normal law and its free Levy measure", "freenormal"};
    app.require_subcommand(1);

    std::string format_name;
    std::string output;
    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate G, Gprime, F, Fprime or rho at a point");
    eval->add_option("--fn", eval_args.fn, "Function: G, Gprime, F, Fprime, rho")->required();
    eval->add_option("--z", eval_args.z, "Argument, e.g. 1.5-0.3i")->required();
    eval->add_option("--format", format_name, "text or json");

    GridArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Trace the boundary curve H(x) = g(x) - i h(x)");
    curve->add_option("--xmin", curve_args.x_min)->capture_default_str();
    curve->add_option("--xmax", curve_args.x_max)->capture_default_str();
    curve->add_option("--n", curve_args.n)->capture_default_str();
    curve->add_option("--format", format_name, "csv, json or svg");
    curve->add_option("-o,--output", output, "Output file (stdout when omitted)");

    GridArgs density_args;
    auto* density = app.add_subcommand("density", "Tabulate the free Levy density");
    density->add_option("--xmin", density_args.x_min)->capture_default_str();
    density->add_option("--xmax", density_args.x_max)->capture_default_str();
    density->add_option("--n", density_args.n)->capture_default_str();
    density->add_option("--format", format_name, "csv, json or svg");
    density->add_option("-o,--output", output, "Output file (stdout when omitted)");

    LevelSetArgs level_args;
    std::vector<double> bbox_values;
    auto* levels = app.add_subcommand("levelsets", "Trace the level sets Im F = t");
    levels->add_option("--t", level_args.t, "Comma-separated levels")->delimiter(',')->capture_default_str();
    levels->add_option("--bbox", bbox_values, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    levels->add_option("--step", level_args.step)->capture_default_str();
    levels->add_option("--format", format_name, "csv, json or svg");
    levels->add_option("-o,--output", output,
                       "Output path; for csv and json one file <output>_t<t>.<format> per level");

    CumulantArgs cumulant_args;
    auto* cumulants = app.add_subcommand("cumulants", "Exact moment and cumulant tables");
    cumulants->add_option("--order", cumulant_args.order, "Largest even index")->capture_default_str();
    cumulants->add_option("--format", format_name, "json or csv");
    cumulants->add_option("-o,--output", output, "Output file (stdout when omitted)");

    AsymptoticsArgs asym_args;
    auto* asymptotics = app.add_subcommand("asymptotics", "Compare the curve with its asymptotic forms");
    asymptotics->add_option("--regime", asym_args.regime, "zero or infinity")->capture_default_str();
    asymptotics->add_option("--format", format_name, "csv, json or svg");
    asymptotics->add_option("-o,--output", output, "Output file (stdout when omitted)");

    std::string profile_name;
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks and print a JSON report");
    verify->add_option("--profile", profile_name, "fast or full (default from FREENORMAL_PROFILE)");
    verify->add_option("-o,--output", output, "Report file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        auto format_or = [&](Format fallback) {
            return format_name.empty() ? fallback : parse_format(format_name);
        };
        if (eval->parsed()) {
            eval_args.format = format_or(Format::Text);
            write_output("", cmd_eval(eval_args), out);
        } else if (curve->parsed()) {
            curve_args.format = format_or(Format::Csv);
            write_output(output, cmd_curve(curve_args, command_line), out);
        } else if (density->parsed()) {
            density_args.format = format_or(Format::Csv);
            write_output(output, cmd_density(density_args, command_line), out);
        } else if (levels->parsed()) {
            level_args.format = format_or(Format::Csv);
            if (!bbox_values.empty())
                level_args.bbox = {bbox_values[0], bbox_values[1], bbox_values[2], bbox_values[3]};
            const auto outputs = cmd_levelsets(level_args, command_line);
            if (output.empty() || output == "-") {
                for (const auto& o : outputs) out << o.content;
            } else if (level_args.format == Format::Svg) {
                write_output(output, outputs.front().content, out);
            } else {
                const std::string ext = level_args.format == Format::Json ? ".json" : ".csv";
                for (const auto& o : outputs) write_output(output + o.suffix + ext, o.content, out);
            }
        } else if (cumulants->parsed()) {
            cumulant_args.format = format_or(Format::Json);
            write_output(output, cmd_cumulants(cumulant_args), out);
        } else if (asymptotics->parsed()) {
            asym_args.format = format_or(Format::Csv);
            write_output(output, cmd_asymptotics(asym_args, command_line), out);
        } else if (verify->parsed()) {
            if (profile_name.empty()) {
                const char* env = std::getenv("FREENORMAL_PROFILE");
                profile_name = env != nullptr && *env != '\0' ? env : "fast";
            }
            const auto profile = parse_profile(trim(profile_name));
            if (!profile) throw std::invalid_argument("profile must be fast or full");
            const VerifyReport report = run_acceptance(*profile, [&](const CriterionResult& r) {
                err << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << " (" << r.seconds << " s)"
                    << (r.message.empty() ? "" : ": " + r.message) << "\n";
            });
            write_output(output, report.to_json().dump(2) + "\n", out);
            return report.all_passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace freenormal::cli
