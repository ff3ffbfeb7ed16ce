#include "freenormal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace freenormal::svg {

namespace {

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 380.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 50.0;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// XML comments may not contain "--".
std::string comment_safe(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
        out += c;
    }
    if (!out.empty() && out.back() == '-') out += ' ';
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double transform(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(const Panel& panel, bool x_axis) {
    Axis axis;
    axis.log = x_axis ? panel.log_x : panel.log_y;
    const auto& fixed = x_axis ? panel.x_range : panel.y_range;
    if (fixed) {
        axis.lo = axis.transform(fixed->first);
        axis.hi = axis.transform(fixed->second);
    } else {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& s : panel.series)
            for (const auto& [x, y] : s.points) {
                const double v = x_axis ? x : y;
                if (!axis.usable(v)) continue;
                lo = std::min(lo, axis.transform(v));
                hi = std::max(hi, axis.transform(v));
            }
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        const double pad = (hi > lo ? hi - lo : 1.0) * 0.04;
        axis.lo = lo - pad;
        axis.hi = hi + pad;
    }
    if (axis.hi == axis.lo) axis.hi = axis.lo + 1.0;
    return axis;
}

std::vector<double> ticks(const Axis& axis) {
    std::vector<double> out;
    if (axis.log) {
        const int first = static_cast<int>(std::ceil(axis.lo));
        const int last = static_cast<int>(std::floor(axis.hi));
        const int stride = std::max(1, (last - first) / 6 + 1);
        for (int e = first; e <= last; e += stride) out.push_back(e);
        return out;
    }
    const double span = axis.hi - axis.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-12 * span; v += step)
        out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return out;
}

void render_panel(std::ostringstream& os, const Panel& panel, double offset_x) {
    const Axis ax = make_axis(panel, true);
    const Axis ay = make_axis(panel, false);
    const double left = offset_x + kMarginLeft;
    const double right = offset_x + kPanelWidth - kMarginRight;
    const double top = kMarginTop;
    const double bottom = kPanelHeight - kMarginBottom;
    auto px = [&](double v) { return left + (v - ax.lo) / (ax.hi - ax.lo) * (right - left); };
    auto py = [&](double v) { return bottom - (v - ay.lo) / (ay.hi - ay.lo) * (bottom - top); };

    os << "<g>\n";
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left)
       << "\" height=\"" << num(bottom - top) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(panel.title) << "</text>\n";
    os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"" << num(kPanelHeight - 10)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";
    os << "<text x=\"" << num(offset_x + 16) << "\" y=\"" << num(0.5 * (top + bottom))
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << num(offset_x + 16) << ' '
       << num(0.5 * (top + bottom)) << ")\">" << escape(panel.y_label) << "</text>\n";

    for (double t : ticks(ax)) {
        const double x = px(t);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(bottom + 5) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(bottom + 18)
           << "\" text-anchor=\"middle\" font-size=\"10\">"
           << escape(ax.log ? "1e" + tick_label(t) : tick_label(t)) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\""
           << num(y) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">"
           << escape(ay.log ? "1e" + tick_label(t) : tick_label(t)) << "</text>\n";
    }

    os << "<clipPath id=\"clip" << static_cast<int>(offset_x) << "\"><rect x=\"" << num(left) << "\" y=\""
       << num(top) << "\" width=\"" << num(right - left) << "\" height=\"" << num(bottom - top)
       << "\"/></clipPath>\n";
    os << "<g clip-path=\"url(#clip" << static_cast<int>(offset_x) << ")\">\n";
    for (const auto& s : panel.series) {
        // Break the polyline wherever a point cannot be drawn.
        std::vector<std::string> runs;
        std::string current;
        for (const auto& [x, y] : s.points) {
            if (!ax.usable(x) || !ay.usable(y)) {
                if (!current.empty()) runs.push_back(current);
                current.clear();
                continue;
            }
            current += num(px(ax.transform(x))) + "," + num(py(ay.transform(y))) + " ";
        }
        if (!current.empty()) runs.push_back(current);
        for (const auto& run : runs) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (s.dashed) os << " stroke-dasharray=\"6,4\"";
            os << " points=\"" << run << "\"/>\n";
        }
    }
    os << "</g>\n";

    double legend_y = top + 14;
    for (const auto& s : panel.series) {
        if (s.label.empty()) continue;
        os << "<line x1=\"" << num(right - 110) << "\" y1=\"" << num(legend_y - 4) << "\" x2=\""
           << num(right - 90) << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>\n";
        os << "<text x=\"" << num(right - 85) << "\" y=\"" << num(legend_y) << "\" font-size=\"10\">"
           << escape(s.label) << "</text>\n";
        legend_y += 14;
    }
    os << "</g>\n";
}

}  // namespace

std::string palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#e6b800", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

std::string render(const std::vector<Panel>& panels, const std::string& command_line) {
    std::ostringstream os;
    const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!-- " << comment_safe(command_line) << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(kPanelHeight) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(kPanelHeight) << "\">\n";
    os << "<desc>" << escape(command_line) << "</desc>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) render_panel(os, panels[i], kPanelWidth * i);
    os << "</svg>\n";
    return os.str();
}

}  // namespace freenormal::svg
