#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace freenormal::svg {

struct Series {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool dashed = false;
    std::string label;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    /// Fixed axis ranges; taken from the data when absent.
    std::optional<std::pair<double, double>> x_range;
    std::optional<std::pair<double, double>> y_range;
    std::vector<Series> series;
};

/// A self-contained SVG document with the panels side by side. The command
/// line is embedded as a comment and in the document description.
std::string render(const std::vector<Panel>& panels, const std::string& command_line);

/// Distinct colors for the i-th series.
std::string palette(std::size_t i);

}  // namespace freenormal::svg
