#pragma once

#include "freenormal/curve.hpp"
#include "freenormal/scaled.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace freenormal::cli {

enum class Format { Text, Csv, Json, Svg };

/// Parses "text", "csv", "json" or "svg"; throws std::invalid_argument otherwise.
Format parse_format(std::string_view s);

/// Parses "a+bi", "a-bi", "a", "bi" (also "i", "-i"); throws std::invalid_argument.
Complex parse_complex(std::string_view s);

/// "re + imi" with 15 significant digits. When the scale is beyond binary64
/// range the mantissa is printed with a separate decimal exponent:
/// "(re + imi)e+1234".
std::string format_value(const ScaledComplex& v);
std::string format_value(const ScaledReal& v);

struct EvalArgs {
    std::string fn = "G";
    std::string z = "0+0i";
    Format format = Format::Text;
};

struct GridArgs {
    double x_min = 0.01;
    double x_max = 10.0;
    int n = 400;
    Format format = Format::Csv;
};

struct LevelSetArgs {
    std::vector<double> t{0.0, 0.1, 0.4, 0.7, 1.0, 1.3};
    BoundingBox bbox;
    double step = 0.02;
    Format format = Format::Csv;
};

struct CumulantArgs {
    /// Largest even index reported, e.g. 8 gives kappa_2 .. kappa_8.
    int order = 8;
    Format format = Format::Json;
};

struct AsymptoticsArgs {
    /// "zero" or "infinity".
    std::string regime = "zero";
    Format format = Format::Csv;
};

/// One generated document; suffix distinguishes several outputs of one command.
struct Output {
    std::string suffix;
    std::string content;
};

std::string cmd_eval(const EvalArgs& args);
std::string cmd_curve(const GridArgs& args, const std::string& command_line);
std::string cmd_density(const GridArgs& args, const std::string& command_line);
/// One output per t for csv/json (suffix "_t<t>"), a single figure for svg.
std::vector<Output> cmd_levelsets(const LevelSetArgs& args, const std::string& command_line);
std::string cmd_cumulants(const CumulantArgs& args);
std::string cmd_asymptotics(const AsymptoticsArgs& args, const std::string& command_line);

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 1 verification failure, 2 usage or domain error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freenormal::cli
