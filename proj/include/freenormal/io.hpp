#pragma once

#include "freenormal/curve.hpp"
#include "freenormal/levy.hpp"
#include "freenormal/ode_oracle.hpp"
#include "freenormal/series.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace freenormal::io {

using nlohmann::json;

/// Fixed 17-significant-digit form used in CSV output.
std::string csv_number(double v);

/// JSON number, or null when v is not finite.
json json_number(double v);

json to_json(const CurvePoint& p);
json to_json(const CurveTrace& trace);
json to_json(const LevelSetTrace& trace);
json to_json(const LevySample& s);
json to_json(const TauMassReport& r);
json to_json(const OdeState& s);
json to_json(const AnchorPoint& a);
json to_json(const MonotonicityReport& r);
json to_json(const CrossCheck& c);
/// Exact entries as "p/q" strings.
json to_json(const RationalSeries& s);
/// Exact entries as [numerator, denominator] string pairs.
json to_json_pairs(const RationalSeries& s);

/// Columns x, g, h, residual.
void write_csv(std::ostream& os, const CurveTrace& trace);
/// Columns x, density.
void write_csv(std::ostream& os, const std::vector<LevySample>& samples);
/// Columns t, branch, index, re, im.
void write_csv(std::ostream& os, const std::vector<LevelSetTrace>& traces);

}  // namespace freenormal::io
