#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qnehari/quat.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// Shortest text that round-trips a double (%.17g).
std::string format_double(double v);

/// [x0, x1, x2, x3]
nlohmann::json quaternion_to_json(const Quaternion& q);
/// Throws ConfigError unless given an array of four numbers.
Quaternion quaternion_from_json(const nlohmann::json& j);

/// Array of coefficient arrays, lowest degree first.
nlohmann::json series_to_json(const TruncatedSeries& f);
TruncatedSeries series_from_json(const nlohmann::json& j);

/// CSV rows `n,x0,x1,x2,x3`.
void write_series_csv(std::ostream& os, const TruncatedSeries& f);
/// Rows may come in any order; missing degrees are zero. Throws ConfigError.
TruncatedSeries read_series_csv(std::istream& is);

}  // namespace qnehari
