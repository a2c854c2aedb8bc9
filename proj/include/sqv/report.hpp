#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sqv/stochastic.hpp"

namespace sqv {

/// Fixed float formatting for all reports: 12 significant digits.
std::string format_double(double v);

/// Line-delimited machine records: space-separated key=value tokens,
/// values free of whitespace. One record per check.
using Record = std::vector<std::pair<std::string, std::string>>;

std::string format_record(const Record& fields);
Record parse_record(const std::string& line);
std::string record_value(const Record& rec, const std::string& key);

Record amplitude_record(const AmplitudeReport& report);

}  // namespace sqv
