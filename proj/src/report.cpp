#include "sqv/report.hpp"

#include <cstdio>

namespace sqv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::string format_record(const Record& fields) {
  std::string line;
  for (const auto& [k, v] : fields) {
    if (!line.empty()) line += ' ';
    line += k;
    line += '=';
    line += v;
  }
  return line;
}

Record parse_record(const std::string& line) {
  Record rec;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string::npos) end = line.size();
    if (end > pos) {
      std::string token = line.substr(pos, end - pos);
      std::size_t eq = token.find('=');
      if (eq == std::string::npos)
        fail(ErrorCode::ConfigParse, "record token without '=': " + token);
      rec.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    pos = end + 1;
  }
  return rec;
}

std::string record_value(const Record& rec, const std::string& key) {
  for (const auto& [k, v] : rec)
    if (k == key) return v;
  fail(ErrorCode::ConfigParse, "record has no field '" + key + "'");
}

Record amplitude_record(const AmplitudeReport& r) {
  return Record{
      {"map_key", r.map_key.hex()},
      {"order", std::to_string(r.order)},
      {"feynman_value", format_double(r.feynman_value)},
      {"forest_count", std::to_string(r.forest_values.size())},
      {"forest_sum", format_double(r.forest_sum)},
      {"rel_discrepancy", format_double(r.rel_discrepancy)},
      {"method", to_string(r.method)},
      {"pass", r.pass ? "1" : "0"},
  };
}

}  // namespace sqv
