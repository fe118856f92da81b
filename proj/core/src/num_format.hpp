#pragma once

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace moodscope::detail {

// Every real written to a CSV goes through one of these two.
inline std::string fmt_real(double v) {
  if (v == 0.0) return "0";  // no "-0"
  return fmt::format("{:.6g}", v);
}

inline std::string fmt_pvalue(double p) { return fmt::format("{:.4f}", p); }

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace moodscope::detail
