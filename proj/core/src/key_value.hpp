#pragma once

// Flat `key = value` line format shared by the synth spec and the pipeline
// config. '#' starts a comment when it begins a line or follows whitespace.

#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "moodscope/error.hpp"
#include "text_util.hpp"

namespace moodscope::detail {

struct KeyValue {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

inline std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    KeyValue kv{line_no, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
    if (kv.key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
    if (kv.value.size() >= 2 && kv.value.front() == '"' && kv.value.back() == '"') {
      kv.value = kv.value.substr(1, kv.value.size() - 2);
    }
    out.push_back(std::move(kv));
  }
  return out;
}

}  // namespace moodscope::detail
