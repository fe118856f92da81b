#pragma once

// Bundled data files, compiled in from core/data by CMake.

#include <string_view>

namespace moodscope::embedded {

extern const std::string_view kDefaultLexicon;
extern const std::string_view kStopwords;

}  // namespace moodscope::embedded
