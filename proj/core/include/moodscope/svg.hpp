#pragma once

#include <cstddef>
#include <string>

#include "moodscope/stats.hpp"

namespace moodscope {

struct SvgOptions {
  int width = 640;
  int height = 400;
  /// Flagged year pairs drawn as brackets, lowest p first.
  std::size_t max_brackets = 12;
};

/// Standalone SVG line chart of one dimension: z-scored yearly means as
/// points, the fitted quadratic as a single <path class="fit">, and "*" /
/// "**" brackets over marginal / significant year pairs.
std::string render_trend_svg(const TrendSeries& trend, const SignificanceMatrix& matrix,
                             const SvgOptions& options = {});

}  // namespace moodscope
