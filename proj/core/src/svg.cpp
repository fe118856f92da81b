#include "moodscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace moodscope {
namespace {

struct Bracket {
  int year_a;
  int year_b;
  double p;
  Significance flag;
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

}  // namespace

std::string render_trend_svg(const TrendSeries& trend, const SignificanceMatrix& matrix,
                             const SvgOptions& options) {
  const double width = options.width;
  const double height = options.height;
  const double left = 56;
  const double right = 20;
  const double bottom = 40;

  std::vector<Bracket> brackets;
  for (const auto& [pair, flag] : matrix.flags()) {
    if (flag == Significance::none) continue;
    brackets.push_back({pair.first, pair.second, matrix.cells().at(pair).p_value, flag});
  }
  std::sort(brackets.begin(), brackets.end(), [](const Bracket& a, const Bracket& b) {
    if (a.p != b.p) return a.p < b.p;
    return std::pair(a.year_a, a.year_b) < std::pair(b.year_a, b.year_b);
  });
  if (brackets.size() > options.max_brackets) brackets.resize(options.max_brackets);

  const double bracket_step = 14;
  const double top = 36 + bracket_step * static_cast<double>(brackets.size());
  const double plot_h = std::max(40.0, height - top - bottom);
  const double plot_w = width - left - right;
  const double total_h = top + plot_h + bottom;

  const int year_lo = trend.years.empty() ? 0 : trend.years.front();
  const int year_hi = trend.years.empty() ? 1 : trend.years.back();
  const double year_span = std::max(1, year_hi - year_lo);

  double y_lo = -1.0;
  double y_hi = 1.0;
  for (double z : trend.z_scores) {
    y_lo = std::min(y_lo, z);
    y_hi = std::max(y_hi, z);
  }
  for (double f : trend.fit.fitted) {
    y_lo = std::min(y_lo, f);
    y_hi = std::max(y_hi, f);
  }
  const double pad = 0.1 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto px = [&](double year) { return left + (year - year_lo) / year_span * plot_w; };
  auto py = [&](double z) { return top + (y_hi - z) / (y_hi - y_lo) * plot_h; };

  const std::string name{to_string(trend.dimension)};
  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      num(width), num(total_h));
  svg += fmt::format("<title>{} trend</title>\n", name);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += fmt::format("<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
                     num(left), name);

  // Axes and ticks.
  svg += fmt::format("<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n");
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>\n", num(left), num(top + plot_h),
                     num(left + plot_w));
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n", num(left), num(top),
                     num(top + plot_h));
  svg += "</g>\n";
  svg += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int year : trend.years) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(px(year)),
                       num(top + plot_h + 14), year);
  }
  const double tick_lo = std::ceil(y_lo);
  for (double z = tick_lo; z <= y_hi; z += 1.0) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 6),
                       num(py(z) + 3), fmt::format("{:g}", z == 0.0 ? 0.0 : z));
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">year</text>\n",
                     num(left + plot_w / 2), num(top + plot_h + 32));
  svg += "</g>\n";

  // Fitted curve, sampled densely so the parabola looks smooth.
  if (trend.years.size() >= 2) {
    const double x_offset = trend.years.front() - trend.x.front();
    std::string d;
    constexpr int kSamples = 100;
    for (int i = 0; i <= kSamples; ++i) {
      const double year = year_lo + (year_hi - year_lo) * static_cast<double>(i) / kSamples;
      d += fmt::format("{}{},{} ", i == 0 ? "M" : "L", num(px(year)), num(py(trend.fit(year - x_offset))));
    }
    d.pop_back();
    svg += fmt::format("<path class=\"fit\" d=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n", d);
  }

  svg += "<g class=\"points\" fill=\"black\">\n";
  for (std::size_t i = 0; i < trend.years.size() && i < trend.z_scores.size(); ++i) {
    svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3.5\"><title>{}: z={:.3f}</title></circle>\n",
                       num(px(trend.years[i])), num(py(trend.z_scores[i])), trend.years[i], trend.z_scores[i]);
  }
  svg += "</g>\n";

  svg += "<g class=\"brackets\" stroke=\"dimgray\" fill=\"none\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    const auto& b = brackets[i];
    const double y = top - 8 - bracket_step * static_cast<double>(i);
    const double xa = px(b.year_a);
    const double xb = px(b.year_b);
    const char* mark = b.flag == Significance::significant ? "**" : "*";
    svg += fmt::format(
        "<path class=\"bracket\" d=\"M{0},{1} L{0},{2} L{3},{2} L{3},{1}\"><title>{4}-{5} p={6:.4f}</title></path>\n",
        num(xa), num(y + 5), num(y), num(xb), b.year_a, b.year_b, b.p);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">{}</text>\n",
                       num((xa + xb) / 2), num(y - 1), mark);
  }
  svg += "</g>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace moodscope
