#include "moodscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "moodscope/error.hpp"
#include "num_format.hpp"

namespace moodscope {

std::optional<KsMethod> parse_ks_method(std::string_view name) {
  if (name == "asymptotic") return KsMethod::asymptotic;
  if (name == "exact") return KsMethod::exact;
  if (name == "auto" || name == "automatic") return KsMethod::automatic;
  return std::nullopt;
}

std::string_view to_string(KsMethod method) {
  switch (method) {
    case KsMethod::asymptotic: return "asymptotic";
    case KsMethod::exact: return "exact";
    case KsMethod::automatic: return "auto";
  }
  return "?";
}

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  if (std::any_of(s.begin(), s.end(), [](double x) { return std::isnan(x); })) {
    throw PreconditionError("KS sample contains NaN");
  }
  std::sort(s.begin(), s.end());
  return s;
}

// max |i*m - j*n| over all sample points of two sorted samples.
std::int64_t ks_numerator(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<std::int64_t>(a.size());
  const auto m = static_cast<std::int64_t>(b.size());
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::int64_t best = 0;
  while (i < n && j < m) {
    const double x = std::min(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
    while (i < n && a[static_cast<std::size_t>(i)] <= x) ++i;
    while (j < m && b[static_cast<std::size_t>(j)] <= x) ++j;
    best = std::max(best, std::abs(i * m - j * n));
  }
  return best;
}

void require_samples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("KS test needs two non-empty samples");
}

}  // namespace

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const auto num = ks_numerator(sorted_copy(a), sorted_copy(b));
  return static_cast<double>(num) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double p = 0.0;
  if (lambda < 1.18) {
    // Same function through the Jacobi theta identity; the alternating
    // series converges too slowly here.
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * w);
      sum += term;
      if (term <= 1e-17 * sum) break;
    }
    p = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
      const double term = 2.0 * sign * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::abs(term) <= 1e-16 * std::abs(p)) break;
      sign = -sign;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

double ks_asymptotic_p(double d, std::size_t n, std::size_t m) {
  if (d <= 0.0) return 1.0;
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double root = std::sqrt(ne);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

double ks_exact_p(std::span<const double> a, std::span<const double> b, double d) {
  require_samples(a, b);
  const auto n = static_cast<std::int64_t>(a.size());
  const auto m = static_cast<std::int64_t>(b.size());
  const auto threshold = static_cast<std::int64_t>(std::llround(d * static_cast<double>(n * m)));

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const auto total = static_cast<std::size_t>(n + m);
  // boundary[t]: D may be evaluated after the first t pooled values.
  std::vector<char> boundary(total + 1, 0);
  boundary[total] = 1;
  for (std::size_t t = 1; t < total; ++t) boundary[t] = pooled[t - 1] < pooled[t] ? 1 : 0;

  // Probability of each lattice point (i values from a, j from b) among
  // paths that have not yet reached |i*m - j*n| >= threshold at a boundary.
  const auto cols = static_cast<std::size_t>(m + 1);
  std::vector<double> prob(static_cast<std::size_t>(n + 1) * cols, 0.0);
  prob[0] = 1.0;
  double outside = 0.0;
  for (std::int64_t t = 0; t <= n + m; ++t) {
    for (std::int64_t i = std::max<std::int64_t>(0, t - m); i <= std::min(n, t); ++i) {
      const std::int64_t j = t - i;
      double& here = prob[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)];
      if (here == 0.0) continue;
      if (t > 0 && boundary[static_cast<std::size_t>(t)] && std::abs(i * m - j * n) >= threshold) {
        outside += here;
        here = 0.0;
        continue;
      }
      const double left = static_cast<double>(n + m - t);
      if (i < n) {
        prob[static_cast<std::size_t>(i + 1) * cols + static_cast<std::size_t>(j)] +=
            here * static_cast<double>(n - i) / left;
      }
      if (j < m) {
        prob[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j + 1)] +=
            here * static_cast<double>(m - j) / left;
      }
    }
  }
  return std::clamp(outside, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, KsMethod method) {
  require_samples(a, b);
  KsResult r;
  r.n = a.size();
  r.m = b.size();
  r.d_statistic = ks_statistic(a, b);
  if (method == KsMethod::automatic) {
    method = r.n * r.m <= kExactKsLimit ? KsMethod::exact : KsMethod::asymptotic;
  }
  if (r.d_statistic == 0.0) {
    r.p_value = 1.0;
  } else if (method == KsMethod::exact) {
    // Fixed argument order keeps the result bit-identical under swapping.
    auto sa = sorted_copy(a);
    auto sb = sorted_copy(b);
    if (sa.size() > sb.size() || (sa.size() == sb.size() && sb < sa)) std::swap(sa, sb);
    r.p_value = ks_exact_p(sa, sb, r.d_statistic);
  } else {
    r.p_value = ks_asymptotic_p(r.d_statistic, r.n, r.m);
  }
  return r;
}

// --- pairwise year comparison ----------------------------------------------

std::string_view to_string(Significance s) {
  switch (s) {
    case Significance::none: return "none";
    case Significance::marginal: return "marginal";
    case Significance::significant: return "significant";
  }
  return "?";
}

const KsResult& SignificanceMatrix::cell(int year_a, int year_b) const {
  return cells_.at(key(year_a, year_b));
}

Significance SignificanceMatrix::flag(int year_a, int year_b) const {
  return flags_.at(key(year_a, year_b));
}

void SignificanceMatrix::set(int year_a, int year_b, const KsResult& result, Significance flag) {
  cells_[key(year_a, year_b)] = result;
  flags_[key(year_a, year_b)] = flag;
}

SignificanceMatrix pairwise_ks(const BucketMap& buckets, MoodScale dimension,
                               const PairwiseOptions& options) {
  SignificanceMatrix matrix;
  matrix.dimension = dimension;
  std::vector<std::vector<double>> samples;
  for (const auto& [year, bucket] : buckets) {
    if (bucket.vectors.empty()) {
      matrix.skipped_years.push_back(year);
      continue;
    }
    matrix.years.push_back(year);
    samples.push_back(bucket.component(dimension));
  }
  if (matrix.years.size() < 2) {
    throw PreconditionError(fmt::format("pairwise KS on {} needs at least 2 non-empty buckets, got {}",
                                        to_string(dimension), matrix.years.size()));
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) pairs.emplace_back(i, j);
  }
  std::vector<KsResult> results(pairs.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      results[k] = ks_two_sample(samples[pairs[k].first], samples[pairs[k].second], options.method);
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(pairs.size())));
  if (threads == 1) {
    run(0, pairs.size());
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (pairs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < pairs.size(); begin += chunk) {
      workers.emplace_back(run, begin, std::min(pairs.size(), begin + chunk));
    }
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    matrix.set(matrix.years[pairs[k].first], matrix.years[pairs[k].second], results[k],
               options.thresholds.classify(results[k].p_value));
  }
  return matrix;
}

void write_significance_csv(std::ostream& out, const SignificanceMatrix& matrix) {
  out << "year_a,year_b,dimension,d,p,flag\n";
  for (const auto& [pair, r] : matrix.cells()) {
    out << pair.first << ',' << pair.second << ',' << to_string(matrix.dimension) << ','
        << detail::fmt_real(r.d_statistic) << ',' << detail::fmt_pvalue(r.p_value) << ','
        << to_string(matrix.flags().at(pair)) << '\n';
  }
}

// --- trend machinery -------------------------------------------------------

namespace {

// Running mean; exact for constant input.
double running_mean(std::span<const double> v) {
  double mean = 0.0;
  std::size_t k = 0;
  for (double x : v) mean += (x - mean) / static_cast<double>(++k);
  return mean;
}

}  // namespace

ZScores zscore_series(std::span<const double> values) {
  if (values.size() < 2) throw PreconditionError("z-scores need at least 2 values");
  ZScores z;
  z.values.assign(values.size(), 0.0);
  const double mean = running_mean(values);
  double ss = 0.0;
  double scale = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
    scale = std::max(scale, std::abs(v));
  }
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  // Spread at rounding-noise level counts as none.
  if (sd <= 64.0 * std::numeric_limits<double>::epsilon() * scale || sd == 0.0) {
    z.degenerate = true;
    return z;
  }
  for (std::size_t i = 0; i < values.size(); ++i) z.values[i] = (values[i] - mean) / sd;
  return z;
}

QuadraticFit polyfit2(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("polyfit2: xs and ys differ in length");
  std::vector<double> distinct(xs.begin(), xs.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw PreconditionError("polyfit2 needs at least 3 distinct x values");

  const auto n = static_cast<Eigen::Index>(xs.size());
  const double mu = running_mean(xs);
  double spread = 0.0;
  for (double x : xs) spread = std::max(spread, std::abs(x - mu));

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (xs[static_cast<std::size_t>(i)] - mu) / spread;
    design(i, 0) = 1.0;
    design(i, 1) = u;
    design(i, 2) = u * u;
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d b = design.colPivHouseholderQr().solve(y);

  // Back from u = (x - mu) / spread to x.
  const double a1 = b(1) / spread;
  const double a2 = b(2) / (spread * spread);
  QuadraticFit fit;
  fit.c2 = a2;
  fit.c1 = a1 - 2.0 * a2 * mu;
  fit.c0 = b(0) - a1 * mu + a2 * mu * mu;
  const Eigen::VectorXd fitted = design * b;
  fit.fitted.assign(fitted.data(), fitted.data() + fitted.size());
  return fit;
}

TrendSeries build_trend(const BucketMap& buckets, MoodScale dimension) {
  TrendSeries t;
  t.dimension = dimension;
  for (const auto& [year, bucket] : buckets) {
    if (bucket.vectors.empty()) continue;
    t.years.push_back(year);
    t.raw_means.push_back(running_mean(bucket.component(dimension)));
  }
  if (t.years.size() < 3) {
    throw PreconditionError(fmt::format("trend for {} needs at least 3 non-empty buckets, got {}",
                                        to_string(dimension), t.years.size()));
  }
  const ZScores z = zscore_series(t.raw_means);
  t.z_scores = z.values;
  t.degenerate = z.degenerate;

  std::vector<double> years_d(t.years.begin(), t.years.end());
  const double centre = running_mean(years_d);
  for (int y : t.years) t.x.push_back(static_cast<double>(y) - centre);
  t.fit = polyfit2(t.x, t.z_scores);
  return t;
}

void write_trend_csv(std::ostream& out, const TrendSeries& trend) {
  out << "year,raw_mean,z,fitted\n";
  for (std::size_t i = 0; i < trend.years.size(); ++i) {
    out << trend.years[i] << ',' << detail::fmt_real(trend.raw_means[i]) << ','
        << detail::fmt_real(trend.z_scores[i]) << ',' << detail::fmt_real(trend.fit.fitted[i])
        << '\n';
  }
}

std::string trend_json(const TrendSeries& trend) {
  nlohmann::ordered_json j;
  j["dimension"] = std::string(to_string(trend.dimension));
  j["degenerate"] = trend.degenerate;
  j["x_centre"] = trend.years.empty() ? 0.0 : static_cast<double>(trend.years.front()) - trend.x.front();
  j["coefficients"] = {trend.fit.c0, trend.fit.c1, trend.fit.c2};
  j["years"] = trend.years;
  j["raw_means"] = trend.raw_means;
  j["z_scores"] = trend.z_scores;
  j["fitted"] = trend.fit.fitted;
  return j.dump(2) + "\n";
}

}  // namespace moodscope
