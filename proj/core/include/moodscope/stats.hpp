#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moodscope/lexicon.hpp"
#include "moodscope/scoring.hpp"

namespace moodscope {

// --- Kolmogorov-Smirnov ----------------------------------------------------

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t m = 0;

  friend bool operator==(const KsResult&, const KsResult&) = default;
};

/// How ks_two_sample turns D into a p-value.
enum class KsMethod {
  asymptotic,  // Kolmogorov limit with the sqrt(n_e) + 0.12 + 0.11/sqrt(n_e) correction
  exact,       // permutation distribution of D given the pooled sample (ties handled)
  automatic,   // exact when n*m <= kExactKsLimit, asymptotic otherwise
};

inline constexpr std::size_t kExactKsLimit = 10000;

std::optional<KsMethod> parse_ks_method(std::string_view name);
std::string_view to_string(KsMethod method);

/// sup |F_a - F_b| over all sample points, handling ties. Returned as
/// |i*m - j*n| / (n*m) so the value is the correctly rounded rational.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_survival(double lambda);

/// Asymptotic two-sided p-value for statistic d with sample sizes n, m.
double ks_asymptotic_p(double d, std::size_t n, std::size_t m);

/// P(D >= d) under random relabelling of the pooled sample a ++ b.
double ks_exact_p(std::span<const double> a, std::span<const double> b, double d);

/// Two-sided two-sample KS test. Throws PreconditionError on an empty sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       KsMethod method = KsMethod::asymptotic);

// --- pairwise year comparison ----------------------------------------------

enum class Significance { none, marginal, significant };

std::string_view to_string(Significance s);

struct SignificanceThresholds {
  double significant = 0.05;
  double marginal = 0.1;

  [[nodiscard]] Significance classify(double p) const {
    if (p < significant) return Significance::significant;
    if (p < marginal) return Significance::marginal;
    return Significance::none;
  }
};

using YearPair = std::pair<int, int>;

class SignificanceMatrix {
 public:
  MoodScale dimension = MoodScale::tension;
  std::vector<int> years;          // non-empty bucket years, ascending
  std::vector<int> skipped_years;  // buckets with no vectors

  /// Symmetric lookup; throws std::out_of_range for untested pairs.
  [[nodiscard]] const KsResult& cell(int year_a, int year_b) const;
  [[nodiscard]] Significance flag(int year_a, int year_b) const;

  /// Pairs with year_a < year_b, in ascending order.
  [[nodiscard]] const std::map<YearPair, KsResult>& cells() const { return cells_; }
  [[nodiscard]] const std::map<YearPair, Significance>& flags() const { return flags_; }

  void set(int year_a, int year_b, const KsResult& result, Significance flag);

 private:
  static YearPair key(int a, int b) { return a < b ? YearPair{a, b} : YearPair{b, a}; }
  std::map<YearPair, KsResult> cells_;
  std::map<YearPair, Significance> flags_;
};

struct PairwiseOptions {
  SignificanceThresholds thresholds;
  KsMethod method = KsMethod::asymptotic;
  unsigned threads = 1;
};

/// KS test of one dimension between every pair of non-empty year buckets.
/// Throws PreconditionError when fewer than two buckets are non-empty.
SignificanceMatrix pairwise_ks(const BucketMap& buckets, MoodScale dimension,
                               const PairwiseOptions& options = {});

/// year_a,year_b,dimension,d,p,flag
void write_significance_csv(std::ostream& out, const SignificanceMatrix& matrix);

// --- trend machinery -------------------------------------------------------

struct ZScores {
  std::vector<double> values;
  bool degenerate = false;  // input had zero spread; values are all 0
};

/// (v - mean) / sd with the n-1 sample standard deviation.
/// Throws PreconditionError for fewer than two values.
ZScores zscore_series(std::span<const double> values);

struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> fitted;

  [[nodiscard]] double operator()(double x) const { return c0 + x * (c1 + x * c2); }
};

/// Least-squares y ~ c0 + c1 x + c2 x^2. Solved on mean-centered x; the
/// coefficients are returned for the original x. Needs >= 3 distinct x.
QuadraticFit polyfit2(std::span<const double> xs, std::span<const double> ys);

struct TrendSeries {
  MoodScale dimension = MoodScale::tension;
  std::vector<int> years;
  std::vector<double> raw_means;
  std::vector<double> z_scores;
  bool degenerate = false;
  /// Centered year index: x_i = year_i - mean(years).
  std::vector<double> x;
  QuadraticFit fit;  // over (x, z_scores)
};

/// Yearly means of one dimension, z-scored and fitted with a quadratic.
/// Needs >= 3 non-empty buckets.
TrendSeries build_trend(const BucketMap& buckets, MoodScale dimension);

/// year,raw_mean,z,fitted
void write_trend_csv(std::ostream& out, const TrendSeries& trend);
std::string trend_json(const TrendSeries& trend);

}  // namespace moodscope
