#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moodscope/corpus.hpp"
#include "moodscope/lexicon.hpp"

namespace moodscope {

/// Intensity shapes over the year index t = year - first_year.
namespace profile {
struct Constant {
  double value = 0.0;
};
struct Linear {
  double intercept = 0.0;
  double slope = 0.0;
};
/// c0 + c1 t + c2 t^2
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
/// `before` for t < at, `after` from t = at on.
struct Step {
  double before = 0.0;
  double after = 0.0;
  int at = 0;
};
}  // namespace profile

using TrendProfile = std::variant<profile::Constant, profile::Linear, profile::Quadratic, profile::Step>;

double evaluate(const TrendProfile& p, int year_index);

/// Parses "constant 2", "linear 1 0.5", "quadratic 1 0 0.1", "step 1 6 5".
TrendProfile parse_profile(std::string_view text);

struct TrendSpec {
  MoodScale dimension = MoodScale::tension;
  TrendProfile profile = profile::Constant{};
  double noise_sd = 0.0;
};

struct SynthConfig {
  int first_year = 2006;
  int last_year = 2015;
  int origin_year = 2006;
  std::size_t emails_per_year = 50;
  std::size_t filler_words = 20;
  std::uint64_t seed = 1;
  std::vector<TrendSpec> specs;  // scales not listed have intensity 0
};

/// Reads the flat `key = value` spec format:
///
///     first_year = 2006
///     last_year = 2015
///     emails_per_year = 50
///     noise_sd = 0.5              # default for every profile
///     profile.depression = step 1 6 5
///     noise.depression = 0.25     # per-scale override
///
/// Throws ConfigError on unknown keys, bad values or an empty year range.
SynthConfig parse_synth_spec(std::string_view text);
SynthConfig load_synth_spec_file(const std::string& path);

/// Neutral words used to pad bodies; none of them stems to a lexicon word.
std::vector<std::string> filler_vocabulary(const CompiledMatcher& matcher);

/// Deterministic corpus: for each year and email, intensity =
/// max(0, profile(t) + N(0, noise_sd)) rounded to a term count per scale.
/// Terms are lexicon phrases of that scale separated by filler words.
/// Every (year, email) pair draws from its own sub-seed of `config.seed`.
std::vector<EmailRecord> generate_corpus(const SynthConfig& config, const MoodLexicon& lexicon);

}  // namespace moodscope
