#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "moodscope/corpus.hpp"
#include "moodscope/lexicon.hpp"
#include "moodscope/scoring.hpp"
#include "moodscope/stats.hpp"

namespace moodscope {

/// Settings shared by the stats, score and analyze stages.
///
/// Read from flat `key = value` lines; the key names are the field names
/// below (year_range is written "2006..2036").
struct PipelineConfig {
  std::string corpus_path;
  CorpusFormat format = CorpusFormat::automatic;
  std::string lexicon_path;    // empty: bundled lexicon
  std::string stopwords_path;  // empty: bundled stopwords
  std::string buckets_path;    // analyze: read buckets instead of scoring
  std::optional<int> origin_year;
  std::optional<int> year_min;
  std::optional<int> year_max;
  bool filter_english = true;
  double english_threshold = kDefaultEnglishThreshold;
  double alpha_significant = 0.05;
  double alpha_marginal = 0.1;
  std::size_t top_n = 20;
  std::string output_dir = ".";
  bool emit_svg = false;
  std::vector<MoodScale> dimensions{kAllScales.begin(), kAllScales.end()};
  KsMethod ks_method = KsMethod::asymptotic;
  unsigned threads = 1;

  /// Throws ConfigError when an invariant fails.
  void validate() const;
};

/// Keys accepted by apply_setting, in documentation order.
const std::vector<std::string_view>& pipeline_config_keys();

/// Sets one key from its string form. Throws ConfigError.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

PipelineConfig parse_pipeline_config(std::string_view text);
PipelineConfig load_pipeline_config_file(const std::string& path);

/// Records that survived parsing and filtering, plus what was dropped.
struct LoadedCorpus {
  std::vector<EmailRecord> records;
  std::vector<RejectionReport> rejections;
  std::size_t rejected_language = 0;
  std::size_t rejected_encoding = 0;
  std::size_t outside_years = 0;  // filtered by origin_year / year_range
  std::vector<std::string> flagged_short;
};

LoadedCorpus load_corpus(const PipelineConfig& config);

/// Lexicon from config.lexicon_path, or the bundled one.
MoodLexicon load_configured_lexicon(const PipelineConfig& config);

struct StatsOutcome {
  CorpusStats stats;
  std::vector<WordCount> top_words;
};

/// Writes histogram.csv, meanlag.csv, wordfreq.csv, corpus_stats.json and
/// rejections.csv into output_dir.
StatsOutcome run_stats(const PipelineConfig& config, std::ostream& log);

struct ScoreOutcome {
  std::vector<ScoredEmail> scored;
  BucketMap buckets;
  std::size_t zero_match = 0;
  std::size_t rejected = 0;
};

/// Full scoring chain; writes scores.csv, buckets.json, rejections.csv and
/// lexicon_warnings.csv.
ScoreOutcome run_score(const PipelineConfig& config, std::ostream& log);

struct AnalyzeOutcome {
  std::vector<SignificanceMatrix> matrices;
  std::vector<TrendSeries> trends;
  std::vector<std::string> written;  // file names, in write order
};

/// Pairwise KS and trends per dimension; writes ks_<dim>.csv,
/// trend_<dim>.csv, trend_<dim>.json and (emit_svg) trend_<dim>.svg.
/// Buckets come from buckets_path when set, otherwise from scoring inline.
AnalyzeOutcome run_analyze(const PipelineConfig& config, std::ostream& log);

/// Analysis over buckets already in memory.
AnalyzeOutcome analyze_buckets(const BucketMap& buckets, const PipelineConfig& config,
                               std::ostream& log);

struct SynthOutcome {
  std::size_t records = 0;
  std::size_t years = 0;
};

/// Generates a corpus from a spec file; `seed` overrides the spec's seed.
SynthOutcome run_synth(const std::string& spec_path, std::optional<std::uint64_t> seed,
                       const std::string& out_path, const PipelineConfig& config,
                       std::ostream& log);

}  // namespace moodscope
