#include "moodscope/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "key_value.hpp"
#include "moodscope/error.hpp"
#include "moodscope/svg.hpp"
#include "moodscope/synth.hpp"
#include "text_util.hpp"

namespace moodscope {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, value));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = detail::to_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, value));
}

std::vector<MoodScale> parse_dimensions(std::string_view value) {
  std::vector<MoodScale> out;
  if (detail::trim(value) == "all") return {kAllScales.begin(), kAllScales.end()};
  for (std::string_view part : detail::split(value, ',')) {
    part = detail::trim(part);
    if (part.empty()) continue;
    const auto scale = parse_scale(part);
    if (!scale) throw ConfigError(fmt::format("dimensions: unknown scale '{}'", part));
    if (std::find(out.begin(), out.end(), *scale) == out.end()) out.push_back(*scale);
  }
  if (out.empty()) throw ConfigError("dimensions: no scale given");
  return out;
}

std::filesystem::path output_path(const PipelineConfig& config, std::string_view name) {
  return std::filesystem::path(config.output_dir) / std::string(name);
}

void ensure_output_dir(const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", config.output_dir, ec.message()));
  }
}

template <typename Writer>
void write_output(const PipelineConfig& config, std::string_view name, Writer&& writer) {
  const auto path = output_path(config, name);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  writer(out);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

void write_lexicon_warnings_csv(std::ostream& out, const CompiledMatcher& matcher) {
  out << "code,term,colliding_term,phrase\n";
  for (const auto& w : matcher.warnings()) {
    out << w.code << ',' << w.term << ',' << w.colliding_term << ',' << w.phrase << '\n';
  }
}

}  // namespace

void PipelineConfig::validate() const {
  std::vector<std::string> problems;
  if (!(alpha_significant > 0.0 && alpha_significant < alpha_marginal && alpha_marginal < 1.0)) {
    problems.push_back(fmt::format("need 0 < alpha_significant ({}) < alpha_marginal ({}) < 1",
                                   alpha_significant, alpha_marginal));
  }
  if (year_min && year_max && *year_min > *year_max) {
    problems.push_back(fmt::format("year_range: {} is after {}", *year_min, *year_max));
  }
  if (!(english_threshold >= 0.0 && english_threshold <= 1.0)) {
    problems.push_back(fmt::format("english_threshold {} is outside [0, 1]", english_threshold));
  }
  if (dimensions.empty()) problems.push_back("dimensions: no scale selected");
  if (threads == 0) problems.push_back("threads must be at least 1");
  if (!problems.empty()) {
    std::string joined;
    for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
    throw ConfigError(joined);
  }
}

const std::vector<std::string_view>& pipeline_config_keys() {
  static const std::vector<std::string_view> keys{
      "corpus_path",       "format",         "lexicon_path",   "stopwords_path",
      "buckets_path",      "origin_year",    "year_range",     "filter_english",
      "english_threshold", "alpha_significant", "alpha_marginal", "top_n",
      "output_dir",        "emit_svg",       "dimensions",     "ks_method",
      "threads",
  };
  return keys;
}

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = detail::trim(raw);
  if (key == "corpus_path") {
    c.corpus_path = value;
  } else if (key == "format") {
    const auto f = parse_corpus_format(value);
    if (!f) throw ConfigError(fmt::format("format: unknown corpus format '{}'", value));
    c.format = *f;
  } else if (key == "lexicon_path") {
    c.lexicon_path = value;
  } else if (key == "stopwords_path") {
    c.stopwords_path = value;
  } else if (key == "buckets_path") {
    c.buckets_path = value;
  } else if (key == "origin_year") {
    if (value.empty() || value == "any") {
      c.origin_year.reset();
    } else {
      c.origin_year = parse_number<int>(key, value);
    }
  } else if (key == "year_range") {
    if (value.empty() || value == "any") {
      c.year_min.reset();
      c.year_max.reset();
      return;
    }
    const auto dots = value.find("..");
    if (dots == std::string_view::npos) {
      throw ConfigError(fmt::format("year_range: expected 'FIRST..LAST', got '{}'", value));
    }
    c.year_min = parse_number<int>(key, detail::trim(value.substr(0, dots)));
    c.year_max = parse_number<int>(key, detail::trim(value.substr(dots + 2)));
  } else if (key == "filter_english") {
    c.filter_english = parse_bool(key, value);
  } else if (key == "english_threshold") {
    c.english_threshold = parse_number<double>(key, value);
  } else if (key == "alpha_significant") {
    c.alpha_significant = parse_number<double>(key, value);
  } else if (key == "alpha_marginal") {
    c.alpha_marginal = parse_number<double>(key, value);
  } else if (key == "top_n") {
    c.top_n = parse_number<std::size_t>(key, value);
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "emit_svg") {
    c.emit_svg = parse_bool(key, value);
  } else if (key == "dimensions") {
    c.dimensions = parse_dimensions(value);
  } else if (key == "ks_method") {
    const auto m = parse_ks_method(value);
    if (!m) throw ConfigError(fmt::format("ks_method: unknown method '{}'", value));
    c.ks_method = *m;
  } else if (key == "threads") {
    c.threads = parse_number<unsigned>(key, value);
  } else {
    throw ConfigError(fmt::format("unknown configuration key '{}'", key));
  }
}

PipelineConfig parse_pipeline_config(std::string_view text) {
  PipelineConfig config;
  for (const auto& kv : detail::parse_key_values(text)) {
    try {
      apply_setting(config, kv.key, kv.value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("line {}: {}", kv.line, e.what()));
    }
  }
  return config;
}

PipelineConfig load_pipeline_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pipeline_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

MoodLexicon load_configured_lexicon(const PipelineConfig& config) {
  if (config.lexicon_path.empty()) return default_lexicon();
  return load_lexicon_file(config.lexicon_path);
}

LoadedCorpus load_corpus(const PipelineConfig& config) {
  if (config.corpus_path.empty()) throw ConfigError("corpus_path is not set");
  ParseResult parsed = parse_corpus_file(config.corpus_path, config.format);

  LoadedCorpus out;
  out.rejections = std::move(parsed.rejections);
  for (const auto& r : out.rejections) {
    if (r.code == reason::unknown_encoding) ++out.rejected_encoding;
  }

  std::vector<EmailRecord> in_range;
  in_range.reserve(parsed.records.size());
  for (auto& r : parsed.records) {
    const bool origin_ok = !config.origin_year || r.compose_year() == *config.origin_year;
    const bool min_ok = !config.year_min || r.delivery_year() >= *config.year_min;
    const bool max_ok = !config.year_max || r.delivery_year() <= *config.year_max;
    if (origin_ok && min_ok && max_ok) {
      in_range.push_back(std::move(r));
    } else {
      ++out.outside_years;
    }
  }

  if (config.filter_english) {
    LanguageFilterResult filtered = filter_english(std::move(in_range), config.english_threshold);
    out.rejected_language = filtered.rejected.size();
    out.records = std::move(filtered.kept);
    out.flagged_short = std::move(filtered.flagged_short);
  } else {
    out.records = std::move(in_range);
  }
  return out;
}

StatsOutcome run_stats(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  LoadedCorpus corpus = load_corpus(config);
  const StopwordSet stopwords =
      config.stopwords_path.empty() ? default_stopwords() : load_stopwords_file(config.stopwords_path);

  StatsOutcome outcome;
  outcome.stats = delivery_histogram(corpus.records);
  outcome.stats.rejected_language = corpus.rejected_language;
  outcome.stats.rejected_encoding = corpus.rejected_encoding;
  outcome.top_words = word_frequency(corpus.records, config.top_n, stopwords);

  if (corpus.records.empty()) log << "warning: no records left after parsing and filtering\n";

  ensure_output_dir(config);
  write_output(config, "histogram.csv", [&](std::ostream& o) { write_histogram_csv(o, outcome.stats); });
  write_output(config, "meanlag.csv", [&](std::ostream& o) { write_mean_lag_csv(o, outcome.stats); });
  write_output(config, "wordfreq.csv", [&](std::ostream& o) { write_wordfreq_csv(o, outcome.top_words); });
  write_output(config, "corpus_stats.json",
               [&](std::ostream& o) { o << corpus_stats_json(outcome.stats) << '\n'; });
  write_output(config, "rejections.csv",
               [&](std::ostream& o) { write_rejections_csv(o, corpus.rejections); });

  fmt::print(log, "records: {} kept, {} rejected lines, {} non-English, {} outside year filters\n",
             outcome.stats.total_records, corpus.rejections.size(), corpus.rejected_language,
             corpus.outside_years);
  return outcome;
}

ScoreOutcome run_score(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  const CompiledMatcher matcher = compile(load_configured_lexicon(config));
  for (const auto& w : matcher.warnings()) {
    fmt::print(log, "warning: {} '{}' of '{}' already belongs to '{}'\n", w.code, w.phrase, w.term,
               w.colliding_term);
  }
  LoadedCorpus corpus = load_corpus(config);

  ScoreOutcome outcome;
  outcome.scored = score_records(corpus.records, matcher, config.threads);
  outcome.buckets = bucket_by_year(outcome.scored);
  outcome.rejected = corpus.rejections.size() + corpus.rejected_language;
  for (const auto& [year, bucket] : outcome.buckets) outcome.zero_match += bucket.zero_match_count;

  ensure_output_dir(config);
  write_output(config, "scores.csv", [&](std::ostream& o) { write_scores_csv(o, outcome.scored); });
  write_output(config, "buckets.json", [&](std::ostream& o) { o << buckets_json(outcome.buckets) << '\n'; });
  write_output(config, "rejections.csv",
               [&](std::ostream& o) { write_rejections_csv(o, corpus.rejections); });
  write_output(config, "lexicon_warnings.csv",
               [&](std::ostream& o) { write_lexicon_warnings_csv(o, matcher); });

  fmt::print(log, "scored {} emails into {} year buckets; {} zero-match, {} rejected\n",
             outcome.scored.size(), outcome.buckets.size(), outcome.zero_match, outcome.rejected);
  return outcome;
}

AnalyzeOutcome analyze_buckets(const BucketMap& buckets, const PipelineConfig& config,
                               std::ostream& log) {
  config.validate();
  std::size_t non_empty = 0;
  for (const auto& [year, bucket] : buckets) non_empty += bucket.size() > 0 ? 1 : 0;
  if (non_empty < 2) {
    throw PreconditionError(
        fmt::format("need at least two non-empty year buckets to compare, found {}", non_empty));
  }

  PairwiseOptions options;
  options.thresholds = {config.alpha_significant, config.alpha_marginal};
  options.method = config.ks_method;
  options.threads = config.threads;

  ensure_output_dir(config);
  AnalyzeOutcome outcome;
  for (MoodScale dim : config.dimensions) {
    const std::string name{to_string(dim)};
    SignificanceMatrix matrix = pairwise_ks(buckets, dim, options);
    for (int y : matrix.skipped_years) fmt::print(log, "warning: {}: year {} has no vectors\n", name, y);

    const std::string ks_file = fmt::format("ks_{}.csv", name);
    write_output(config, ks_file, [&](std::ostream& o) { write_significance_csv(o, matrix); });
    outcome.written.push_back(ks_file);

    if (non_empty >= 3) {
      TrendSeries trend = build_trend(buckets, dim);
      if (trend.degenerate) fmt::print(log, "warning: {}: yearly means have no spread\n", name);
      const std::string csv = fmt::format("trend_{}.csv", name);
      const std::string json = fmt::format("trend_{}.json", name);
      write_output(config, csv, [&](std::ostream& o) { write_trend_csv(o, trend); });
      write_output(config, json, [&](std::ostream& o) { o << trend_json(trend) << '\n'; });
      outcome.written.push_back(csv);
      outcome.written.push_back(json);
      if (config.emit_svg) {
        const std::string svg = fmt::format("trend_{}.svg", name);
        write_output(config, svg, [&](std::ostream& o) { o << render_trend_svg(trend, matrix); });
        outcome.written.push_back(svg);
      }
      outcome.trends.push_back(std::move(trend));
    } else {
      fmt::print(log, "warning: {}: trend needs three non-empty years, skipped\n", name);
    }
    outcome.matrices.push_back(std::move(matrix));
  }
  fmt::print(log, "analyzed {} dimensions over {} years\n", config.dimensions.size(), non_empty);
  return outcome;
}

AnalyzeOutcome run_analyze(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  if (!config.buckets_path.empty()) {
    return analyze_buckets(load_buckets_file(config.buckets_path), config, log);
  }
  const CompiledMatcher matcher = compile(load_configured_lexicon(config));
  LoadedCorpus corpus = load_corpus(config);
  const BucketMap buckets = score_corpus(corpus.records, matcher, config.threads);
  return analyze_buckets(buckets, config, log);
}

SynthOutcome run_synth(const std::string& spec_path, std::optional<std::uint64_t> seed,
                       const std::string& out_path, const PipelineConfig& config,
                       std::ostream& log) {
  SynthConfig spec = load_synth_spec_file(spec_path);
  if (seed) spec.seed = *seed;
  const std::vector<EmailRecord> records = generate_corpus(spec, load_configured_lexicon(config));

  const CorpusFormat format =
      config.format == CorpusFormat::automatic ? CorpusFormat::delimited : config.format;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", out_path));
  write_corpus(out, records, format);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", out_path));

  SynthOutcome outcome{records.size(), static_cast<std::size_t>(spec.last_year - spec.first_year + 1)};
  fmt::print(log, "wrote {} synthetic emails over {} years to {}\n", outcome.records, outcome.years,
             out_path);
  return outcome;
}

}  // namespace moodscope
