#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "moodscope/error.hpp"
#include "moodscope/lexicon.hpp"
#include "moodscope/pipeline.hpp"
#include "moodscope/textproc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Flag values are kept as strings and applied on top of the config file, so a
// flag always wins over the same key in --config.
struct Overrides {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& key, const std::string& help,
           const std::string& alias = {}) {
    std::string names = "--" + key;
    if (!alias.empty()) names += ",--" + alias;
    app->add_option(names, values[key], help);
  }

  void apply(CLI::App* app, moodscope::PipelineConfig& config) const {
    for (const auto& [key, value] : values) {
      if (app->count("--" + key) > 0) moodscope::apply_setting(config, key, value);
    }
  }
};

void add_common(CLI::App* app, Overrides& o) {
  o.add(app, "lexicon_path", "Lexicon file (default: bundled lexicon)", "lexicon");
  o.add(app, "format", "Corpus format: delimited, jsonl or auto");
  o.add(app, "output_dir", "Directory for output files", "out");
  o.add(app, "threads", "Worker threads");
}

void add_corpus_filters(CLI::App* app, Overrides& o) {
  o.add(app, "corpus_path", "Corpus file", "corpus");
  o.add(app, "origin_year", "Keep only emails composed in this year ('any' for all)");
  o.add(app, "year_range", "Keep delivery years FIRST..LAST");
  o.add(app, "filter_english", "Drop non-English emails (true/false)");
  o.add(app, "english_threshold", "Minimum function-word ratio");
}

void print_lexicon_summary(const moodscope::MoodLexicon& lexicon) {
  const moodscope::CompiledMatcher matcher = moodscope::compile(lexicon);
  std::map<moodscope::MoodScale, std::size_t> per_scale;
  std::size_t phrases = 0;
  for (const auto& e : lexicon.entries) {
    ++per_scale[e.scale];
    phrases += e.extended.size();
  }
  fmt::print("version: {}\n", lexicon.version.empty() ? "(none)" : lexicon.version);
  fmt::print("main terms: {}, extended phrases: {}, stem sequences: {}\n", lexicon.entries.size(), phrases,
             matcher.sequence_count());
  for (auto scale : moodscope::kAllScales) {
    fmt::print("  {:<11} {}\n", moodscope::to_string(scale), per_scale[scale]);
  }
  for (const auto& w : matcher.warnings()) {
    fmt::print("warning: {} '{}' of '{}' already belongs to '{}'\n", w.code, w.phrase, w.term,
               w.colliding_term);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moodscope: mood trends in future-dated email"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "moodscope 1.0.0");

  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);

  Overrides stats_o;
  auto* stats = app.add_subcommand("stats", "Corpus histogram, lag and word frequency");
  add_common(stats, stats_o);
  add_corpus_filters(stats, stats_o);
  stats_o.add(stats, "stopwords_path", "Stopword list (default: bundled)", "stopwords");
  stats_o.add(stats, "top_n", "Number of words in wordfreq.csv");

  Overrides score_o;
  auto* score = app.add_subcommand("score", "Score emails and group them by delivery year");
  add_common(score, score_o);
  add_corpus_filters(score, score_o);

  Overrides analyze_o;
  auto* analyze = app.add_subcommand("analyze", "Pairwise KS tests and trend fits per dimension");
  add_common(analyze, analyze_o);
  add_corpus_filters(analyze, analyze_o);
  analyze_o.add(analyze, "buckets_path", "buckets.json from 'score' instead of a corpus", "buckets");
  analyze_o.add(analyze, "alpha_significant", "Threshold for '**'");
  analyze_o.add(analyze, "alpha_marginal", "Threshold for '*'");
  analyze_o.add(analyze, "dimensions", "Comma-separated scales or 'all'");
  analyze_o.add(analyze, "ks_method", "asymptotic, exact or auto");
  analyze_o.add(analyze, "emit_svg", "Write trend_<dim>.svg (true/false)");
  bool svg_flag = false;
  analyze->add_flag("--svg", svg_flag, "Same as --emit_svg true");

  Overrides synth_o;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus from a trend spec");
  std::string spec_path;
  std::string synth_out;
  std::optional<std::uint64_t> seed;
  synth->add_option("--spec", spec_path, "Trend spec file")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "Corpus file to write")->required();
  synth->add_option("--seed", seed, "Override the spec's seed");
  synth_o.add(synth, "lexicon_path", "Lexicon file (default: bundled lexicon)", "lexicon");
  synth_o.add(synth, "format", "Output format: delimited or jsonl");

  auto* stem = app.add_subcommand("stem", "Print the stem of each word");
  std::vector<std::string> words;
  stem->add_option("words", words, "Words to stem")->required();

  Overrides lexicon_o;
  auto* lexicon = app.add_subcommand("lexicon", "Validate a lexicon and print a summary");
  lexicon_o.add(lexicon, "lexicon_path", "Lexicon file (default: bundled lexicon)", "lexicon");
  bool dump = false;
  lexicon->add_flag("--dump", dump, "Print the bundled lexicon text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    moodscope::PipelineConfig config;
    if (!config_path.empty()) config = moodscope::load_pipeline_config_file(config_path);

    if (*stem) {
      for (const auto& w : words) fmt::print("{}\t{}\n", w, moodscope::stem_phrase(w));
      return kExitOk;
    }
    if (*lexicon) {
      lexicon_o.apply(lexicon, config);
      if (dump) {
        std::cout << moodscope::default_lexicon_text();
        return kExitOk;
      }
      print_lexicon_summary(moodscope::load_configured_lexicon(config));
      return kExitOk;
    }
    if (*stats) {
      stats_o.apply(stats, config);
      moodscope::run_stats(config, std::cerr);
    } else if (*score) {
      score_o.apply(score, config);
      moodscope::run_score(config, std::cerr);
    } else if (*analyze) {
      analyze_o.apply(analyze, config);
      if (svg_flag) config.emit_svg = true;
      moodscope::run_analyze(config, std::cerr);
    } else if (*synth) {
      synth_o.apply(synth, config);
      moodscope::run_synth(spec_path, seed, synth_out, config, std::cerr);
    }
    return kExitOk;
  } catch (const moodscope::ConfigError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const moodscope::ValidationError& e) {
    fmt::print(std::cerr, "error: invalid input\n");
    for (const auto& p : e.problems()) fmt::print(std::cerr, "  {}\n", p);
    return kExitData;
  } catch (const moodscope::Error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitData;
  }
}
