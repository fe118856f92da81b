#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "moodscope/lexicon.hpp"
#include "moodscope/scoring.hpp"
#include "moodscope/stats.hpp"
#include "moodscope/synth.hpp"
#include "moodscope/textproc.hpp"

namespace {

const std::vector<std::string>& sample_words() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> w{"generalizations", "oscillators",  "hopefulness", "relational",
                               "conditional",     "discouraged",  "running",     "happily",
                               "motivation",      "effectiveness", "sky",        "agreed"};
    return w;
  }();
  return words;
}

std::vector<moodscope::EmailRecord> synth_records(std::size_t per_year) {
  moodscope::SynthConfig config;
  config.emails_per_year = per_year;
  config.filler_words = 150;
  for (auto scale : moodscope::kAllScales) {
    config.specs.push_back({scale, moodscope::profile::Constant{3.0}, 1.0});
  }
  return moodscope::generate_corpus(config, moodscope::default_lexicon());
}

std::vector<double> normal_sample(std::size_t n, double shift, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(shift, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

void BM_PorterStem(benchmark::State& state) {
  const auto& words = sample_words();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(moodscope::porter_stem(words[i++ % words.size()]));
  }
}
BENCHMARK(BM_PorterStem);

void BM_CompileDefaultLexicon(benchmark::State& state) {
  const auto& lexicon = moodscope::default_lexicon();
  for (auto _ : state) benchmark::DoNotOptimize(moodscope::compile(lexicon));
}
BENCHMARK(BM_CompileDefaultLexicon);

void BM_ScoreCorpus(benchmark::State& state) {
  const auto records = synth_records(100);
  const auto matcher = moodscope::compile(moodscope::default_lexicon());
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moodscope::score_corpus(records, matcher, threads));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records.size()));
}
BENCHMARK(BM_ScoreCorpus)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_KsAsymptotic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = normal_sample(n, 0.0, 1);
  const auto b = normal_sample(n, 0.3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(moodscope::ks_two_sample(a, b));
}
BENCHMARK(BM_KsAsymptotic)->Arg(50)->Arg(1000)->Arg(10000);

void BM_KsExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = normal_sample(n, 0.0, 3);
  const auto b = normal_sample(n, 0.3, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(moodscope::ks_two_sample(a, b, moodscope::KsMethod::exact));
  }
}
BENCHMARK(BM_KsExact)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
