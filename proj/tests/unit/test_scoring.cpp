#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "moodscope/scoring.hpp"
#include "moodscope/textproc.hpp"

using namespace moodscope;

namespace {

const CompiledMatcher& paper_matcher() {
  static const CompiledMatcher m = compile(parse_lexicon(
      "tense | tension | on edge\n"
      "discouraged | depression | beat down, caved in, crestfallen, daunted, deterred, dispirited, downbeat, "
      "downcast, glum, lost momentum, pessimistic, put off\n"
      "sad | depression | blue\n"
      "angry | anger | angrily, mad\n"
      "lively | vigor | energetic\n"
      "tired | fatigue | worn out\n"
      "confused | confusion | muddled\n"));
  return m;
}

// Only single-word phrases, so matches never span token boundaries.
const CompiledMatcher& single_word_matcher() {
  static const CompiledMatcher m = compile(parse_lexicon(
      "tense | tension | nervous\nsad | depression | gloomy\nangry | anger | mad\n"
      "lively | vigor | energetic\ntired | fatigue | sleepy\nconfused | confusion | muddled\n"));
  return m;
}

std::map<std::string, std::uint32_t> counts(std::string_view text, const CompiledMatcher& m = paper_matcher()) {
  return score_text(text, m).named(m);
}


}  // namespace

TEST(ScoreTokens, DauntedCountsForDiscouraged) {
  using Counts = std::map<std::string, std::uint32_t>;
  EXPECT_EQ(counts("I felt daunted today"), (Counts{{"discouraged", 1}}));
  const MoodVector v = to_mood_vector(score_text("I felt daunted today", paper_matcher()), paper_matcher());
  EXPECT_EQ(v[MoodScale::depression], 1.0);
  EXPECT_EQ(v.sum(), 1.0);
}

TEST(ScoreTokens, RepeatedTermsAccumulate) {
  using Counts = std::map<std::string, std::uint32_t>;
  // "angrily" is listed explicitly because its stem differs from "angry".
  EXPECT_EQ(counts("angrily angrily"), (Counts{{"angry", 2}}));
  EXPECT_EQ(counts("angry, Angry!"), (Counts{{"angry", 2}}));
}

TEST(ScoreTokens, LongestMatchConsumesTokens) {
  using Counts = std::map<std::string, std::uint32_t>;
  EXPECT_EQ(counts("he lost momentum yesterday"), (Counts{{"discouraged", 1}}));
  // A lexicon where "lost" alone is also a term: the phrase still wins.
  const CompiledMatcher m = compile(parse_lexicon(
      "tense | tension | lost\ndiscouraged | depression | lost momentum\nangry | anger |\n"
      "lively | vigor |\ntired | fatigue |\nconfused | confusion |\n"));
  EXPECT_EQ(counts("he lost momentum, then lost", m), (Counts{{"discouraged", 1}, {"tense", 1}}));
}

TEST(ScoreTokens, EmptyInput) {
  const auto s = score_tokens({}, paper_matcher());
  EXPECT_EQ(s.total(), 0u);
  EXPECT_EQ(s.counts.size(), paper_matcher().term_count());
}

TEST(ScoreTokens, InflectionsMatchThroughStems) {
  using Counts = std::map<std::string, std::uint32_t>;
  EXPECT_EQ(counts("Tiring; so discouraging. She was deterring us."),
            (Counts{{"discouraged", 2}, {"tired", 1}}));
  // Step 3 strips "-ness" but leaves the "-ed", so this one misses.
  EXPECT_TRUE(counts("tiredness").empty());
}

TEST(ScoreTokens, AdditivityAcrossConcatenation) {
  const auto& m = single_word_matcher();
  std::mt19937 rng(5);
  const std::vector<std::string> vocab{"nervous", "sad", "mad", "sleepy", "table", "the", "muddled", "energetic",
                                       "tense", "chair"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a, b;
    for (int i = 0, n = static_cast<int>(rng() % 15); i < n; ++i) a.push_back(vocab[rng() % vocab.size()]);
    for (int i = 0, n = static_cast<int>(rng() % 15); i < n; ++i) b.push_back(vocab[rng() % vocab.size()]);
    std::vector<std::string> ab(a);
    ab.insert(ab.end(), b.begin(), b.end());
    const auto sa = score_tokens(a, m);
    const auto sb = score_tokens(b, m);
    const auto sab = score_tokens(ab, m);
    for (std::size_t t = 0; t < m.term_count(); ++t) EXPECT_EQ(sab.counts[t], sa.counts[t] + sb.counts[t]);

    std::shuffle(ab.begin(), ab.end(), rng);
    EXPECT_EQ(score_tokens(ab, m).counts, sab.counts);
  }
}

TEST(ScoreTokens, PhraseSpanningBoundaryOnlyAdds) {
  const auto& m = paper_matcher();
  const std::vector<std::string> a{"we", "lost"};
  const std::vector<std::string> b{"momentum", "blue"};
  std::vector<std::string> ab(a);
  ab.insert(ab.end(), b.begin(), b.end());
  const auto sa = score_tokens(a, m);
  const auto sab = score_tokens(ab, m);
  for (std::size_t t = 0; t < m.term_count(); ++t) EXPECT_GE(sab.counts[t], sa.counts[t]);
}

TEST(ToMoodVector, KeyApplication) {
  const auto& m = paper_matcher();
  RawPomsScores s{std::vector<std::uint32_t>(m.term_count(), 0)};
  s.counts[m.term_index("angry")] = 2;
  s.counts[m.term_index("discouraged")] = 1;
  s.counts[m.term_index("sad")] = 4;
  const MoodVector v = to_mood_vector(s, m);
  EXPECT_EQ(v.values(), (std::array<double, 6>{0, 5, 2, 0, 0, 0}));
  EXPECT_FALSE(v.normalized());
  EXPECT_EQ(v.sum(), static_cast<double>(s.total()));
  EXPECT_TRUE(to_mood_vector(RawPomsScores{std::vector<std::uint32_t>(m.term_count(), 0)}, m).is_zero());
}

TEST(Normalize, Examples) {
  const auto v = normalize(MoodVector({3, 4, 0, 0, 0, 0}));
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(v->normalized());
  const std::array<double, 6> want{0.6, 0.8, 0, 0, 0, 0};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(v->values()[i], want[i], 1e-12);

  const auto ones = normalize(MoodVector({1, 1, 1, 1, 1, 1}));
  for (double x : ones->values()) EXPECT_NEAR(x, 1.0 / std::sqrt(6.0), 1e-15);

  EXPECT_FALSE(normalize(MoodVector{}).has_value());
}

TEST(Normalize, UnitNormAndScaleInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> count(0, 40);
  std::uniform_real_distribution<double> scale(1e-3, 1e6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 6> raw{};
    for (auto& x : raw) x = count(rng);
    const MoodVector v(raw);
    const auto n = normalize(v);
    if (v.is_zero()) {
      EXPECT_FALSE(n.has_value());
      continue;
    }
    ASSERT_TRUE(n.has_value());
    EXPECT_NEAR(n->norm(), 1.0, 1e-9);
    const double c = scale(rng);
    std::array<double, 6> scaled{};
    for (std::size_t i = 0; i < 6; ++i) scaled[i] = c * raw[i];
    const auto ns = normalize(MoodVector(scaled));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(ns->values()[i], n->values()[i], 1e-12);
  }
}

namespace {

std::vector<EmailRecord> year_records() {
  using namespace std::chrono;
  auto d = [](int y) { return year_month_day{year{y}, January, day{1}}; };
  return {
      {"a", d(2006), d(2010), "so daunted"},
      {"b", d(2006), d(2010), "nothing here"},
      {"c", d(2006), d(2011), "angry and blue and tired"},
      {"d", d(2006), d(2011), "muddled, energetic"},
      {"e", d(2006), d(2012), "table"},
  };
}

}  // namespace

TEST(ScoreCorpus, BucketsAndZeroMatches) {
  const BucketMap buckets = score_corpus(year_records(), paper_matcher());
  ASSERT_EQ(buckets.size(), 3u);
  EXPECT_EQ(buckets.at(2010).size(), 1u);
  EXPECT_EQ(buckets.at(2010).zero_match_count, 1u);
  EXPECT_EQ(buckets.at(2010).ids, (std::vector<std::string>{"a"}));
  EXPECT_EQ(buckets.at(2011).size(), 2u);
  EXPECT_EQ(buckets.at(2012).size(), 0u);
  EXPECT_EQ(buckets.at(2012).zero_match_count, 1u);
  for (const auto& [y, b] : buckets) {
    EXPECT_EQ(b.year, y);
    for (const auto& v : b.vectors) {
      EXPECT_TRUE(v.normalized());
      EXPECT_NEAR(v.norm(), 1.0, 1e-9);
    }
  }
  EXPECT_TRUE(score_corpus({}, paper_matcher()).empty());
}

TEST(ScoreCorpus, PartitionAndPermutationInvariance) {
  std::mt19937 rng(21);
  const std::vector<std::string> vocab{"daunted", "blue", "mad", "tired", "muddled", "energetic", "on", "edge",
                                       "table", "the", "lost", "momentum"};
  std::vector<EmailRecord> records;
  using namespace std::chrono;
  for (int i = 0; i < 400; ++i) {
    std::string body;
    for (int k = 0, n = static_cast<int>(rng() % 8); k < n; ++k) body += vocab[rng() % vocab.size()] + " ";
    const int y = 2006 + static_cast<int>(rng() % 5);
    records.push_back({"r" + std::to_string(i), year_month_day{year{2006}, January, day{1}},
                       year_month_day{year{y}, March, day{1}}, body});
  }
  const BucketMap a = score_corpus(records, paper_matcher(), 1);
  std::size_t total = 0;
  for (const auto& [y, b] : a) total += b.size() + b.zero_match_count;
  EXPECT_EQ(total, records.size());

  std::shuffle(records.begin(), records.end(), rng);
  const BucketMap b = score_corpus(records, paper_matcher(), 3);
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [y, bucket] : a) {
    EXPECT_EQ(bucket.zero_match_count, b.at(y).zero_match_count);
    for (auto s : kAllScales) {
      auto x = bucket.component(s);
      auto z = b.at(y).component(s);
      std::sort(x.begin(), x.end());
      std::sort(z.begin(), z.end());
      EXPECT_EQ(x, z);
    }
  }
}

TEST(ScoreRecords, ThreadCountDoesNotChangeOutput) {
  auto records = year_records();
  for (int i = 0; i < 50; ++i) records.insert(records.end(), records.begin(), records.begin() + 5);
  std::ostringstream one;
  std::ostringstream many;
  write_scores_csv(one, score_records(records, paper_matcher(), 1));
  write_scores_csv(many, score_records(records, paper_matcher(), 7));
  EXPECT_EQ(one.str(), many.str());
}

TEST(ScoresCsv, AuditRow) {
  std::ostringstream out;
  write_scores_csv(out, score_records(year_records(), paper_matcher()));
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "id,delivery_year,tension,depression,anger,vigor,fatigue,confusion,match_count");
  EXPECT_NE(csv.find("\na,2010,0,1,0,0,0,0,1\n"), std::string::npos);
  EXPECT_NE(csv.find("\nb,2010,0,0,0,0,0,0,0\n"), std::string::npos);
}

TEST(BucketsJson, RoundTripsExactly) {
  std::mt19937 rng(2);
  std::vector<EmailRecord> records;
  using namespace std::chrono;
  const std::vector<std::string> vocab{"daunted", "blue", "mad", "tired", "muddled", "energetic", "nervous"};
  for (int i = 0; i < 100; ++i) {
    std::string body;
    for (int k = 0; k < 6; ++k) body += vocab[rng() % vocab.size()] + " ";
    records.push_back({"r" + std::to_string(i), year_month_day{year{2006}, January, day{1}},
                       year_month_day{year{2006 + i % 4}, May, day{5}}, body});
  }
  const BucketMap buckets = score_corpus(records, paper_matcher());
  const BucketMap back = parse_buckets_json(buckets_json(buckets));
  ASSERT_EQ(back.size(), buckets.size());
  for (const auto& [y, b] : buckets) {
    EXPECT_EQ(back.at(y).ids, b.ids);
    EXPECT_EQ(back.at(y).zero_match_count, b.zero_match_count);
    EXPECT_EQ(back.at(y).vectors, b.vectors);
  }
}
