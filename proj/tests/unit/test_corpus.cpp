#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "moodscope/corpus.hpp"
#include "moodscope/error.hpp"

using namespace moodscope;

namespace {

Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

EmailRecord rec(std::string id, Date compose, Date delivery, std::string body = "hello") {
  return EmailRecord{std::move(id), compose, delivery, std::move(body)};
}

}  // namespace

TEST(Dates, StrictIsoParsing) {
  EXPECT_EQ(parse_date("2006-03-01"), ymd(2006, 3, 1));
  EXPECT_EQ(parse_date("2008-02-29"), ymd(2008, 2, 29));
  for (const char* bad : {"2006-3-01", "2006-02-30", "2007-02-29", "06-03-01", "2006/03/01", "", "2006-03-01x",
                          "2006-13-01"}) {
    EXPECT_FALSE(parse_date(bad).has_value()) << bad;
  }
  EXPECT_EQ(format_date(ymd(2016, 3, 1)), "2016-03-01");
}

TEST(Dates, LagInYears) {
  EXPECT_DOUBLE_EQ(lag_years(ymd(2006, 3, 1), ymd(2016, 3, 1)), 10.0);
  EXPECT_DOUBLE_EQ(lag_years(ymd(2006, 1, 1), ymd(2007, 1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(lag_years(ymd(2006, 1, 1), ymd(2006, 1, 1)), 0.0);
  EXPECT_NEAR(lag_years(ymd(2006, 1, 1), ymd(2006, 7, 2)), 182.0 / 365.0, 1e-12);
  EXPECT_GT(lag_years(ymd(2008, 2, 29), ymd(2009, 3, 1)), 1.0);
}

TEST(ParseCorpus, WellFormedRecord) {
  const auto r = parse_corpus_text("e1\t2006-03-01\t2016-03-01\thello\n", CorpusFormat::delimited);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.rejections.empty());
  EXPECT_EQ(r.records[0].body, "hello");
  EXPECT_DOUBLE_EQ(lag_years(r.records[0].compose_date, r.records[0].delivery_date), 10.0);
}

TEST(ParseCorpus, DeliveryBeforeCompose) {
  const auto r = parse_corpus_text("e1\t2010-01-01\t2009-12-31\thi\n", CorpusFormat::delimited);
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.rejections.size(), 1u);
  EXPECT_EQ(r.rejections[0].code, reason::delivery_precedes_compose);
  EXPECT_EQ(r.rejections[0].message, "delivery precedes compose");
  EXPECT_EQ(r.rejections[0].line, 1u);
  EXPECT_EQ(r.rejections[0].id, "e1");
}

TEST(ParseCorpus, InvalidEncoding) {
  const std::string text = "ok\t2006-01-01\t2007-01-01\tfine\nbad\t2006-01-01\t2007-01-01\tcaf\xE9\n";
  const auto r = parse_corpus_text(text, CorpusFormat::delimited);
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.rejections.size(), 1u);
  EXPECT_EQ(r.rejections[0].code, reason::unknown_encoding);
  EXPECT_EQ(r.rejections[0].message, "unknown character encoding");
  EXPECT_EQ(r.rejections[0].line, 2u);
  EXPECT_EQ(r.rejections[0].id, "bad");
}

TEST(ParseCorpus, MalformedLinesNeverAbort) {
  const std::string text =
      "# comment\n"
      "\n"
      "a\t2006-01-01\t2007-01-01\n"
      "\t2006-01-01\t2007-01-01\tx\n"
      "c\t2006-01-32\t2007-01-01\tx\n"
      "d\t2006-01-01\t2007-01-01\tbad \\q escape\n"
      "e\t2006-01-01\t2007-01-01\tline one\\nline two\\ttab\n";
  const auto r = parse_corpus_text(text, CorpusFormat::delimited);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].body, "line one\nline two\ttab");
  ASSERT_EQ(r.rejections.size(), 4u);
  EXPECT_EQ(r.rejections[0].code, reason::field_count);
  EXPECT_EQ(r.rejections[0].line, 3u);
  EXPECT_EQ(r.rejections[1].code, reason::empty_id);
  EXPECT_EQ(r.rejections[2].code, reason::bad_date);
  EXPECT_EQ(r.rejections[3].code, reason::bad_escape);
}

TEST(ParseCorpus, JsonLines) {
  const std::string text =
      R"({"id":"j1","compose_date":"2006-05-05","delivery_date":"2020-05-05","body":"dear me\nhi"})"
      "\n{not json\n"
      R"({"id":"j3","compose_date":"2006-05-05"})"
      "\n";
  const auto r = parse_corpus_text(text, CorpusFormat::automatic);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].body, "dear me\nhi");
  ASSERT_EQ(r.rejections.size(), 2u);
  EXPECT_EQ(r.rejections[0].code, reason::bad_json);
  EXPECT_EQ(r.rejections[1].code, reason::field_count);
}

TEST(ParseCorpus, Deterministic) {
  const std::string text = "a\t2006-01-01\t2007-01-01\thi\nb\t2006\t2007-01-01\tx\n";
  const auto r1 = parse_corpus_text(text, CorpusFormat::delimited);
  const auto r2 = parse_corpus_text(text, CorpusFormat::delimited);
  EXPECT_EQ(r1.records, r2.records);
  EXPECT_EQ(r1.rejections, r2.rejections);
}

TEST(ParseCorpus, UnreadableFileIsFatal) {
  EXPECT_THROW(parse_corpus_file("/nonexistent/corpus.tsv", CorpusFormat::delimited), IoError);
}

TEST(WriteCorpus, RoundTripsBothFormats) {
  const std::vector<EmailRecord> records{
      rec("a", ymd(2006, 1, 1), ymd(2010, 6, 1), "tab\there\nnew line \\ backslash"),
      rec("b", ymd(2006, 2, 2), ymd(2006, 2, 2), "\xE2\x80\x9Cquoted\xE2\x80\x9D")};
  for (auto format : {CorpusFormat::delimited, CorpusFormat::json_lines}) {
    std::ostringstream out;
    write_corpus(out, records, format);
    const auto r = parse_corpus_text(out.str(), CorpusFormat::automatic);
    EXPECT_TRUE(r.rejections.empty());
    EXPECT_EQ(r.records, records);
  }
}

TEST(EscapeBody, InverseOfUnescape) {
  const std::string s = "a\\b\tc\nd\re";
  EXPECT_EQ(unescape_body(escape_body(s)), s);
  EXPECT_FALSE(unescape_body("trailing\\").has_value());
}

TEST(RejectionsCsv, QuotesFields) {
  std::ostringstream out;
  write_rejections_csv(out, {{3, "x,y", "bad_date", "bad \"date\""}});
  EXPECT_EQ(out.str(), "line,id,reason_code,detail\n3,\"x,y\",bad_date,\"bad \"\"date\"\"\"\n");
}

TEST(FilterEnglish, Examples) {
  const Date d = ymd(2006, 1, 1);
  std::vector<EmailRecord> in{rec("en", d, d, "I hope you will remember the things that happened"),
                              rec("de", d, d, "der die das und aber nicht heute morgen"),
                              rec("empty", d, d, "")};
  const auto r = filter_english(in, 0.15);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].id, "en");
  EXPECT_EQ(r.kept[1].id, "empty");
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].id, "de");
  EXPECT_EQ(r.flagged_short, (std::vector<std::string>{"empty"}));
  EXPECT_EQ(function_word_ratio("der die das und aber nicht heute morgen").function_words, 0u);
}

TEST(FilterEnglish, FunctionWordListIsLarge) { EXPECT_GE(english_function_words().size(), 100u); }

TEST(FilterEnglish, ThresholdIsInclusive) {
  const Date d = ymd(2006, 1, 1);
  // 1 function word out of 5 tokens: ratio 0.2.
  const std::vector<EmailRecord> in{rec("x", d, d, "the apple banana cherry grape")};
  EXPECT_EQ(filter_english(in, 0.2).kept.size(), 1u);
  EXPECT_EQ(filter_english(in, 0.2000001).kept.size(), 0u);
}

TEST(FilterEnglish, PartitionProperty) {
  std::mt19937 rng(3);
  const std::vector<std::string> words{"the", "and", "you", "house", "tree", "und", "der", "blue", "i", "of"};
  const Date d = ymd(2006, 1, 1);
  std::vector<EmailRecord> in;
  for (int i = 0; i < 300; ++i) {
    std::string body;
    const int len = static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) body += words[rng() % words.size()] + " ";
    in.push_back(rec("r" + std::to_string(i), d, d, body));
  }
  const auto r = filter_english(in, 0.3);
  EXPECT_EQ(r.kept.size() + r.rejected.size(), in.size());
  std::vector<std::string> ids;
  for (const auto& k : r.kept) ids.push_back(k.id);
  for (const auto& k : r.rejected) ids.push_back(k.id);
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
  std::vector<std::string> want;
  for (const auto& k : in) want.push_back(k.id);
  std::sort(want.begin(), want.end());
  EXPECT_EQ(ids, want);
}

TEST(WordFrequency, FixtureAndTieBreak) {
  const Date d = ymd(2006, 1, 1);
  const std::vector<EmailRecord> in{rec("1", d, d, "Dear dear hope, love"), rec("2", d, d, "dear hope the and")};
  const auto top = word_frequency(in, 20, default_stopwords());
  EXPECT_EQ(top, (std::vector<WordCount>{{"dear", 3}, {"hope", 2}, {"love", 1}}));

  const std::vector<EmailRecord> ties{rec("1", d, d, "beta alpha beta alpha")};
  EXPECT_EQ(word_frequency(ties, 5, {}), (std::vector<WordCount>{{"alpha", 2}, {"beta", 2}}));
  EXPECT_TRUE(word_frequency(in, 0, {}).empty());
}

TEST(WordFrequency, StopwordsOnlyRemove) {
  const Date d = ymd(2006, 1, 1);
  const std::vector<EmailRecord> in{rec("1", d, d, "the cat and the dog and a cat of the year")};
  const auto all = word_frequency(in, 100, {});
  const auto filtered = word_frequency(in, 100, default_stopwords());
  std::size_t total = 0;
  for (const auto& w : all) total += w.count;
  EXPECT_LE(total, 11u);
  for (const auto& w : filtered) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const WordCount& a) { return a.word == w.word; });
    ASSERT_NE(it, all.end());
    EXPECT_EQ(it->count, w.count);
  }
}

TEST(DefaultStopwords, KeepsContentWordsOfInterest) {
  for (const char* w : {"dear", "hope", "love", "know", "life", "time", "happy", "remember", "future"}) {
    EXPECT_FALSE(default_stopwords().contains(w)) << w;
  }
  for (const char* w : {"the", "and", "you", "i", "to"}) EXPECT_TRUE(default_stopwords().contains(w)) << w;
}

TEST(DeliveryHistogram, Examples) {
  const std::vector<EmailRecord> in{rec("a", ymd(2006, 1, 1), ymd(2007, 1, 1)),
                                    rec("b", ymd(2006, 1, 1), ymd(2007, 5, 1)),
                                    rec("c", ymd(2006, 1, 1), ymd(2010, 1, 1))};
  const CorpusStats s = delivery_histogram(in);
  EXPECT_EQ(s.per_year_counts, (std::map<int, std::size_t>{{2007, 2}, {2010, 1}}));
  EXPECT_EQ(s.total_records, 3u);

  const CorpusStats one = delivery_histogram({rec("a", ymd(2006, 1, 1), ymd(2007, 1, 1))});
  EXPECT_DOUBLE_EQ(one.mean_lag_years.at(2006), 1.0);

  const CorpusStats empty = delivery_histogram({});
  EXPECT_EQ(empty.total_records, 0u);
  EXPECT_TRUE(empty.per_year_counts.empty());
}

TEST(DeliveryHistogram, PermutationInvariantAndConsistent) {
  std::mt19937 rng(11);
  std::vector<EmailRecord> in;
  for (int i = 0; i < 200; ++i) {
    const int year = 2006 + static_cast<int>(rng() % 31);
    in.push_back(rec(std::to_string(i), ymd(2006, 1 + rng() % 12, 1), ymd(year + 1, 1 + rng() % 12, 1 + rng() % 28)));
  }
  const CorpusStats a = delivery_histogram(in);
  std::shuffle(in.begin(), in.end(), rng);
  const CorpusStats b = delivery_histogram(in);
  EXPECT_EQ(a.per_year_counts, b.per_year_counts);
  std::size_t sum = 0;
  for (const auto& [y, c] : a.per_year_counts) sum += c;
  EXPECT_EQ(sum, a.total_records);
  for (const auto& [y, lag] : a.mean_lag_years) {
    EXPECT_GE(lag, 0.0);
    EXPECT_NEAR(lag, b.mean_lag_years.at(y), 1e-12);
  }
}

TEST(StatsOutput, CsvAndJson) {
  const CorpusStats s = delivery_histogram({rec("a", ymd(2006, 1, 1), ymd(2007, 1, 1))});
  std::ostringstream h;
  write_histogram_csv(h, s);
  EXPECT_EQ(h.str(), "year,count\n2007,1\n");
  std::ostringstream l;
  write_mean_lag_csv(l, s);
  EXPECT_NE(l.str().find("2006,1"), std::string::npos);
  std::ostringstream w;
  write_wordfreq_csv(w, {{"dear", 3}, {"hope", 2}});
  EXPECT_EQ(w.str(), "rank,word,count\n1,dear,3\n2,hope,2\n");
  EXPECT_NE(corpus_stats_json(s).find("\"total_records\": 1"), std::string::npos);
}
