#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace moodscope {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

/// Delivery lag in fractional calendar years: whole years first, then the
/// remaining days over the length of the following year. 2006-03-01 to
/// 2016-03-01 is exactly 10.
double lag_years(Date compose, Date delivery);

/// One future-dated message. delivery_date >= compose_date always holds
/// for records produced by the parser.
struct EmailRecord {
  std::string id;
  Date compose_date;
  Date delivery_date;
  std::string body;

  [[nodiscard]] int compose_year() const { return static_cast<int>(compose_date.year()); }
  [[nodiscard]] int delivery_year() const { return static_cast<int>(delivery_date.year()); }

  friend bool operator==(const EmailRecord&, const EmailRecord&) = default;
};

enum class CorpusFormat {
  delimited,   // id <TAB> compose <TAB> delivery <TAB> escaped body
  json_lines,  // {"id":..,"compose_date":..,"delivery_date":..,"body":..}
  automatic,   // json_lines if the first non-blank line starts with '{'
};

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Why a line did not become a record.
struct RejectionReport {
  std::size_t line = 0;
  std::string id;    // empty when the id could not be read
  std::string code;  // stable machine-readable reason
  std::string message;

  friend bool operator==(const RejectionReport&, const RejectionReport&) = default;
};

namespace reason {
inline constexpr std::string_view field_count = "field_count";
inline constexpr std::string_view empty_id = "empty_id";
inline constexpr std::string_view bad_date = "bad_date";
inline constexpr std::string_view delivery_precedes_compose = "delivery_precedes_compose";
inline constexpr std::string_view unknown_encoding = "unknown_encoding";
inline constexpr std::string_view bad_escape = "bad_escape";
inline constexpr std::string_view bad_json = "bad_json";
}  // namespace reason

struct ParseResult {
  std::vector<EmailRecord> records;
  std::vector<RejectionReport> rejections;
};

/// Parses a corpus. Malformed lines are reported, never fatal. Blank lines
/// and lines starting with '#' are skipped. Throws IoError if the stream
/// cannot be read.
ParseResult parse_corpus(std::istream& in, CorpusFormat format);
ParseResult parse_corpus_text(std::string_view text, CorpusFormat format);
ParseResult parse_corpus_file(const std::string& path, CorpusFormat format);

/// Backslash escaping used by the delimited format (\\ \t \n \r).
std::string escape_body(std::string_view body);
std::optional<std::string> unescape_body(std::string_view escaped);

void write_corpus(std::ostream& out, const std::vector<EmailRecord>& records,
                  CorpusFormat format = CorpusFormat::delimited);

/// Rejections as CSV: line,id,reason_code,detail.
void write_rejections_csv(std::ostream& out, const std::vector<RejectionReport>& rejections);

// --- language filter -------------------------------------------------------

inline constexpr double kDefaultEnglishThreshold = 0.15;
inline constexpr std::size_t kMinTokensForLanguageCheck = 5;

/// Built-in English function words (articles, pronouns, auxiliaries,
/// prepositions, conjunctions).
const std::set<std::string, std::less<>>& english_function_words();

struct FunctionWordRatio {
  std::size_t function_words = 0;
  std::size_t tokens = 0;
  [[nodiscard]] double ratio() const {
    return tokens == 0 ? 0.0 : static_cast<double>(function_words) / static_cast<double>(tokens);
  }
};

FunctionWordRatio function_word_ratio(std::string_view body);

struct LanguageFilterResult {
  std::vector<EmailRecord> kept;
  std::vector<EmailRecord> rejected;
  /// Ids of kept records too short to judge.
  std::vector<std::string> flagged_short;
};

/// Keeps a record iff its function-word ratio >= threshold. Records with
/// fewer than kMinTokensForLanguageCheck tokens are kept and flagged.
LanguageFilterResult filter_english(std::vector<EmailRecord> records,
                                    double threshold = kDefaultEnglishThreshold);

// --- descriptive statistics ------------------------------------------------

using StopwordSet = std::set<std::string, std::less<>>;

StopwordSet load_stopwords(std::istream& in);
StopwordSet load_stopwords_file(const std::string& path);
const StopwordSet& default_stopwords();

struct WordCount {
  std::string word;
  std::size_t count = 0;
  friend bool operator==(const WordCount&, const WordCount&) = default;
};

/// Top `top_n` surface words by descending count, ties by ascending word.
std::vector<WordCount> word_frequency(const std::vector<EmailRecord>& records, std::size_t top_n,
                                      const StopwordSet& stopwords);

struct CorpusStats {
  std::map<int, std::size_t> per_year_counts;  // keyed by delivery year
  std::map<int, double> mean_lag_years;        // keyed by compose year
  std::size_t total_records = 0;
  std::size_t rejected_language = 0;
  std::size_t rejected_encoding = 0;
};

CorpusStats delivery_histogram(const std::vector<EmailRecord>& records);

void write_histogram_csv(std::ostream& out, const CorpusStats& stats);
void write_mean_lag_csv(std::ostream& out, const CorpusStats& stats);
void write_wordfreq_csv(std::ostream& out, const std::vector<WordCount>& words);
std::string corpus_stats_json(const CorpusStats& stats);

}  // namespace moodscope
