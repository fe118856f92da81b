#include "moodscope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "embedded_data.hpp"
#include "moodscope/error.hpp"
#include "moodscope/textproc.hpp"
#include "num_format.hpp"
#include "text_util.hpp"

namespace moodscope {

namespace chr = std::chrono;

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  const auto y = digits(0, 4);
  const auto m = digits(5, 2);
  const auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{chr::year{*y}, chr::month{static_cast<unsigned>(*m)},
                  chr::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

namespace {

// date + n years, clamping Feb 29 to Feb 28 in non-leap years.
chr::sys_days add_years(Date date, int years) {
  Date shifted = date + chr::years{years};
  if (!shifted.ok()) shifted = shifted.year() / shifted.month() / chr::last;
  return chr::sys_days{shifted};
}

}  // namespace

double lag_years(Date compose, Date delivery) {
  const chr::sys_days to{delivery};
  int whole = static_cast<int>(delivery.year()) - static_cast<int>(compose.year());
  while (whole > 0 && add_years(compose, whole) > to) --whole;
  while (add_years(compose, whole + 1) <= to) ++whole;
  const chr::sys_days anchor = add_years(compose, whole);
  const chr::sys_days next = add_years(compose, whole + 1);
  const double rest = static_cast<double>((to - anchor).count());
  const double span = static_cast<double>((next - anchor).count());
  return whole + rest / span;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "delimited" || name == "tsv") return CorpusFormat::delimited;
  if (name == "jsonl" || name == "json_lines") return CorpusFormat::json_lines;
  if (name == "auto" || name == "automatic") return CorpusFormat::automatic;
  return std::nullopt;
}

std::string escape_body(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (char c : body) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> unescape_body(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    const char c = escaped[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i == escaped.size()) return std::nullopt;
    switch (escaped[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: return std::nullopt;
    }
  }
  return out;
}

namespace {

struct LineParser {
  ParseResult& result;

  void reject(std::size_t line, std::string id, std::string_view code, std::string message) {
    result.rejections.push_back(
        RejectionReport{line, std::move(id), std::string(code), std::move(message)});
  }

  // Shared validation once the four fields are extracted.
  void accept(std::size_t line, std::string id, std::string_view compose, std::string_view delivery,
              std::string body) {
    if (id.empty()) {
      reject(line, {}, reason::empty_id, "record id is empty");
      return;
    }
    const auto c = parse_date(compose);
    if (!c) {
      reject(line, id, reason::bad_date, fmt::format("invalid compose date '{}'", compose));
      return;
    }
    const auto d = parse_date(delivery);
    if (!d) {
      reject(line, id, reason::bad_date, fmt::format("invalid delivery date '{}'", delivery));
      return;
    }
    if (chr::sys_days{*d} < chr::sys_days{*c}) {
      reject(line, id, reason::delivery_precedes_compose, "delivery precedes compose");
      return;
    }
    result.records.push_back(EmailRecord{std::move(id), *c, *d, std::move(body)});
  }

  void delimited(std::size_t line, std::string_view text) {
    const auto fields = detail::split(text, '\t');
    if (fields.size() != 4) {
      reject(line, fields.size() > 1 ? std::string(fields[0]) : std::string{}, reason::field_count,
             fmt::format("expected 4 tab-separated fields, got {}", fields.size()));
      return;
    }
    auto body = unescape_body(fields[3]);
    if (!body) {
      reject(line, std::string(fields[0]), reason::bad_escape, "invalid escape sequence in body");
      return;
    }
    accept(line, std::string(detail::trim(fields[0])), detail::trim(fields[1]),
           detail::trim(fields[2]), std::move(*body));
  }

  void json_line(std::size_t line, std::string_view text) {
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      reject(line, {}, reason::bad_json, fmt::format("malformed JSON: {}", e.what()));
      return;
    }
    if (!obj.is_object()) {
      reject(line, {}, reason::bad_json, "expected a JSON object");
      return;
    }
    auto str_field = [&](const char* key) -> std::optional<std::string> {
      const auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) return std::nullopt;
      return it->get<std::string>();
    };
    const auto id = str_field("id");
    const auto compose = str_field("compose_date");
    const auto delivery = str_field("delivery_date");
    const auto body = str_field("body");
    if (!id || !compose || !delivery || !body) {
      reject(line, id.value_or(""), reason::field_count,
             "missing string field (id, compose_date, delivery_date, body)");
      return;
    }
    accept(line, *id, *compose, *delivery, *body);
  }
};

}  // namespace

ParseResult parse_corpus_text(std::string_view text, CorpusFormat format) {
  ParseResult result;
  LineParser parser{result};
  const auto lines = detail::split_lines(text);

  if (format == CorpusFormat::automatic) {
    format = CorpusFormat::delimited;
    for (std::string_view l : lines) {
      const auto t = detail::trim(l);
      if (t.empty() || t.front() == '#') continue;
      if (t.front() == '{') format = CorpusFormat::json_lines;
      break;
    }
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (detail::trim(line).empty() || line.front() == '#') continue;
    if (!detail::is_valid_utf8(line)) {
      std::string id;
      if (format == CorpusFormat::delimited) {
        const auto tab = line.find('\t');
        if (tab != std::string_view::npos && detail::is_valid_utf8(line.substr(0, tab))) {
          id = std::string(line.substr(0, tab));
        }
      }
      parser.reject(line_no, std::move(id), reason::unknown_encoding, "unknown character encoding");
      continue;
    }
    if (format == CorpusFormat::json_lines) {
      parser.json_line(line_no, line);
    } else {
      parser.delimited(line_no, line);
    }
  }
  return result;
}

ParseResult parse_corpus(std::istream& in, CorpusFormat format) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading corpus stream");
  return parse_corpus_text(buffer.str(), format);
}

ParseResult parse_corpus_file(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open corpus file '{}'", path));
  return parse_corpus(in, format);
}

void write_corpus(std::ostream& out, const std::vector<EmailRecord>& records, CorpusFormat format) {
  for (const auto& r : records) {
    if (format == CorpusFormat::json_lines) {
      const nlohmann::ordered_json obj = {{"id", r.id},
                                          {"compose_date", format_date(r.compose_date)},
                                          {"delivery_date", format_date(r.delivery_date)},
                                          {"body", r.body}};
      out << obj.dump() << '\n';
    } else {
      out << r.id << '\t' << format_date(r.compose_date) << '\t' << format_date(r.delivery_date)
          << '\t' << escape_body(r.body) << '\n';
    }
  }
}

void write_rejections_csv(std::ostream& out, const std::vector<RejectionReport>& rejections) {
  out << "line,id,reason_code,detail\n";
  for (const auto& r : rejections) {
    out << r.line << ',' << detail::csv_field(r.id) << ',' << r.code << ','
        << detail::csv_field(r.message) << '\n';
  }
}

// --- language filter -------------------------------------------------------

const std::set<std::string, std::less<>>& english_function_words() {
  static const std::set<std::string, std::less<>> words = {
      // articles and determiners
      "a", "an", "the", "this", "that", "these", "those", "each", "every", "either", "neither",
      "some", "any", "no", "all", "both", "few", "many", "much", "more", "most", "other",
      "another", "such", "what", "which", "whose",
      // pronouns
      "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "he", "him", "his",
      "himself", "she", "her", "hers", "herself", "it", "its", "itself", "we", "us", "our",
      "ours", "ourselves", "they", "them", "their", "theirs", "themselves", "who", "whom",
      "someone", "something", "anything", "nothing", "everything",
      // auxiliaries and modals
      "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
      "do", "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
      "must", "i'm", "you're", "it's", "don't", "didn't", "can't", "won't", "isn't", "i've",
      "i'll",
      // prepositions
      "about", "above", "after", "against", "at", "before", "behind", "below", "between", "by",
      "during", "for", "from", "in", "into", "of", "off", "on", "onto", "out", "over", "since",
      "through", "to", "toward", "under", "until", "up", "upon", "with", "within", "without",
      // conjunctions and adverbial glue
      "and", "but", "or", "nor", "so", "yet", "because", "if", "then", "than", "though",
      "although", "while", "when", "where", "whether", "how", "why", "as", "not", "very", "just",
      "also", "too", "here", "there", "now"};
  return words;
}

FunctionWordRatio function_word_ratio(std::string_view body) {
  FunctionWordRatio r;
  const auto& fw = english_function_words();
  for_each_word(body, [&](std::string_view w) {
    ++r.tokens;
    if (fw.find(w) != fw.end()) ++r.function_words;
  });
  return r;
}

LanguageFilterResult filter_english(std::vector<EmailRecord> records, double threshold) {
  LanguageFilterResult out;
  for (auto& r : records) {
    const auto ratio = function_word_ratio(r.body);
    if (ratio.tokens < kMinTokensForLanguageCheck) {
      out.flagged_short.push_back(r.id);
      out.kept.push_back(std::move(r));
    } else if (ratio.ratio() >= threshold) {
      out.kept.push_back(std::move(r));
    } else {
      out.rejected.push_back(std::move(r));
    }
  }
  return out;
}

// --- descriptive statistics ------------------------------------------------

namespace {

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet words;
  for (std::string_view line : detail::split_lines(text)) {
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    words.insert(detail::to_lower(t));
  }
  return words;
}

}  // namespace

StopwordSet load_stopwords(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading stopword stream");
  return parse_stopwords(buffer.str());
}

StopwordSet load_stopwords_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open stopword file '{}'", path));
  return load_stopwords(in);
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = parse_stopwords(embedded::kStopwords);
  return words;
}

std::vector<WordCount> word_frequency(const std::vector<EmailRecord>& records, std::size_t top_n,
                                      const StopwordSet& stopwords) {
  if (top_n == 0) return {};
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    for_each_word(r.body, [&](std::string_view w) {
      if (stopwords.find(w) != stopwords.end()) return;
      ++counts[std::string(w)];
    });
  }
  std::vector<WordCount> ranked;
  ranked.reserve(counts.size());
  for (auto& [word, count] : counts) ranked.push_back(WordCount{word, count});
  auto by_rank = [](const WordCount& a, const WordCount& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  };
  const std::size_t keep = std::min(top_n, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.end(), by_rank);
  ranked.resize(keep);
  return ranked;
}

CorpusStats delivery_histogram(const std::vector<EmailRecord>& records) {
  CorpusStats stats;
  std::map<int, std::pair<double, std::size_t>> lag_sums;
  for (const auto& r : records) {
    ++stats.per_year_counts[r.delivery_year()];
    auto& [sum, n] = lag_sums[r.compose_year()];
    sum += lag_years(r.compose_date, r.delivery_date);
    ++n;
  }
  for (const auto& [year, acc] : lag_sums) {
    stats.mean_lag_years[year] = acc.first / static_cast<double>(acc.second);
  }
  stats.total_records = records.size();
  return stats;
}

void write_histogram_csv(std::ostream& out, const CorpusStats& stats) {
  out << "year,count\n";
  for (const auto& [year, count] : stats.per_year_counts) out << year << ',' << count << '\n';
}

void write_mean_lag_csv(std::ostream& out, const CorpusStats& stats) {
  out << "compose_year,mean_lag_years\n";
  for (const auto& [year, lag] : stats.mean_lag_years) {
    out << year << ',' << detail::fmt_real(lag) << '\n';
  }
}

void write_wordfreq_csv(std::ostream& out, const std::vector<WordCount>& words) {
  out << "rank,word,count\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << (i + 1) << ',' << words[i].word << ',' << words[i].count << '\n';
  }
}

std::string corpus_stats_json(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["total_records"] = stats.total_records;
  j["rejected_language"] = stats.rejected_language;
  j["rejected_encoding"] = stats.rejected_encoding;
  auto& per_year = j["per_year_counts"] = nlohmann::ordered_json::object();
  for (const auto& [year, count] : stats.per_year_counts) per_year[std::to_string(year)] = count;
  auto& lags = j["mean_lag_years"] = nlohmann::ordered_json::object();
  for (const auto& [year, lag] : stats.mean_lag_years) lags[std::to_string(year)] = lag;
  return j.dump(2) + "\n";
}

}  // namespace moodscope
