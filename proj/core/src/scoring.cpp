#include "moodscope/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "moodscope/error.hpp"
#include "moodscope/textproc.hpp"
#include "num_format.hpp"

namespace moodscope {

std::uint64_t RawPomsScores::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::map<std::string, std::uint32_t> RawPomsScores::named(const CompiledMatcher& matcher) const {
  std::map<std::string, std::uint32_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out.emplace(matcher.main_term(i), counts[i]);
  }
  return out;
}

double MoodVector::norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

double MoodVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool MoodVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

namespace {

RawPomsScores score_stems(const std::vector<std::string>& stems, const CompiledMatcher& matcher) {
  RawPomsScores scores;
  scores.counts.assign(matcher.term_count(), 0);
  const std::size_t n = stems.size();
  const std::size_t max_len = matcher.max_phrase_len();
  std::string key;
  std::size_t i = 0;
  while (i < n) {
    std::size_t matched_len = 0;
    std::size_t owner = CompiledMatcher::npos;
    for (std::size_t len = std::min(max_len, n - i); len >= 1; --len) {
      key.clear();
      for (std::size_t k = 0; k < len; ++k) {
        if (k != 0) key.push_back(' ');
        key += stems[i + k];
      }
      owner = matcher.find(key);
      if (owner != CompiledMatcher::npos) {
        matched_len = len;
        break;
      }
    }
    if (matched_len == 0) {
      ++i;
    } else {
      ++scores.counts[owner];
      i += matched_len;
    }
  }
  return scores;
}

}  // namespace

RawPomsScores score_tokens(std::span<const std::string> tokens, const CompiledMatcher& matcher) {
  std::vector<std::string> stems;
  stems.reserve(tokens.size());
  for (const auto& t : tokens) stems.push_back(stem_word(t));
  return score_stems(stems, matcher);
}

RawPomsScores score_text(std::string_view text, const CompiledMatcher& matcher) {
  std::vector<std::string> stems;
  for_each_word(text, [&](std::string_view w) { stems.push_back(stem_word(w)); });
  return score_stems(stems, matcher);
}

MoodVector to_mood_vector(const RawPomsScores& scores, const CompiledMatcher& matcher) {
  std::array<double, kScaleCount> v{};
  for (std::size_t i = 0; i < scores.counts.size(); ++i) {
    v[index_of(matcher.scale_of(i))] += static_cast<double>(scores.counts[i]);
  }
  return MoodVector(v, false);
}

std::optional<MoodVector> normalize(const MoodVector& v) {
  const double n = v.norm();
  if (n == 0.0) return std::nullopt;
  std::array<double, kScaleCount> out{};
  for (std::size_t i = 0; i < kScaleCount; ++i) out[i] = v.values()[i] / n;
  return MoodVector(out, true);
}

std::vector<double> YearBucket::component(MoodScale s) const {
  std::vector<double> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(v[s]);
  return out;
}

std::vector<ScoredEmail> score_records(const std::vector<EmailRecord>& records,
                                       const CompiledMatcher& matcher, unsigned threads) {
  std::vector<ScoredEmail> out(records.size());
  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& r = records[i];
      const RawPomsScores raw = score_text(r.body, matcher);
      ScoredEmail& s = out[i];
      s.id = r.id;
      s.delivery_year = r.delivery_year();
      s.raw = to_mood_vector(raw, matcher);
      s.normalized = normalize(s.raw);
      s.match_count = raw.total();
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(records.size())));
  if (threads <= 1) {
    score_range(0, records.size());
    return out;
  }
  {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (records.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < records.size(); begin += chunk) {
      workers.emplace_back(score_range, begin, std::min(records.size(), begin + chunk));
    }
  }
  return out;
}

BucketMap bucket_by_year(const std::vector<ScoredEmail>& scored) {
  BucketMap buckets;
  for (const auto& s : scored) {
    YearBucket& b = buckets[s.delivery_year];
    b.year = s.delivery_year;
    if (s.normalized) {
      b.vectors.push_back(*s.normalized);
      b.ids.push_back(s.id);
    } else {
      ++b.zero_match_count;
    }
  }
  return buckets;
}

BucketMap score_corpus(const std::vector<EmailRecord>& records, const CompiledMatcher& matcher,
                       unsigned threads) {
  return bucket_by_year(score_records(records, matcher, threads));
}

void write_scores_csv(std::ostream& out, const std::vector<ScoredEmail>& scored) {
  out << "id,delivery_year";
  for (MoodScale s : kAllScales) out << ',' << to_string(s);
  out << ",match_count\n";
  for (const auto& s : scored) {
    out << detail::csv_field(s.id) << ',' << s.delivery_year;
    for (MoodScale scale : kAllScales) {
      out << ',' << detail::fmt_real(s.normalized ? (*s.normalized)[scale] : 0.0);
    }
    out << ',' << s.match_count << '\n';
  }
}

std::string buckets_json(const BucketMap& buckets) {
  nlohmann::ordered_json root;
  root["scales"] = nlohmann::ordered_json::array();
  for (MoodScale s : kAllScales) root["scales"].push_back(std::string(to_string(s)));
  auto& arr = root["buckets"] = nlohmann::ordered_json::array();
  for (const auto& [year, b] : buckets) {
    nlohmann::ordered_json jb;
    jb["year"] = year;
    jb["size"] = b.size();
    jb["zero_match_count"] = b.zero_match_count;
    std::array<double, kScaleCount> mean{};
    for (const auto& v : b.vectors) {
      for (std::size_t i = 0; i < kScaleCount; ++i) mean[i] += v.values()[i];
    }
    if (!b.vectors.empty()) {
      for (double& m : mean) m /= static_cast<double>(b.vectors.size());
    }
    jb["mean"] = mean;
    jb["ids"] = b.ids;
    auto& vecs = jb["vectors"] = nlohmann::ordered_json::array();
    for (const auto& v : b.vectors) vecs.push_back(v.values());
    arr.push_back(std::move(jb));
  }
  return root.dump(1) + "\n";
}

BucketMap parse_buckets_json(std::string_view text) {
  BucketMap buckets;
  try {
    const auto root = nlohmann::json::parse(text);
    for (const auto& jb : root.at("buckets")) {
      YearBucket b;
      b.year = jb.at("year").get<int>();
      b.zero_match_count = jb.at("zero_match_count").get<std::size_t>();
      b.ids = jb.at("ids").get<std::vector<std::string>>();
      for (const auto& jv : jb.at("vectors")) {
        const auto values = jv.get<std::array<double, kScaleCount>>();
        b.vectors.emplace_back(values, true);
      }
      if (b.ids.size() != b.vectors.size()) {
        throw ValidationError({fmt::format("bucket {}: ids and vectors differ in length", b.year)});
      }
      if (!buckets.emplace(b.year, std::move(b)).second) {
        throw ValidationError({"duplicate bucket year"});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({fmt::format("malformed bucket JSON: {}", e.what())});
  }
  return buckets;
}

BucketMap load_buckets_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open bucket file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_buckets_json(buffer.str());
}

}  // namespace moodscope
