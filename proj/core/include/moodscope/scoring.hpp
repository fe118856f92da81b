#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodscope/corpus.hpp"
#include "moodscope/lexicon.hpp"

namespace moodscope {

/// Per-main-term match counts, indexed like the matcher's main terms.
struct RawPomsScores {
  std::vector<std::uint32_t> counts;

  [[nodiscard]] std::uint64_t total() const;
  /// Non-zero counts keyed by main term.
  [[nodiscard]] std::map<std::string, std::uint32_t> named(const CompiledMatcher& matcher) const;
};

/// Six components in MoodScale order.
class MoodVector {
 public:
  MoodVector() = default;
  explicit MoodVector(std::array<double, kScaleCount> values, bool normalized = false)
      : values_(values), normalized_(normalized) {}

  [[nodiscard]] double operator[](MoodScale s) const { return values_[index_of(s)]; }
  [[nodiscard]] double& operator[](MoodScale s) { return values_[index_of(s)]; }
  [[nodiscard]] const std::array<double, kScaleCount>& values() const { return values_; }
  [[nodiscard]] bool normalized() const { return normalized_; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] double sum() const;
  [[nodiscard]] bool is_zero() const;

  friend bool operator==(const MoodVector&, const MoodVector&) = default;

 private:
  std::array<double, kScaleCount> values_{};
  bool normalized_ = false;
};

/// Left-to-right longest-match scan over the stems of `tokens`: each match
/// adds 1 to its main term and skips the matched words.
RawPomsScores score_tokens(std::span<const std::string> tokens, const CompiledMatcher& matcher);

/// Same scan over text; tokenizes internally.
RawPomsScores score_text(std::string_view text, const CompiledMatcher& matcher);

/// Applies the scoring key: each scale sums its main terms' counts.
MoodVector to_mood_vector(const RawPomsScores& scores, const CompiledMatcher& matcher);

/// Divides by the Euclidean norm. nullopt signals the zero vector.
std::optional<MoodVector> normalize(const MoodVector& v);

/// Normalized mood vectors of all scored emails delivered in one year.
struct YearBucket {
  int year = 0;
  std::vector<MoodVector> vectors;
  std::vector<std::string> ids;  // parallel to vectors
  std::size_t zero_match_count = 0;

  [[nodiscard]] std::size_t size() const { return vectors.size(); }
  /// One dimension across the bucket, in bucket order.
  [[nodiscard]] std::vector<double> component(MoodScale s) const;
};

using BucketMap = std::map<int, YearBucket>;

/// One audit row per input record.
struct ScoredEmail {
  std::string id;
  int delivery_year = 0;
  MoodVector raw;
  std::optional<MoodVector> normalized;  // nullopt for zero-match emails
  std::uint64_t match_count = 0;
};

/// Scores every record. `threads` > 1 scores disjoint chunks in parallel;
/// the output order is always the input order.
std::vector<ScoredEmail> score_records(const std::vector<EmailRecord>& records,
                                       const CompiledMatcher& matcher, unsigned threads = 1);

/// Groups scored emails by delivery year; zero-match emails only bump
/// zero_match_count.
BucketMap bucket_by_year(const std::vector<ScoredEmail>& scored);

/// score_records followed by bucket_by_year.
BucketMap score_corpus(const std::vector<EmailRecord>& records, const CompiledMatcher& matcher,
                       unsigned threads = 1);

/// Audit CSV: id,delivery_year,<six normalized components>,match_count.
void write_scores_csv(std::ostream& out, const std::vector<ScoredEmail>& scored);

/// Bucket summary JSON. Vectors are written at full precision so the file
/// can be read back into identical buckets.
std::string buckets_json(const BucketMap& buckets);
BucketMap parse_buckets_json(std::string_view text);
BucketMap load_buckets_file(const std::string& path);

}  // namespace moodscope
