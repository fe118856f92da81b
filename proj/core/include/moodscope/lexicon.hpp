#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace moodscope {

/// The six mood dimensions, in the fixed order used by every vector.
enum class MoodScale : std::uint8_t { tension, depression, anger, vigor, fatigue, confusion };

inline constexpr std::size_t kScaleCount = 6;

inline constexpr std::array<MoodScale, kScaleCount> kAllScales = {
    MoodScale::tension, MoodScale::depression, MoodScale::anger,
    MoodScale::vigor,   MoodScale::fatigue,    MoodScale::confusion};

std::string_view to_string(MoodScale scale) noexcept;
std::optional<MoodScale> parse_scale(std::string_view label) noexcept;

constexpr std::size_t index_of(MoodScale scale) noexcept { return static_cast<std::size_t>(scale); }

/// Longest phrase, in words, a lexicon may contain.
inline constexpr std::size_t kMaxPhraseWords = 4;

struct LexiconEntry {
  std::string main_term;
  MoodScale scale = MoodScale::tension;
  std::vector<std::string> extended;
};

struct MoodLexicon {
  std::vector<LexiconEntry> entries;
  std::string version;
};

/// Parses and validates the line format
///
///     main_term | scale | phrase, phrase, ...
///
/// Blank lines and `#` comments are ignored; a `# version: X` comment sets
/// the version string. Throws ValidationError listing every problem found
/// (duplicate main term, unknown scale, scale without entries, malformed
/// phrase).
MoodLexicon load_lexicon(std::istream& in);
MoodLexicon parse_lexicon(std::string_view text);
MoodLexicon load_lexicon_file(const std::string& path);

/// Checks the MoodLexicon invariants; throws ValidationError.
void validate(const MoodLexicon& lexicon);

/// The bundled non-proprietary lexicon.
const MoodLexicon& default_lexicon();
std::string_view default_lexicon_text() noexcept;

/// Emitted when two distinct main terms claim the same stem sequence.
struct CompileWarning {
  std::string code;            // "stem_collision"
  std::string term;            // main term that lost the sequence
  std::string colliding_term;  // main term that kept it
  std::string phrase;          // surface phrase that was dropped
};

/// Immutable stem-sequence index over a lexicon.
///
/// Sequences are stored as their stems joined by single spaces. Main terms
/// are inserted before any extended phrase, each group in file order, and
/// the first owner of a sequence keeps it.
class CompiledMatcher {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  [[nodiscard]] std::size_t term_count() const noexcept { return main_terms_.size(); }
  [[nodiscard]] const std::string& main_term(std::size_t index) const { return main_terms_.at(index); }
  [[nodiscard]] MoodScale scale_of(std::size_t index) const { return scales_.at(index); }
  [[nodiscard]] std::size_t max_phrase_len() const noexcept { return max_phrase_len_; }
  [[nodiscard]] std::size_t sequence_count() const noexcept { return index_.size(); }
  [[nodiscard]] const std::vector<CompileWarning>& warnings() const noexcept { return warnings_; }
  [[nodiscard]] const std::string& version() const noexcept { return version_; }

  /// Index of the main term owning this space-joined stem sequence, or npos.
  [[nodiscard]] std::size_t find(std::string_view joined_stems) const;

  /// Index of a main term by its surface form, or npos.
  [[nodiscard]] std::size_t term_index(std::string_view main_term) const;

  /// All stored sequences with their owners, sorted by sequence.
  [[nodiscard]] std::vector<std::pair<std::string, std::size_t>> sequences() const;

  friend bool operator==(const CompiledMatcher& a, const CompiledMatcher& b) {
    return a.main_terms_ == b.main_terms_ && a.scales_ == b.scales_ && a.index_ == b.index_ &&
           a.max_phrase_len_ == b.max_phrase_len_;
  }

 private:
  friend CompiledMatcher compile(const MoodLexicon& lexicon);

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> main_terms_;
  std::vector<MoodScale> scales_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::size_t max_phrase_len_ = 0;
  std::vector<CompileWarning> warnings_;
  std::string version_;
};

/// Stems every main term and extended phrase into a CompiledMatcher.
CompiledMatcher compile(const MoodLexicon& lexicon);

/// Space-joined stems of a phrase, e.g. "Lost  momentum" -> "lost momentum".
std::string stem_phrase(std::string_view phrase);

}  // namespace moodscope
