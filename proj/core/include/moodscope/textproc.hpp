#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace moodscope {

/// A lowercase surface word and its Porter stem.
struct Token {
  std::string surface;
  std::string stem;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits text into lowercase words.
///
/// A word is a maximal run of ASCII letters. An apostrophe (' or U+2019)
/// is kept only when it sits between two letters, so "don't" survives and
/// "'quoted'" loses its quotes. Everything else, including digits, hyphens
/// and non-ASCII letters, separates words.
std::vector<std::string> tokenize(std::string_view text);

/// Calls `sink(std::string_view word)` for every word `tokenize` would
/// return, without allocating the vector. The view is only valid during
/// the call.
template <typename Sink>
void for_each_word(std::string_view text, Sink&& sink);

/// Porter (1980) suffix stripping, as in the reference C implementation
/// distributed by the algorithm's author. Input must be lowercase a-z;
/// words of length <= 2 come back unchanged.
std::string porter_stem(std::string_view word);

/// Stems a tokenizer word: apostrophes are dropped before stemming.
std::string stem_word(std::string_view surface);

/// Tokenizes and stems in one pass.
std::vector<Token> analyze(std::string_view text);

// ---------------------------------------------------------------------------

namespace detail {

inline bool is_ascii_letter(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Length of the apostrophe encoded at text[i] (1 for ', 3 for U+2019), or 0.
inline std::size_t apostrophe_at(std::string_view text, std::size_t i) noexcept {
  if (text[i] == '\'') return 1;
  if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80 &&
      static_cast<unsigned char>(text[i + 2]) == 0x99) {
    return 3;
  }
  return 0;
}

}  // namespace detail

template <typename Sink>
void for_each_word(std::string_view text, Sink&& sink) {
  std::string word;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (detail::is_ascii_letter(c)) {
      word.push_back(static_cast<char>(c | 0x20));
      ++i;
      continue;
    }
    if (!word.empty()) {
      const std::size_t apos = detail::apostrophe_at(text, i);
      if (apos != 0 && i + apos < n &&
          detail::is_ascii_letter(static_cast<unsigned char>(text[i + apos]))) {
        word.push_back('\'');
        i += apos;
        continue;
      }
      sink(std::string_view(word));
      word.clear();
    }
    ++i;
  }
  if (!word.empty()) sink(std::string_view(word));
}

}  // namespace moodscope
