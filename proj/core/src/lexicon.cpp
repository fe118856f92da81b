#include "moodscope/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "embedded_data.hpp"
#include "moodscope/error.hpp"
#include "moodscope/textproc.hpp"
#include "text_util.hpp"

namespace moodscope {

namespace {

constexpr std::array<std::string_view, kScaleCount> kScaleNames = {
    "tension", "depression", "anger", "vigor", "fatigue", "confusion"};

std::size_t word_count(std::string_view phrase) {
  std::size_t n = 0;
  for_each_word(phrase, [&](std::string_view) { ++n; });
  return n;
}

bool has_uppercase(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

std::string_view to_string(MoodScale scale) noexcept { return kScaleNames[index_of(scale)]; }

std::optional<MoodScale> parse_scale(std::string_view label) noexcept {
  for (std::size_t i = 0; i < kScaleCount; ++i) {
    if (kScaleNames[i] == label) return kAllScales[i];
  }
  return std::nullopt;
}

MoodLexicon parse_lexicon(std::string_view text) {
  MoodLexicon lexicon;
  std::vector<std::string> problems;
  std::map<std::string, std::size_t, std::less<>> first_line_of;

  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::string_view comment = detail::trim(body.substr(1));
      if (comment.starts_with("version:")) {
        lexicon.version = std::string(detail::trim(comment.substr(8)));
      }
      continue;
    }

    const auto fields = detail::split(body, '|');
    if (fields.size() < 2 || fields.size() > 3) {
      problems.push_back(
          fmt::format("line {}: expected 'main_term | scale | phrases', got {} field(s)", line_no,
                      fields.size()));
      continue;
    }

    LexiconEntry entry;
    entry.main_term = std::string(detail::trim(fields[0]));
    const std::string_view scale_label = detail::trim(fields[1]);

    bool ok = true;
    if (entry.main_term.empty()) {
      problems.push_back(fmt::format("line {}: empty main term", line_no));
      ok = false;
    } else if (has_uppercase(entry.main_term)) {
      problems.push_back(
          fmt::format("line {}: main term '{}' must be lowercase", line_no, entry.main_term));
      ok = false;
    } else if (const auto words = word_count(entry.main_term);
               words == 0 || words > kMaxPhraseWords) {
      problems.push_back(fmt::format("line {}: main term '{}' must have 1 to {} words", line_no,
                                     entry.main_term, kMaxPhraseWords));
      ok = false;
    }

    if (auto scale = parse_scale(scale_label)) {
      entry.scale = *scale;
    } else {
      problems.push_back(fmt::format("line {}: unknown scale '{}'", line_no, scale_label));
      ok = false;
    }

    if (fields.size() == 3 && !detail::trim(fields[2]).empty()) {
      std::set<std::string, std::less<>> seen;
      for (std::string_view raw : detail::split(fields[2], ',')) {
        std::string phrase = detail::to_lower(detail::trim(raw));
        if (phrase.empty()) {
          problems.push_back(
              fmt::format("line {}: empty extended phrase under '{}'", line_no, entry.main_term));
          ok = false;
          continue;
        }
        if (const auto words = word_count(phrase); words == 0 || words > kMaxPhraseWords) {
          problems.push_back(fmt::format("line {}: phrase '{}' must have 1 to {} words", line_no,
                                         phrase, kMaxPhraseWords));
          ok = false;
          continue;
        }
        if (!seen.insert(phrase).second) {
          problems.push_back(fmt::format("line {}: duplicate extended phrase '{}' under '{}'",
                                         line_no, phrase, entry.main_term));
          ok = false;
          continue;
        }
        entry.extended.push_back(std::move(phrase));
      }
    }

    if (!entry.main_term.empty()) {
      if (auto it = first_line_of.find(entry.main_term); it != first_line_of.end()) {
        problems.push_back(fmt::format("line {}: duplicate main term '{}' (first defined on line {})",
                                       line_no, entry.main_term, it->second));
        ok = false;
      } else {
        first_line_of.emplace(entry.main_term, line_no);
      }
    }

    if (ok) lexicon.entries.push_back(std::move(entry));
  }

  if (problems.empty()) {
    validate(lexicon);
  } else {
    throw ValidationError(std::move(problems));
  }
  return lexicon;
}

MoodLexicon load_lexicon(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading lexicon stream");
  return parse_lexicon(buffer.str());
}

MoodLexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open lexicon file '{}'", path));
  return load_lexicon(in);
}

void validate(const MoodLexicon& lexicon) {
  std::vector<std::string> problems;
  std::set<std::string_view> mains;
  std::array<std::size_t, kScaleCount> per_scale{};
  for (const auto& e : lexicon.entries) {
    if (e.main_term.empty() || has_uppercase(e.main_term)) {
      problems.push_back(fmt::format("main term '{}' must be non-empty lowercase", e.main_term));
    }
    if (!mains.insert(e.main_term).second) {
      problems.push_back(fmt::format("duplicate main term '{}'", e.main_term));
    }
    std::set<std::string_view> phrases;
    for (const auto& p : e.extended) {
      if (p.empty()) problems.push_back(fmt::format("empty extended phrase under '{}'", e.main_term));
      if (!phrases.insert(p).second) {
        problems.push_back(
            fmt::format("duplicate extended phrase '{}' under '{}'", p, e.main_term));
      }
    }
    ++per_scale[index_of(e.scale)];
  }
  for (MoodScale s : kAllScales) {
    if (per_scale[index_of(s)] == 0) {
      problems.push_back(fmt::format("scale '{}' has no entries", to_string(s)));
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::string_view default_lexicon_text() noexcept { return embedded::kDefaultLexicon; }

const MoodLexicon& default_lexicon() {
  static const MoodLexicon lexicon = parse_lexicon(embedded::kDefaultLexicon);
  return lexicon;
}

std::string stem_phrase(std::string_view phrase) {
  std::string joined;
  for_each_word(phrase, [&](std::string_view w) {
    if (!joined.empty()) joined.push_back(' ');
    joined += stem_word(w);
  });
  return joined;
}

std::size_t CompiledMatcher::find(std::string_view joined_stems) const {
  const auto it = index_.find(joined_stems);
  return it == index_.end() ? npos : it->second;
}

std::size_t CompiledMatcher::term_index(std::string_view main_term) const {
  const auto it = std::find(main_terms_.begin(), main_terms_.end(), main_term);
  return it == main_terms_.end() ? npos : static_cast<std::size_t>(it - main_terms_.begin());
}

std::vector<std::pair<std::string, std::size_t>> CompiledMatcher::sequences() const {
  std::vector<std::pair<std::string, std::size_t>> out(index_.begin(), index_.end());
  std::sort(out.begin(), out.end());
  return out;
}

CompiledMatcher compile(const MoodLexicon& lexicon) {
  validate(lexicon);

  CompiledMatcher m;
  m.version_ = lexicon.version;
  m.main_terms_.reserve(lexicon.entries.size());
  m.scales_.reserve(lexicon.entries.size());
  for (const auto& e : lexicon.entries) {
    m.main_terms_.push_back(e.main_term);
    m.scales_.push_back(e.scale);
  }

  auto insert = [&m](std::size_t owner, const std::string& phrase) {
    std::string key = stem_phrase(phrase);
    const std::size_t len = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
    auto [it, inserted] = m.index_.try_emplace(std::move(key), owner);
    if (inserted) {
      m.max_phrase_len_ = std::max(m.max_phrase_len_, len);
    } else if (it->second != owner) {
      m.warnings_.push_back(
          CompileWarning{"stem_collision", m.main_terms_[owner], m.main_terms_[it->second], phrase});
    }
  };

  for (std::size_t i = 0; i < lexicon.entries.size(); ++i) insert(i, lexicon.entries[i].main_term);
  for (std::size_t i = 0; i < lexicon.entries.size(); ++i) {
    for (const auto& phrase : lexicon.entries[i].extended) insert(i, phrase);
  }
  return m;
}

}  // namespace moodscope
