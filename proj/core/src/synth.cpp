#include "moodscope/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "key_value.hpp"
#include "moodscope/error.hpp"
#include "moodscope/textproc.hpp"
#include "random.hpp"
#include "text_util.hpp"

namespace moodscope {

double evaluate(const TrendProfile& p, int year_index) {
  const double t = year_index;
  return std::visit(
      [t, year_index](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, profile::Constant>) {
          return shape.value;
        } else if constexpr (std::is_same_v<T, profile::Linear>) {
          return shape.intercept + shape.slope * t;
        } else if constexpr (std::is_same_v<T, profile::Quadratic>) {
          return shape.c0 + t * (shape.c1 + t * shape.c2);
        } else {
          return year_index < shape.at ? shape.before : shape.after;
        }
      },
      p);
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view what) {
  Int v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
  return v;
}

std::vector<std::string_view> words_of(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : detail::split(s, ' ')) {
    w = detail::trim(w);
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

}  // namespace

TrendProfile parse_profile(std::string_view text) {
  const auto w = words_of(text);
  if (w.empty()) throw ConfigError("empty profile");
  auto expect = [&](std::size_t args) {
    if (w.size() != args + 1) {
      throw ConfigError(fmt::format("profile '{}' takes {} parameter(s)", w[0], args));
    }
  };
  if (w[0] == "constant") {
    expect(1);
    return profile::Constant{parse_double(w[1], "constant")};
  }
  if (w[0] == "linear") {
    expect(2);
    return profile::Linear{parse_double(w[1], "linear"), parse_double(w[2], "linear")};
  }
  if (w[0] == "quadratic") {
    expect(3);
    return profile::Quadratic{parse_double(w[1], "quadratic"), parse_double(w[2], "quadratic"),
                              parse_double(w[3], "quadratic")};
  }
  if (w[0] == "step") {
    expect(3);
    return profile::Step{parse_double(w[1], "step"), parse_double(w[2], "step"),
                         parse_int<int>(w[3], "step")};
  }
  throw ConfigError(fmt::format("unknown profile '{}'", w[0]));
}

SynthConfig parse_synth_spec(std::string_view text) {
  SynthConfig config;
  bool origin_set = false;
  double default_noise = 0.0;
  std::map<MoodScale, TrendProfile> profiles;
  std::map<MoodScale, double> noise;

  auto scale_suffix = [](const std::string& key, std::string_view prefix) {
    const auto scale = parse_scale(std::string_view(key).substr(prefix.size()));
    if (!scale) throw ConfigError(fmt::format("unknown scale in key '{}'", key));
    return *scale;
  };

  for (const auto& kv : detail::parse_key_values(text)) {
    const std::string& k = kv.key;
    if (k == "first_year") {
      config.first_year = parse_int<int>(kv.value, k);
    } else if (k == "last_year") {
      config.last_year = parse_int<int>(kv.value, k);
    } else if (k == "origin_year") {
      config.origin_year = parse_int<int>(kv.value, k);
      origin_set = true;
    } else if (k == "emails_per_year") {
      config.emails_per_year = parse_int<std::size_t>(kv.value, k);
    } else if (k == "filler_words") {
      config.filler_words = parse_int<std::size_t>(kv.value, k);
    } else if (k == "seed") {
      config.seed = parse_int<std::uint64_t>(kv.value, k);
    } else if (k == "noise_sd") {
      default_noise = parse_double(kv.value, k);
    } else if (k.starts_with("profile.")) {
      profiles[scale_suffix(k, "profile.")] = parse_profile(kv.value);
    } else if (k.starts_with("noise.")) {
      noise[scale_suffix(k, "noise.")] = parse_double(kv.value, k);
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", kv.line, k));
    }
  }

  if (!origin_set) config.origin_year = config.first_year;
  if (config.last_year < config.first_year) {
    throw ConfigError(fmt::format("empty year range {}..{}", config.first_year, config.last_year));
  }
  if (config.origin_year > config.first_year) {
    throw ConfigError("origin_year must not be after first_year");
  }
  if (config.emails_per_year == 0) throw ConfigError("emails_per_year must be >= 1");
  for (const auto& [scale, sd] : noise) {
    if (!profiles.contains(scale)) {
      throw ConfigError(fmt::format("noise.{} given without profile.{}", to_string(scale),
                                    to_string(scale)));
    }
  }
  for (const auto& [scale, prof] : profiles) {
    const auto it = noise.find(scale);
    const double sd = it == noise.end() ? default_noise : it->second;
    if (sd < 0.0) throw ConfigError("noise_sd must be >= 0");
    config.specs.push_back(TrendSpec{scale, prof, sd});
  }
  return config;
}

SynthConfig load_synth_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open synth spec '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_synth_spec(buffer.str());
}

namespace {

// Three filler draws in four come from this list, which keeps synthetic bodies
// above the English-filter threshold.
constexpr std::string_view kFunctionFiller[] = {
    "i",    "you",  "is",    "was",   "we",    "they",   "this",  "that",  "but",  "very",
    "will", "would", "your", "our",   "their", "been",   "have",  "has",   "were", "are",
    "am",   "an",   "he",    "she",   "his",   "her",    "by",    "if",    "so",   "as",
    "can",  "could", "should", "than", "then", "when",   "where", "also",  "just", "here",
    "there", "now", "these", "those", "the",   "and",    "of",    "with",  "about", "from"};

constexpr std::string_view kContentFiller[] = {
    "table",   "window",  "garden",   "paper",    "river",   "street",  "number",  "yellow",
    "kitchen", "bicycle", "letter",   "morning",  "pencil",  "market",  "station", "orange",
    "bottle",  "corner",  "button",   "ladder",   "carpet",  "planet",  "tunnel",  "basket",
    "marble",  "cotton",  "silver",   "harbor",   "meadow",  "pocket",  "violin",  "engine",
    "forest",  "island",  "lantern",  "wallet",   "blanket", "notebook", "camera", "chimney",
    "saddle",  "ticket",  "umbrella", "helmet",   "jacket",  "pillow",  "mirror",  "compass"};

struct Filler {
  std::vector<std::string> function_words;
  std::vector<std::string> content_words;
};

Filler make_filler(const CompiledMatcher& matcher) {
  std::set<std::string, std::less<>> lexicon_stems;
  for (const auto& [seq, owner] : matcher.sequences()) {
    for (auto s : detail::split(seq, ' ')) lexicon_stems.emplace(s);
  }
  Filler f;
  for (auto w : kFunctionFiller) {
    if (english_function_words().contains(w) && !lexicon_stems.contains(porter_stem(w))) {
      f.function_words.emplace_back(w);
    }
  }
  for (auto w : kContentFiller) {
    if (!lexicon_stems.contains(porter_stem(w))) f.content_words.emplace_back(w);
  }
  return f;
}

}  // namespace

std::vector<std::string> filler_vocabulary(const CompiledMatcher& matcher) {
  Filler f = make_filler(matcher);
  f.function_words.insert(f.function_words.end(), f.content_words.begin(), f.content_words.end());
  return f.function_words;
}

namespace {

// Surface phrases that score exactly one hit for their own scale.
std::array<std::vector<std::string>, kScaleCount> phrases_by_scale(const MoodLexicon& lexicon,
                                                                    const CompiledMatcher& matcher) {
  std::array<std::vector<std::string>, kScaleCount> out;
  for (const auto& e : lexicon.entries) {
    auto add = [&](const std::string& phrase) {
      const auto owner = matcher.find(stem_phrase(phrase));
      if (owner != CompiledMatcher::npos && matcher.scale_of(owner) == e.scale) {
        out[index_of(e.scale)].push_back(phrase);
      }
    };
    add(e.main_term);
    for (const auto& p : e.extended) add(p);
  }
  return out;
}

}  // namespace

std::vector<EmailRecord> generate_corpus(const SynthConfig& config, const MoodLexicon& lexicon) {
  if (config.last_year < config.first_year) {
    throw ConfigError(fmt::format("empty year range {}..{}", config.first_year, config.last_year));
  }
  if (config.emails_per_year == 0) throw ConfigError("emails_per_year must be >= 1");
  if (config.origin_year > config.first_year) {
    throw ConfigError("origin_year must not be after first_year");
  }

  const CompiledMatcher matcher = compile(lexicon);
  const auto phrases = phrases_by_scale(lexicon, matcher);
  const Filler filler = make_filler(matcher);
  if (filler.function_words.empty() || filler.content_words.empty()) {
    throw ConfigError("no filler word survives the lexicon filter");
  }
  for (const auto& spec : config.specs) {
    if (phrases[index_of(spec.dimension)].empty()) {
      throw ConfigError(
          fmt::format("scale '{}' has no usable lexicon phrases", to_string(spec.dimension)));
    }
  }

  namespace chr = std::chrono;
  const Date compose{chr::year{config.origin_year}, chr::January, chr::day{1}};

  std::vector<EmailRecord> records;
  records.reserve(static_cast<std::size_t>(config.last_year - config.first_year + 1) *
                  config.emails_per_year);
  for (int year = config.first_year; year <= config.last_year; ++year) {
    const int t = year - config.first_year;
    const chr::sys_days jan1{chr::year{year} / chr::January / 1};
    const auto days_in_year = (chr::sys_days{chr::year{year + 1} / chr::January / 1} - jan1).count();

    for (std::size_t idx = 0; idx < config.emails_per_year; ++idx) {
      detail::Rng rng(detail::derive_seed(config.seed, static_cast<std::uint64_t>(year), idx));

      std::vector<const std::string*> terms;
      for (const auto& spec : config.specs) {
        double intensity = evaluate(spec.profile, t);
        if (spec.noise_sd > 0.0) intensity += spec.noise_sd * rng.normal();
        const auto count = static_cast<std::size_t>(std::llround(std::max(0.0, intensity)));
        const auto& pool = phrases[index_of(spec.dimension)];
        for (std::size_t c = 0; c < count; ++c) terms.push_back(&pool[rng.below(pool.size())]);
      }
      for (std::size_t i = terms.size(); i > 1; --i) {
        std::swap(terms[i - 1], terms[rng.below(i)]);
      }

      // gaps[g] filler words go before term g; gaps[terms.size()] trail.
      std::vector<std::size_t> gaps(terms.size() + 1, 0);
      std::size_t spare = config.filler_words;
      for (std::size_t g = 1; g < terms.size(); ++g) {
        ++gaps[g];
        spare = spare > 0 ? spare - 1 : 0;
      }
      for (std::size_t f = 0; f < spare; ++f) ++gaps[rng.below(gaps.size())];

      std::string body;
      auto append = [&body](std::string_view w) {
        if (!body.empty()) body.push_back(' ');
        body.append(w);
      };
      for (std::size_t g = 0; g < gaps.size(); ++g) {
        for (std::size_t f = 0; f < gaps[g]; ++f) {
          const auto& pool = rng.below(4) != 0 ? filler.function_words : filler.content_words;
          append(pool[rng.below(pool.size())]);
        }
        if (g < terms.size()) append(*terms[g]);
      }

      const auto offset = static_cast<int>(rng.below(static_cast<std::uint64_t>(days_in_year)));
      const Date delivery{jan1 + chr::days{offset}};
      records.push_back(EmailRecord{fmt::format("synth-{}-{:05d}", year, idx), compose, delivery,
                                    std::move(body)});
    }
  }
  return records;
}

}  // namespace moodscope
