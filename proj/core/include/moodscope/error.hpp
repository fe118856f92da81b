#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moodscope {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (empty sample, too few points...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or command-line values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data failed validation. Carries every problem found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace moodscope
