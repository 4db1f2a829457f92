#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conelab {

// Malformed input: wrong dimensions, unparsable numbers, bad JSON.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& path, const std::string& what)
      : InputError(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// An instance whose declared data violates one or more required identities.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search or loop hit its configured bound.
class GuardTripped : public std::runtime_error {
 public:
  GuardTripped(const std::string& guard, long limit)
      : std::runtime_error(guard + " guard tripped at " + std::to_string(limit)),
        guard_(guard), limit_(limit) {}
  const std::string& guard() const { return guard_; }
  long limit() const { return limit_; }

 private:
  std::string guard_;
  long limit_;
};

class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conelab
