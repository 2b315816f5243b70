#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recint {

// Error categories double as process exit codes for the CLI.
enum class ErrorKind : int {
  config = 1,
  ingest = 2,
  statistics = 3,
  io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed input text. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Thrown when a threshold produces fewer than two exceedances.
class InsufficientExceedances : public Error {
 public:
  InsufficientExceedances(double q, std::size_t count)
      : Error(ErrorKind::statistics, "threshold q=" + format_threshold(q) + " yields " +
                                         std::to_string(count) +
                                         " exceedance(s); at least 2 are required"),
        q_(q),
        count_(count) {}

  double q() const noexcept { return q_; }
  std::size_t count() const noexcept { return count_; }

 private:
  static std::string format_threshold(double q) {
    std::string s = std::to_string(q);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  double q_;
  std::size_t count_;
};

}  // namespace recint
