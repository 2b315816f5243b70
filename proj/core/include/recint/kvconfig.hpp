#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recint/error.hpp"

namespace recint {

// Line-oriented `key = value` text with `#` comments. Keys may repeat
// (e.g. several `session` lines); order is preserved.
class KeyValueFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  KeyValueFile() = default;

  static KeyValueFile parse(std::istream& in, ErrorKind kind = ErrorKind::config);
  static KeyValueFile parse(std::string_view text, ErrorKind kind = ErrorKind::config);
  static KeyValueFile load(const std::filesystem::path& path, ErrorKind kind = ErrorKind::config);

  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(std::string_view key) const;

  // Last occurrence wins for single-valued keys.
  std::optional<std::string> get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;
  std::size_t line_of(std::string_view key) const;

  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  void add(std::string key, std::string value);

  // Rejects any key not listed; catches typos in hand-written configs.
  void require_known(const std::vector<std::string_view>& known) const;

  ErrorKind kind() const { return kind_; }

 private:
  std::vector<Entry> entries_;
  ErrorKind kind_ = ErrorKind::config;
};

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delimiter);
double parse_double(std::string_view s, ErrorKind kind, std::size_t line, std::string_view what);
long long parse_int(std::string_view s, ErrorKind kind, std::size_t line, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, ErrorKind kind, std::size_t line,
                                      std::string_view what);

}  // namespace recint
