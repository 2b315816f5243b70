#include "recint/kvconfig.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace recint {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, ErrorKind kind, std::size_t line, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(kind, line, "invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

long long parse_int(std::string_view s, ErrorKind kind, std::size_t line, std::string_view what) {
  s = trim(s);
  long long value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(kind, line, "invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

std::vector<double> parse_double_list(std::string_view s, ErrorKind kind, std::size_t line,
                                      std::string_view what) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item, kind, line, what));
  return out;
}

KeyValueFile KeyValueFile::parse(std::istream& in, ErrorKind kind) {
  KeyValueFile file;
  file.kind_ = kind;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(kind, line_no, "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(kind, line_no, "empty key");
    file.entries_.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return file;
}

KeyValueFile KeyValueFile::parse(std::string_view text, ErrorKind kind) {
  std::istringstream in{std::string(text)};
  return parse(in, kind);
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path, ErrorKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  return parse(in, kind);
}

bool KeyValueFile::contains(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
}

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->value;
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueFile::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.key == key) out.push_back(e.value);
  }
  return out;
}

std::size_t KeyValueFile::line_of(std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->line;
  }
  return 0;
}

std::string KeyValueFile::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  return v ? parse_double(*v, kind_, line_of(key), key) : fallback;
}

long long KeyValueFile::get_int(std::string_view key, long long fallback) const {
  auto v = get(key);
  return v ? parse_int(*v, kind_, line_of(key), key) : fallback;
}

bool KeyValueFile::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
  if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
  throw ParseError(kind_, line_of(key), "invalid boolean for " + std::string(key) + ": '" + *v + "'");
}

void KeyValueFile::add(std::string key, std::string value) {
  entries_.push_back({std::move(key), std::move(value), 0});
}

void KeyValueFile::require_known(const std::vector<std::string_view>& known) const {
  for (const auto& e : entries_) {
    if (std::find(known.begin(), known.end(), e.key) == known.end()) {
      throw ParseError(kind_, e.line, "unknown key '" + e.key + "'");
    }
  }
}

}  // namespace recint
