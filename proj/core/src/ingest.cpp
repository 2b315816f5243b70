#include "recint/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace recint {

namespace {

unsigned parse_digits(std::string_view s, bool& ok) {
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  ok = ok && !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  return value;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  text = trim(text);
  std::string_view y, m, d;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    y = text.substr(0, 4);
    m = text.substr(5, 2);
    d = text.substr(8, 2);
  } else if (text.size() == 8) {
    y = text.substr(0, 4);
    m = text.substr(4, 2);
    d = text.substr(6, 2);
  } else {
    return std::nullopt;
  }
  bool ok = true;
  Date date{static_cast<int>(parse_digits(y, ok)), parse_digits(m, ok), parse_digits(d, ok)};
  if (!ok) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{date.year}, std::chrono::month{date.month},
                                        std::chrono::day{date.day}};
  if (!ymd.ok()) return std::nullopt;
  return date;
}

std::string Date::to_string() const { return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day); }

Date Date::next_weekday() const {
  using namespace std::chrono;
  sys_days d{year_month_day{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}}};
  do {
    d += days{1};
  } while (weekday{d} == Saturday || weekday{d} == Sunday);
  const year_month_day ymd{d};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day())};
}

std::optional<int> parse_clock(std::string_view text) {
  text = trim(text);
  const auto parts = split(text, ':');
  if (parts.size() != 2 && parts.size() != 3) return std::nullopt;
  bool ok = true;
  const unsigned h = parse_digits(parts[0], ok);
  const unsigned m = parse_digits(parts[1], ok);
  const unsigned s = parts.size() == 3 ? parse_digits(parts[2], ok) : 0;
  if (!ok || h > 24 || m > 59 || s != 0 || parts[1].size() != 2) return std::nullopt;
  const int minute = static_cast<int>(h * 60 + m);
  if (minute > 24 * 60) return std::nullopt;
  return minute;
}

std::string format_clock(int minute_of_day) {
  return fmt::format("{:02d}:{:02d}", minute_of_day / 60, minute_of_day % 60);
}

SessionCalendar::SessionCalendar(std::vector<Session> sessions) : sessions_(std::move(sessions)) {
  if (sessions_.empty()) throw Error(ErrorKind::config, "session calendar needs at least one session");
  int previous_close = -1;
  for (const auto& s : sessions_) {
    if (s.close_minute <= s.open_minute) {
      throw Error(ErrorKind::config, "session " + format_clock(s.open_minute) + "-" +
                                         format_clock(s.close_minute) + " is empty or reversed");
    }
    if (s.open_minute < previous_close) {
      throw Error(ErrorKind::config, "sessions overlap or are out of order at " + format_clock(s.open_minute));
    }
    previous_close = s.close_minute;
    first_slot_.push_back(minutes_per_day_);
    minutes_per_day_ += s.slots();
  }
}

SessionCalendar SessionCalendar::a_share() {
  return SessionCalendar({{9 * 60 + 30, 11 * 60 + 30}, {13 * 60, 15 * 60}});
}

Session SessionCalendar::parse_session(std::string_view text, std::size_t line) {
  const auto parts = split(trim(text), '-');
  if (parts.size() != 2) throw ParseError(ErrorKind::config, line, "session must look like HH:MM-HH:MM");
  const auto open = parse_clock(parts[0]);
  const auto close = parse_clock(parts[1]);
  if (!open || !close) throw ParseError(ErrorKind::config, line, "invalid session time '" + std::string(text) + "'");
  return {*open, *close};
}

std::optional<std::size_t> SessionCalendar::slot_of(int minute_of_day) const {
  for (std::size_t i = 0; i < sessions_.size(); ++i) {
    const auto& s = sessions_[i];
    if (minute_of_day >= s.open_minute && minute_of_day < s.close_minute) {
      return first_slot_[i] + static_cast<std::size_t>(minute_of_day - s.open_minute);
    }
  }
  return std::nullopt;
}

int SessionCalendar::minute_of_day(std::size_t slot) const {
  for (std::size_t i = sessions_.size(); i-- > 0;) {
    if (slot >= first_slot_[i]) return sessions_[i].open_minute + static_cast<int>(slot - first_slot_[i]);
  }
  return sessions_.front().open_minute;
}

bool SessionCalendar::opens_session(std::size_t slot) const {
  return std::find(first_slot_.begin(), first_slot_.end(), slot) != first_slot_.end();
}

void DayGrid::append_row(std::span<const double> values) {
  if (days_ == 0 && minutes_ == 0) minutes_ = values.size();
  if (values.size() != minutes_) throw Error(ErrorKind::ingest, "row length mismatch in day grid");
  data_.insert(data_.end(), values.begin(), values.end());
  ++days_;
}

void MinuteBarSeries::validate() const {
  const std::size_t m = minutes_per_day();
  if (days.empty()) throw Error(ErrorKind::ingest, "series has no trading days");
  if (price.days() != days.size() || volume.days() != days.size() || price.minutes() != m ||
      volume.minutes() != m) {
    throw Error(ErrorKind::ingest, "price/volume grids do not match the day list and calendar");
  }
  for (std::size_t d = 1; d < days.size(); ++d) {
    if (!(days[d - 1] < days[d])) throw Error(ErrorKind::ingest, "days not strictly increasing at " + days[d].to_string());
  }
  for (std::size_t d = 0; d < days.size(); ++d) {
    for (std::size_t s = 0; s < m; ++s) {
      const double p = price.at(d, s);
      const double v = volume.at(d, s);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::ingest, fmt::format("non-positive price on {} minute {}", days[d].to_string(), s));
      }
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::ingest, fmt::format("negative volume on {} minute {}", days[d].to_string(), s));
      }
    }
  }
}

IngestConfig IngestConfig::from_kv(const KeyValueFile& kv) {
  IngestConfig cfg;
  if (auto d = kv.get("delimiter")) {
    if (*d == "tab" || *d == "\\t") {
      cfg.delimiter = '\t';
    } else if (d->size() == 1) {
      cfg.delimiter = d->front();
    } else {
      throw ParseError(ErrorKind::config, kv.line_of("delimiter"), "delimiter must be one character or 'tab'");
    }
  }
  cfg.date_column = kv.get_or("column.date", cfg.date_column);
  cfg.time_column = kv.get_or("column.time", cfg.time_column);
  cfg.price_column = kv.get_or("column.price", cfg.price_column);
  cfg.volume_column = kv.get_or("column.volume", cfg.volume_column);

  std::vector<Session> sessions;
  for (const auto& e : kv.entries()) {
    if (e.key == "session") sessions.push_back(SessionCalendar::parse_session(e.value, e.line));
  }
  if (!sessions.empty()) cfg.calendar = SessionCalendar(std::move(sessions));

  if (auto policy = kv.get("missing_minutes")) {
    if (*policy == "drop") {
      cfg.missing = MissingMinutePolicy::drop;
    } else if (*policy == "fill") {
      cfg.missing = MissingMinutePolicy::fill;
    } else if (*policy == "strict") {
      cfg.missing = MissingMinutePolicy::strict;
    } else {
      throw ParseError(ErrorKind::config, kv.line_of("missing_minutes"),
                       "missing_minutes must be drop, fill or strict");
    }
  }
  return cfg;
}

IngestConfig IngestConfig::load(const std::filesystem::path& path) {
  return from_kv(KeyValueFile::load(path));
}

namespace {

struct DayBuffer {
  std::vector<double> price;
  std::vector<double> volume;
  std::vector<std::uint8_t> seen;
};

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw ParseError(ErrorKind::ingest, 1, "missing column '" + name + "' in header");
}

}  // namespace

LoadedBars parse_minute_bars(std::istream& in, const IngestConfig& config) {
  const std::size_t m = config.calendar.minutes_per_day();
  std::string raw;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!trim(raw).empty()) {
      header = split(trim(raw), config.delimiter);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::ingest, "input is empty");
  const std::size_t header_line = line_no;
  const std::size_t c_date = column_index(header, config.date_column);
  const std::size_t c_time = column_index(header, config.time_column);
  const std::size_t c_price = column_index(header, config.price_column);
  const std::size_t c_volume = column_index(header, config.volume_column);
  const std::size_t needed = std::max({c_date, c_time, c_price, c_volume}) + 1;

  std::map<Date, DayBuffer> buffers;
  std::size_t rows = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, config.delimiter);
    if (fields.size() < needed) {
      throw ParseError(ErrorKind::ingest, line_no,
                       fmt::format("expected at least {} fields, found {}", needed, fields.size()));
    }
    const auto date = Date::parse(fields[c_date]);
    if (!date) throw ParseError(ErrorKind::ingest, line_no, "invalid date '" + fields[c_date] + "'");
    const auto clock = parse_clock(fields[c_time]);
    if (!clock) throw ParseError(ErrorKind::ingest, line_no, "invalid time '" + fields[c_time] + "'");
    const double price = parse_double(fields[c_price], ErrorKind::ingest, line_no, "price");
    const double volume = parse_double(fields[c_volume], ErrorKind::ingest, line_no, "volume");
    if (!std::isfinite(price) || price <= 0.0) {
      throw ParseError(ErrorKind::ingest, line_no, "price must be positive, got " + std::string(trim(fields[c_price])));
    }
    if (!std::isfinite(volume) || volume < 0.0) {
      throw ParseError(ErrorKind::ingest, line_no, "volume must be non-negative, got " + std::string(trim(fields[c_volume])));
    }
    const auto slot = config.calendar.slot_of(*clock);
    if (!slot) throw ParseError(ErrorKind::ingest, line_no, "time " + format_clock(*clock) + " is outside the declared sessions");

    auto& day = buffers[*date];
    if (day.seen.empty()) {
      day.price.assign(m, 0.0);
      day.volume.assign(m, 0.0);
      day.seen.assign(m, 0);
    }
    if (day.seen[*slot]) {
      throw ParseError(ErrorKind::ingest, line_no, "duplicate minute " + format_clock(*clock) + " on " + date->to_string());
    }
    day.seen[*slot] = 1;
    day.price[*slot] = price;
    day.volume[*slot] = volume;
    ++rows;
  }
  if (rows == 0) throw ParseError(ErrorKind::ingest, header_line, "no data rows after header");

  LoadedBars out;
  out.series.calendar = config.calendar;
  out.series.price = DayGrid(0, m);
  out.series.volume = DayGrid(0, m);
  for (auto& [date, day] : buffers) {
    const auto present = static_cast<std::size_t>(std::count(day.seen.begin(), day.seen.end(), 1));
    if (present < m) {
      const std::size_t missing = m - present;
      switch (config.missing) {
        case MissingMinutePolicy::strict:
          throw Error(ErrorKind::ingest, fmt::format("day {} has {} of {} minutes", date.to_string(), present, m));
        case MissingMinutePolicy::drop:
          out.warnings.push_back(fmt::format("day {}: {} missing minute(s), day dropped", date.to_string(), missing));
          continue;
        case MissingMinutePolicy::fill: {
          const auto first = static_cast<std::size_t>(std::find(day.seen.begin(), day.seen.end(), 1) - day.seen.begin());
          double last_price = day.price[first];
          for (std::size_t s = 0; s < m; ++s) {
            if (day.seen[s]) {
              last_price = day.price[s];
            } else {
              day.price[s] = last_price;
              day.volume[s] = 0.0;
            }
          }
          out.warnings.push_back(fmt::format("day {}: {} missing minute(s) filled", date.to_string(), missing));
          break;
        }
      }
    }
    out.series.days.push_back(date);
    out.series.price.append_row(day.price);
    out.series.volume.append_row(day.volume);
  }
  if (out.series.days.empty()) throw Error(ErrorKind::ingest, "no complete trading day left after applying missing-minute policy");
  out.series.validate();
  return out;
}

LoadedBars load_minute_bars(const std::filesystem::path& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open input file " + path.string());
  try {
    return parse_minute_bars(in, config);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), 0, path.string() + ": " + e.what());
  }
}

void write_canonical_csv(std::ostream& out, const MinuteBarSeries& series) {
  out << "date,time,price,volume\n";
  const std::size_t m = series.minutes_per_day();
  std::string buffer;
  for (std::size_t d = 0; d < series.day_count(); ++d) {
    const std::string date = series.days[d].to_string();
    for (std::size_t s = 0; s < m; ++s) {
      buffer.clear();
      fmt::format_to(std::back_inserter(buffer), "{},{},{},{}\n", date,
                     format_clock(series.calendar.minute_of_day(s)), series.price.at(d, s), series.volume.at(d, s));
      out << buffer;
    }
  }
}

void write_canonical_csv(const std::filesystem::path& path, const MinuteBarSeries& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_canonical_csv(out, series);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::vector<double> ReturnSeries::within_session() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (defined[t]) out.push_back(values[t]);
  }
  return out;
}

std::size_t ReturnSeries::defined_per_day(std::size_t day) const {
  const auto first = defined.begin() + static_cast<std::ptrdiff_t>(day * minutes_per_day);
  return static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(minutes_per_day), 1));
}

ReturnSeries to_returns(const MinuteBarSeries& series) {
  const std::size_t m = series.minutes_per_day();
  ReturnSeries r;
  r.days = series.day_count();
  r.minutes_per_day = m;
  r.values.assign(r.days * m, 0.0);
  r.defined.assign(r.days * m, 0);
  for (std::size_t d = 0; d < r.days; ++d) {
    for (std::size_t s = 0; s < m; ++s) {
      const double p = series.price.at(d, s);
      if (!(p > 0.0)) throw Error(ErrorKind::ingest, fmt::format("non-positive price on {} minute {}", series.days[d].to_string(), s));
      if (series.calendar.opens_session(s)) continue;
      const std::size_t t = d * m + s;
      r.values[t] = std::log(p) - std::log(series.price.at(d, s - 1));
      r.defined[t] = 1;
    }
  }
  return r;
}

}  // namespace recint
