#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recint/kvconfig.hpp"

namespace recint {

struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const Date&) const = default;

  // Accepts YYYY-MM-DD or YYYYMMDD.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;
  Date next_weekday() const;
};

// Half-open wall-clock range [open, close) in minutes after midnight.
struct Session {
  int open_minute = 0;
  int close_minute = 0;

  std::size_t slots() const { return static_cast<std::size_t>(close_minute - open_minute); }
  bool operator==(const Session&) const = default;
};

// Parses "HH:MM" or "HH:MM:SS" (seconds must be zero) into minutes after midnight.
std::optional<int> parse_clock(std::string_view text);
std::string format_clock(int minute_of_day);

// Trading sessions of one day. Every day of a dataset shares the calendar, so
// the minute-of-session index s runs over [0, minutes_per_day()).
class SessionCalendar {
 public:
  explicit SessionCalendar(std::vector<Session> sessions);

  // Shanghai/Shenzhen A-share hours: 09:30-11:30 and 13:00-15:00.
  static SessionCalendar a_share();
  // Parses "09:30-11:30".
  static Session parse_session(std::string_view text, std::size_t line = 0);

  std::span<const Session> sessions() const { return sessions_; }
  std::size_t session_count() const { return sessions_.size(); }
  std::size_t minutes_per_day() const { return minutes_per_day_; }

  std::optional<std::size_t> slot_of(int minute_of_day) const;
  int minute_of_day(std::size_t slot) const;
  // True when `slot` is the first minute of a session (no within-session return).
  bool opens_session(std::size_t slot) const;

  bool operator==(const SessionCalendar&) const = default;

 private:
  std::vector<Session> sessions_;
  std::vector<std::size_t> first_slot_;
  std::size_t minutes_per_day_ = 0;
};

// Row-major days x minutes grid of reals.
class DayGrid {
 public:
  DayGrid() = default;
  DayGrid(std::size_t days, std::size_t minutes, double fill = 0.0)
      : days_(days), minutes_(minutes), data_(days * minutes, fill) {}

  std::size_t days() const { return days_; }
  std::size_t minutes() const { return minutes_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::size_t day, std::size_t minute) { return data_[day * minutes_ + minute]; }
  double at(std::size_t day, std::size_t minute) const { return data_[day * minutes_ + minute]; }

  std::span<double> row(std::size_t day) { return {data_.data() + day * minutes_, minutes_}; }
  std::span<const double> row(std::size_t day) const { return {data_.data() + day * minutes_, minutes_}; }
  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  void append_row(std::span<const double> values);

  bool operator==(const DayGrid&) const = default;

 private:
  std::size_t days_ = 0;
  std::size_t minutes_ = 0;
  std::vector<double> data_;
};

struct MinuteBarSeries {
  std::vector<Date> days;
  DayGrid price;
  DayGrid volume;
  SessionCalendar calendar = SessionCalendar::a_share();

  std::size_t day_count() const { return days.size(); }
  std::size_t minutes_per_day() const { return calendar.minutes_per_day(); }

  // Throws Error(ingest) on any invariant violation.
  void validate() const;

  bool operator==(const MinuteBarSeries&) const = default;
};

enum class MissingMinutePolicy {
  drop,    // drop the incomplete day and record a warning
  fill,    // forward-fill price, zero volume
  strict,  // validation error
};

struct IngestConfig {
  char delimiter = ',';
  std::string date_column = "date";
  std::string time_column = "time";
  std::string price_column = "price";
  std::string volume_column = "volume";
  SessionCalendar calendar = SessionCalendar::a_share();
  MissingMinutePolicy missing = MissingMinutePolicy::drop;

  // Keys: delimiter, column.date, column.time, column.price, column.volume,
  // session (repeatable), missing_minutes = drop|fill|strict. Unrelated keys
  // are ignored so the same file can carry run settings.
  static IngestConfig from_kv(const KeyValueFile& kv);
  static IngestConfig load(const std::filesystem::path& path);
};

struct LoadedBars {
  MinuteBarSeries series;
  std::vector<std::string> warnings;
};

LoadedBars parse_minute_bars(std::istream& in, const IngestConfig& config);
LoadedBars load_minute_bars(const std::filesystem::path& path, const IngestConfig& config);

// Canonical format: header `date,time,price,volume`, one row per minute,
// shortest round-trip number formatting.
void write_canonical_csv(std::ostream& out, const MinuteBarSeries& series);
void write_canonical_csv(const std::filesystem::path& path, const MinuteBarSeries& series);

// Log returns on the concatenated minute axis. values[t] is the return ending
// at minute t; the first minute of every session has no return (defined=0).
struct ReturnSeries {
  std::size_t days = 0;
  std::size_t minutes_per_day = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> defined;

  std::size_t size() const { return values.size(); }
  // Defined returns only, in time order.
  std::vector<double> within_session() const;
  std::size_t defined_per_day(std::size_t day) const;
};

ReturnSeries to_returns(const MinuteBarSeries& series);

}  // namespace recint
