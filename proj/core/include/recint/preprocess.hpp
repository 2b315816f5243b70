#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recint/ingest.hpp"

namespace recint {

enum class SeriesSource { volume, abs_return, generic };

// Cross-day mean of a per-minute quantity, a[s] > 0 for every s.
struct IntradayProfile {
  std::vector<double> a;

  std::size_t size() const { return a.size(); }
};

// Event-magnitude series on the concatenated trading-minute axis t.
//
// For abs_return sources `defined` marks minutes that carry a return (the
// first minute of each session does not); an empty mask means all defined.
struct NormalizedSeries {
  std::vector<double> v;
  std::vector<std::size_t> day_boundaries;
  SeriesSource source = SeriesSource::generic;
  std::vector<std::uint8_t> defined;
  // Standard deviation divided out of the input.
  double scale = 1.0;

  std::size_t size() const { return v.size(); }
  bool is_defined(std::size_t t) const { return defined.empty() || defined[t] != 0; }
  std::size_t defined_count() const;

  // Wraps already-normalized values (synthetic data, tests) as a one-day series.
  static NormalizedSeries from_values(std::vector<double> values, SeriesSource source = SeriesSource::generic);
};

// a[s] = mean over days of grid(d, s). Throws on any a[s] == 0.
IntradayProfile intraday_profile(const DayGrid& grid);

// V'_d(s) = V_d(s) / a[s].
DayGrid deseasonalize(const DayGrid& grid, const IntradayProfile& profile);

// v(t) = V'(t) / sqrt(<V'^2> - <V'>^2) over the concatenated axis, population variance.
NormalizedSeries normalize(const DayGrid& grid, SeriesSource source = SeriesSource::volume);

// |r(t)| / sigma_r with sigma_r the population standard deviation of the
// defined returns. No intraday adjustment is applied to returns.
NormalizedSeries normalize_returns(const ReturnSeries& returns);

// ingest -> profile -> deseasonalize -> normalize for the volume column.
NormalizedSeries normalized_volume(const MinuteBarSeries& series);
NormalizedSeries normalized_abs_returns(const MinuteBarSeries& series);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
  std::size_t n = 0;
};

Moments population_moments(std::span<const double> values);

}  // namespace recint
