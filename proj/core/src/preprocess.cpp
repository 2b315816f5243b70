#include "recint/preprocess.hpp"

#include <fmt/format.h>

#include <cmath>

namespace recint {

std::size_t NormalizedSeries::defined_count() const {
  if (defined.empty()) return v.size();
  std::size_t n = 0;
  for (auto d : defined) n += d != 0;
  return n;
}

NormalizedSeries NormalizedSeries::from_values(std::vector<double> values, SeriesSource source) {
  NormalizedSeries s;
  s.v = std::move(values);
  s.day_boundaries = {0};
  s.source = source;
  return s;
}

Moments population_moments(std::span<const double> values) {
  Moments m;
  m.n = values.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double x : values) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  double ss = 0.0;
  for (double x : values) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(m.n);
  return m;
}

IntradayProfile intraday_profile(const DayGrid& grid) {
  if (grid.days() == 0) throw Error(ErrorKind::statistics, "intraday profile needs at least one complete day");
  IntradayProfile profile;
  profile.a.assign(grid.minutes(), 0.0);
  for (std::size_t d = 0; d < grid.days(); ++d) {
    const auto row = grid.row(d);
    for (std::size_t s = 0; s < row.size(); ++s) profile.a[s] += row[s];
  }
  const auto n = static_cast<double>(grid.days());
  for (std::size_t s = 0; s < profile.a.size(); ++s) {
    profile.a[s] /= n;
    if (!(profile.a[s] > 0.0)) {
      throw Error(ErrorKind::statistics,
                  fmt::format("degenerate intraday profile: minute {} averages to zero (dead minute?)", s));
    }
  }
  return profile;
}

DayGrid deseasonalize(const DayGrid& grid, const IntradayProfile& profile) {
  if (profile.size() != grid.minutes()) {
    throw Error(ErrorKind::statistics, fmt::format("profile has {} minutes but grid has {}", profile.size(), grid.minutes()));
  }
  DayGrid out(grid.days(), grid.minutes());
  for (std::size_t d = 0; d < grid.days(); ++d) {
    for (std::size_t s = 0; s < grid.minutes(); ++s) out.at(d, s) = grid.at(d, s) / profile.a[s];
  }
  return out;
}

NormalizedSeries normalize(const DayGrid& grid, SeriesSource source) {
  const auto values = grid.flat();
  const Moments m = population_moments(values);
  if (!(m.variance > 0.0)) throw Error(ErrorKind::statistics, "cannot normalize: zero variance");
  const double sd = std::sqrt(m.variance);
  NormalizedSeries out;
  out.source = source;
  out.scale = sd;
  out.v.reserve(values.size());
  for (double x : values) out.v.push_back(x / sd);
  for (std::size_t d = 0; d < grid.days(); ++d) out.day_boundaries.push_back(d * grid.minutes());
  return out;
}

NormalizedSeries normalize_returns(const ReturnSeries& returns) {
  const auto defined = returns.within_session();
  const Moments m = population_moments(defined);
  if (!(m.variance > 0.0)) throw Error(ErrorKind::statistics, "cannot normalize returns: zero variance");
  const double sd = std::sqrt(m.variance);
  NormalizedSeries out;
  out.source = SeriesSource::abs_return;
  out.scale = sd;
  out.defined = returns.defined;
  out.v.resize(returns.size(), 0.0);
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (returns.defined[t]) out.v[t] = std::abs(returns.values[t]) / sd;
  }
  for (std::size_t d = 0; d < returns.days; ++d) out.day_boundaries.push_back(d * returns.minutes_per_day);
  return out;
}

NormalizedSeries normalized_volume(const MinuteBarSeries& series) {
  return normalize(deseasonalize(series.volume, intraday_profile(series.volume)), SeriesSource::volume);
}

NormalizedSeries normalized_abs_returns(const MinuteBarSeries& series) {
  return normalize_returns(to_returns(series));
}

}  // namespace recint
