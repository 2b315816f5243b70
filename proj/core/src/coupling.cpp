#include "recint/coupling.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "recint/stats.hpp"

namespace recint {

namespace {

void require_aligned(const NormalizedSeries& v, const NormalizedSeries& r) {
  if (v.size() != r.size()) {
    throw Error(ErrorKind::statistics,
                fmt::format("volume and return series are not aligned ({} vs {} minutes)", v.size(), r.size()));
  }
}

}  // namespace

IntervalReturnCorrelation interval_return_correlation(const RecurrenceIntervalSeries& ris, const NormalizedSeries& r,
                                                      CorrelationKind kind, std::size_t min_pairs) {
  std::vector<double> abs_r;
  std::vector<double> tau;
  for (std::size_t k = 0; k < ris.tau.size(); ++k) {
    const std::size_t t = ris.start_index[k];
    if (t >= r.size()) throw Error(ErrorKind::statistics, "interval start lies outside the return series");
    if (!r.is_defined(t)) continue;
    abs_r.push_back(std::abs(r.v[t]));
    tau.push_back(static_cast<double>(ris.tau[k]));
  }
  if (abs_r.size() < min_pairs) {
    throw Error(ErrorKind::statistics,
                fmt::format("q={}: {} interval/return pairs, at least {} required", ris.q, abs_r.size(), min_pairs));
  }
  const double c = kind == CorrelationKind::pearson ? pearson(abs_r, tau) : spearman(abs_r, tau);
  if (std::isnan(c)) throw Error(ErrorKind::statistics, fmt::format("q={}: correlation undefined (zero variance)", ris.q));
  return {ris.q, c, abs_r.size()};
}

ComovementCurve comovement_probability(const NormalizedSeries& v, const NormalizedSeries& r, double q,
                                       std::span<const double> q_grid) {
  require_aligned(v, r);
  const auto idx = exceedance_indices(v, q);
  ComovementCurve curve;
  curve.q = q;
  curve.n_tau_raw = idx.size() > 1 ? idx.size() - 1 : 0;

  // min(|r(t)|, |r(t+tau)|) > Q  <=>  both ends exceed Q.
  std::vector<double> weakest_end;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto a = idx[k - 1];
    const auto b = idx[k];
    if (!r.is_defined(a) || !r.is_defined(b)) continue;
    weakest_end.push_back(std::min(std::abs(r.v[a]), std::abs(r.v[b])));
  }
  curve.n_tau = weakest_end.size();
  if (curve.n_tau == 0) {
    throw Error(ErrorKind::statistics, fmt::format("q={}: no recurrence interval with returns at both ends", q));
  }
  std::sort(weakest_end.begin(), weakest_end.end());

  for (double Q : q_grid) {
    if (Q < 0.0) throw Error(ErrorKind::statistics, "comovement threshold Q must be non-negative");
    std::size_t kept = curve.n_tau;
    if (Q > 0.0) {
      kept = static_cast<std::size_t>(weakest_end.end() - std::upper_bound(weakest_end.begin(), weakest_end.end(), Q));
    }
    curve.points.push_back({Q, static_cast<double>(kept) / static_cast<double>(curve.n_tau), kept});
  }
  return curve;
}

std::vector<double> default_comovement_grid(const NormalizedSeries& r, std::size_t count, double lo,
                                            double upper_quantile) {
  std::vector<double> values;
  values.reserve(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (r.is_defined(t)) values.push_back(std::abs(r.v[t]));
  }
  std::vector<double> grid{0.0};
  if (values.empty() || count == 0) return grid;
  const double hi = quantile(std::move(values), upper_quantile);
  if (!(hi > lo)) return grid;
  if (count == 1) {
    grid.push_back(lo);
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo * std::exp(step * static_cast<double>(i)));
  return grid;
}

VolumeTrace conditioned_volume_trace(const NormalizedSeries& v, const NormalizedSeries& r, double trigger,
                                     std::size_t horizon, std::optional<std::size_t> single_event) {
  require_aligned(v, r);
  if (horizon == 0) throw Error(ErrorKind::statistics, "trace horizon must be positive");
  VolumeTrace trace;
  trace.trigger = trigger;
  trace.horizon = horizon;
  double max_r = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!r.is_defined(t)) continue;
    const double magnitude = std::abs(r.v[t]);
    max_r = std::max(max_r, magnitude);
    if (magnitude > trigger && t + horizon < v.size()) trace.event_index.push_back(t);
  }
  if (trace.event_index.empty()) {
    throw Error(ErrorKind::statistics,
                fmt::format("no trigger event with |r| > {} and {} minutes of follow-up (max |r| = {})", trigger,
                            horizon, max_r));
  }
  if (single_event) {
    if (*single_event >= trace.event_index.size()) {
      throw Error(ErrorKind::statistics,
                  fmt::format("event {} requested but only {} trigger events exist", *single_event, trace.event_index.size()));
    }
    trace.event_index = {trace.event_index[*single_event]};
  }
  trace.n_events = trace.event_index.size();
  trace.points.resize(horizon);
  for (std::size_t h = 1; h <= horizon; ++h) {
    double sum = 0.0;
    for (auto t : trace.event_index) sum += v.v[t + h];
    trace.points[h - 1] = {h, sum / static_cast<double>(trace.n_events)};
  }
  return trace;
}

}  // namespace recint
