#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "recint/intervals.hpp"
#include "recint/preprocess.hpp"

namespace recint {

enum class CorrelationKind { pearson, spearman };

struct IntervalReturnCorrelation {
  double q = 0.0;
  double c = 0.0;
  std::size_t n_pairs = 0;
};

// Correlation between |r| at each interval's opening minute and the interval
// length. Intervals opening on a minute without a return are dropped.
IntervalReturnCorrelation interval_return_correlation(const RecurrenceIntervalSeries& ris, const NormalizedSeries& r,
                                                      CorrelationKind kind = CorrelationKind::pearson,
                                                      std::size_t min_pairs = 30);

struct ComovementPoint {
  double Q = 0.0;
  double p = 0.0;          // n_kept / n_tau
  std::size_t n_kept = 0;  // intervals with |r| > Q at both ends
};

struct ComovementCurve {
  double q = 0.0;
  std::size_t n_tau_raw = 0;  // all intervals of v above q
  std::size_t n_tau = 0;      // intervals whose both ends carry a return
  std::vector<ComovementPoint> points;
};

// P(tau | |r| > Q) = N_{tau, |r|>Q} / N_tau for each Q. Q = 0 is the
// unconditioned baseline and always yields 1.
ComovementCurve comovement_probability(const NormalizedSeries& v, const NormalizedSeries& r, double q,
                                       std::span<const double> q_grid);

// Q = 0 followed by `count` log-spaced points from `lo` to the `upper_quantile`
// quantile of the defined |r| values.
std::vector<double> default_comovement_grid(const NormalizedSeries& r, std::size_t count = 40, double lo = 0.1,
                                            double upper_quantile = 0.9999);

struct TracePoint {
  std::size_t offset = 0;
  double mean_v = 0.0;
};

struct VolumeTrace {
  double trigger = 0.0;
  std::size_t horizon = 0;
  std::size_t n_events = 0;
  std::vector<std::size_t> event_index;
  std::vector<TracePoint> points;
};

// Mean of v(t + 1 .. t + horizon) over trigger minutes t with |r(t)| > trigger
// and t + horizon inside the series. With `single_event` only the k-th
// qualifying trigger is traced.
VolumeTrace conditioned_volume_trace(const NormalizedSeries& v, const NormalizedSeries& r, double trigger,
                                     std::size_t horizon, std::optional<std::size_t> single_event = std::nullopt);

}  // namespace recint
