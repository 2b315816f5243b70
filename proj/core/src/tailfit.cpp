#include "recint/tailfit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "recint/intervals.hpp"
#include "recint/parallel.hpp"

namespace recint {

std::vector<double> pooled_scaled_sample(const NormalizedSeries& series, std::span<const double> q_list) {
  if (q_list.empty()) throw Error(ErrorKind::config, "threshold list is empty");
  std::vector<double> pooled;
  for (double q : q_list) {
    const auto x = scaled_intervals(extract_intervals(series, q));
    pooled.insert(pooled.end(), x.begin(), x.end());
  }
  return pooled;
}

MleEstimate mle_delta(std::span<const double> x, double x_min) {
  if (!(x_min > 0.0)) throw Error(ErrorKind::statistics, "x_min must be positive");
  double sum_log = 0.0;
  std::size_t n = 0;
  const double log_min = std::log(x_min);
  for (double value : x) {
    if (value >= x_min) {
      sum_log += std::log(value) - log_min;
      ++n;
    }
  }
  if (n < 2) throw Error(ErrorKind::statistics, fmt::format("MLE needs at least 2 samples >= x_min={}, got {}", x_min, n));
  if (!(sum_log > 0.0)) throw Error(ErrorKind::statistics, "MLE diverges: every tail sample equals x_min");
  MleEstimate est;
  est.n = n;
  est.delta = 1.0 + static_cast<double>(n) / sum_log;
  est.delta_se = (est.delta - 1.0) / std::sqrt(static_cast<double>(n));
  return est;
}

double power_law_cdf(double x, double x_min, double delta) {
  if (x <= x_min) return 0.0;
  return 1.0 - std::pow(x / x_min, 1.0 - delta);
}

double ks_distance(std::span<const double> x, double x_min, double delta) {
  std::vector<double> tail;
  for (double value : x) {
    if (value >= x_min) tail.push_back(value);
  }
  if (tail.empty()) throw Error(ErrorKind::statistics, "KS distance needs a non-empty tail");
  std::sort(tail.begin(), tail.end());
  const auto n = static_cast<double>(tail.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = power_law_cdf(tail[i], x_min, delta);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    ks = std::max({ks, std::abs(above - f), std::abs(below - f)});
  }
  return ks;
}

namespace {

PowerLawFit make_fit(double x_min, double delta, double ks, std::size_t n_tail, std::size_t n_total) {
  PowerLawFit fit;
  fit.x_min = x_min;
  fit.delta = delta;
  fit.delta_se = (delta - 1.0) / std::sqrt(static_cast<double>(n_tail));
  fit.ks = ks;
  fit.n_tail = n_tail;
  fit.n_total = n_total;
  fit.c_pareto = (delta - 1.0) * std::pow(x_min, delta - 1.0);
  fit.c = fit.tail_fraction() * fit.c_pareto;
  return fit;
}

}  // namespace

PowerLawFit fit_tail(std::span<const double> x, double x_min_floor, std::size_t n_tail_floor, unsigned threads) {
  if (n_tail_floor < 2) n_tail_floor = 2;
  const std::size_t n = x.size();
  if (n < n_tail_floor) {
    throw Error(ErrorKind::statistics, fmt::format("tail fit needs at least {} samples, got {}", n_tail_floor, n));
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0.0)) throw Error(ErrorKind::statistics, "tail fit requires positive samples");

  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(sorted[i]);
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + logs[i];

  // First index of each distinct value inside the admissible range.
  std::vector<std::size_t> candidates;
  const std::size_t last = n - n_tail_floor;
  for (std::size_t j = 0; j <= last; ++j) {
    if (sorted[j] < x_min_floor) continue;
    if (j > 0 && sorted[j] == sorted[j - 1]) continue;
    candidates.push_back(j);
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::statistics,
                fmt::format("no x_min candidate >= {} keeps {} tail samples", x_min_floor, n_tail_floor));
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> delta(candidates.size(), 0.0);
  std::vector<double> ks(candidates.size(), kInf);
  // Shared bound for pruning: a candidate is abandoned only once its partial
  // KS strictly exceeds a KS some candidate has achieved, so it cannot be the
  // argmin and the result does not depend on scheduling.
  std::atomic<double> best{kInf};

  parallel_for(candidates.size(), threads, [&](std::size_t c) {
    const std::size_t j = candidates[c];
    const std::size_t n_tail = n - j;
    const double log_min = logs[j];
    const double sum_log = suffix[j] - static_cast<double>(n_tail) * log_min;
    if (!(sum_log > 0.0)) return;
    const double d = 1.0 + static_cast<double>(n_tail) / sum_log;
    delta[c] = d;
    const double inv_n = 1.0 / static_cast<double>(n_tail);
    double bound = best.load(std::memory_order_relaxed);
    double sup = 0.0;
    for (std::size_t i = j; i < n; ++i) {
      const double f = -std::expm1((1.0 - d) * (logs[i] - log_min));
      const double below = static_cast<double>(i - j) * inv_n;
      const double above = static_cast<double>(i - j + 1) * inv_n;
      sup = std::max({sup, std::abs(above - f), std::abs(below - f)});
      if (sup > bound) {
        bound = best.load(std::memory_order_relaxed);
        if (sup > bound) return;
      }
    }
    ks[c] = sup;
    double current = best.load(std::memory_order_relaxed);
    while (sup < current && !best.compare_exchange_weak(current, sup, std::memory_order_relaxed)) {
    }
  });

  std::size_t winner = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (ks[c] < kInf && (winner == candidates.size() || ks[c] < ks[winner])) winner = c;
  }
  if (winner == candidates.size()) throw Error(ErrorKind::statistics, "every x_min candidate gave a divergent MLE");
  const std::size_t j = candidates[winner];
  return make_fit(sorted[j], delta[winner], ks[winner], n - j, n);
}

PowerLawFit fit_fixed_xmin(std::span<const double> x, double x_min) {
  const auto mle = mle_delta(x, x_min);
  return make_fit(x_min, mle.delta, ks_distance(x, x_min, mle.delta), mle.n, x.size());
}

}  // namespace recint
