#include "recint/memory.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recint/intervals.hpp"
#include "recint/parallel.hpp"
#include "recint/rng.hpp"

namespace recint {

std::vector<std::size_t> default_dfa_scales(std::size_t n, std::size_t count) {
  const std::size_t top = n / 4;
  if (top < 4) throw Error(ErrorKind::statistics, fmt::format("series of length {} is too short for DFA", n));
  std::vector<std::size_t> scales;
  if (count < 2 || top == 4) return {4};
  const double ratio = std::log(static_cast<double>(top) / 4.0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const auto l = static_cast<std::size_t>(std::llround(4.0 * std::exp(ratio * static_cast<double>(i))));
    const auto clamped = std::clamp<std::size_t>(l, 4, top);
    if (scales.empty() || clamped > scales.back()) scales.push_back(clamped);
  }
  return scales;
}

namespace {

// Orthonormal polynomial basis of degree 0..order on l equally spaced points.
std::vector<std::vector<double>> polynomial_basis(std::size_t l, int order) {
  std::vector<std::vector<double>> basis;
  const double half = 0.5 * static_cast<double>(l - 1);
  for (int degree = 0; degree <= order; ++degree) {
    std::vector<double> e(l);
    for (std::size_t i = 0; i < l; ++i) e[i] = std::pow((static_cast<double>(i) - half) / half, degree);
    // Modified Gram-Schmidt, applied twice for stability at high degree.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double dot = std::inner_product(e.begin(), e.end(), b.begin(), 0.0);
        for (std::size_t i = 0; i < l; ++i) e[i] -= dot * b[i];
      }
    }
    const double norm = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
    for (double& value : e) value /= norm;
    basis.push_back(std::move(e));
  }
  return basis;
}

double window_rss(std::span<const double> y, const std::vector<std::vector<double>>& basis, std::vector<double>& r) {
  r.assign(y.begin(), y.end());
  for (const auto& b : basis) {
    const double dot = std::inner_product(r.begin(), r.end(), b.begin(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= dot * b[i];
  }
  return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
}

}  // namespace

DfaResult dfa(std::span<const double> series, std::span<const std::size_t> scales, int order,
              std::optional<std::pair<std::size_t, std::size_t>> fit_range, unsigned threads) {
  if (order < 1) throw Error(ErrorKind::statistics, "DFA order must be at least 1");
  if (scales.empty()) throw Error(ErrorKind::statistics, "DFA needs at least one scale");
  const std::size_t n = series.size();
  const std::size_t max_scale = *std::max_element(scales.begin(), scales.end());
  if (n < 4 * max_scale) {
    throw Error(ErrorKind::statistics,
                fmt::format("DFA series of length {} too short for scale {}; max feasible scale is {}", n, max_scale, n / 4));
  }
  for (auto l : scales) {
    if (l < 4 || l < static_cast<std::size_t>(order) + 2) {
      throw Error(ErrorKind::statistics, fmt::format("DFA scale {} below minimum {}", l, std::max(4, order + 2)));
    }
  }

  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> profile(n);
  double running = 0.0;
  double profile_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += series[k] - mean;
    profile[k] = running;
    profile_sq += running * running;
  }
  const double profile_rms = std::sqrt(profile_sq / static_cast<double>(n));

  DfaResult result;
  result.order = order;
  result.scales.assign(scales.begin(), scales.end());
  result.fluctuation.assign(scales.size(), 0.0);

  parallel_for(scales.size(), threads, [&](std::size_t idx) {
    const std::size_t l = scales[idx];
    const auto basis = polynomial_basis(l, order);
    const std::size_t windows = n / l;
    const std::span<const double> y(profile);
    std::vector<double> scratch;
    double rss = 0.0;
    for (std::size_t w = 0; w < windows; ++w) {
      rss += window_rss(y.subspan(w * l, l), basis, scratch);
      rss += window_rss(y.subspan(n - (w + 1) * l, l), basis, scratch);
    }
    double f = std::sqrt(rss / static_cast<double>(2 * windows * l));
    // Residue at round-off level of the profile counts as exactly zero.
    if (!(f > 1e-10 * profile_rms)) f = 0.0;
    result.fluctuation[idx] = f;
  });

  const auto range = fit_range.value_or(std::pair<std::size_t, std::size_t>{0, scales.size() - 1});
  if (range.first > range.second || range.second >= scales.size()) {
    throw Error(ErrorKind::statistics, "DFA fit range outside the scale grid");
  }
  result.fit_range = range;
  const std::size_t points = range.second - range.first + 1;
  bool degenerate = points < 2;
  for (std::size_t i = range.first; i <= range.second; ++i) degenerate = degenerate || result.fluctuation[i] <= 0.0;
  if (!degenerate) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = range.first; i <= range.second; ++i) {
      sx += std::log(static_cast<double>(result.scales[i]));
      sy += std::log(result.fluctuation[i]);
    }
    const double mx = sx / static_cast<double>(points);
    const double my = sy / static_cast<double>(points);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = range.first; i <= range.second; ++i) {
      const double dx = std::log(static_cast<double>(result.scales[i])) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(result.fluctuation[i]) - my);
    }
    const double slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = range.first; i <= range.second; ++i) {
      const double fitted = my + slope * (std::log(static_cast<double>(result.scales[i])) - mx);
      const double e = std::log(result.fluctuation[i]) - fitted;
      sse += e * e;
    }
    result.alpha = slope;
    result.alpha_se = points > 2 ? std::sqrt(sse / static_cast<double>(points - 2) / sxx) : 0.0;
  }
  return result;
}

DfaResult dfa(std::span<const double> series, int order, unsigned threads) {
  const auto scales = default_dfa_scales(series.size());
  return dfa(series, scales, order, std::nullopt, threads);
}

std::vector<std::size_t> shuffle_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng rng(seed, 0x5348554646ULL);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::vector<double> shuffle(std::span<const double> series, std::uint64_t seed) {
  const auto perm = shuffle_permutation(series.size(), seed);
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = series[perm[i]];
  return out;
}

namespace {

std::vector<double> as_doubles(const std::vector<std::int64_t>& tau) {
  return {tau.begin(), tau.end()};
}

}  // namespace

MemoryReport interval_memory_report(const NormalizedSeries& v, std::span<const double> q_list, std::uint64_t seed,
                                    std::size_t min_intervals, unsigned threads) {
  if (q_list.empty()) throw Error(ErrorKind::config, "threshold list is empty");
  min_intervals = std::max<std::size_t>(min_intervals, 16);

  NormalizedSeries shuffled = v;
  const auto perm = shuffle_permutation(v.size(), seed);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.v[i] = v.v[perm[i]];
    if (!v.defined.empty()) shuffled.defined[i] = v.defined[perm[i]];
  }

  MemoryReport report;
  for (double q : q_list) {
    const auto raw_idx = exceedance_indices(v, q);
    if (raw_idx.size() < min_intervals + 1) {
      report.warnings.push_back(fmt::format("q={}: {} intervals, below the {} needed for DFA; skipped", q,
                                            raw_idx.empty() ? 0 : raw_idx.size() - 1, min_intervals));
      continue;
    }
    const auto raw = extract_intervals(v, q);
    const auto shuf = extract_intervals(shuffled, q);
    IntervalMemory entry;
    entry.q = q;
    entry.exceedances = raw.exceedances();
    entry.shuffled_exceedances = shuf.exceedances();
    entry.raw = dfa(as_doubles(raw.tau), 1, threads);
    entry.shuffled = dfa(as_doubles(shuf.tau), 1, threads);
    report.per_q.push_back(std::move(entry));
  }
  if (report.per_q.empty()) {
    throw Error(ErrorKind::statistics, fmt::format("no threshold has at least {} intervals for DFA", min_intervals));
  }
  if (v.size() >= 16) report.series = dfa(v.v, 1, threads);
  return report;
}

}  // namespace recint
