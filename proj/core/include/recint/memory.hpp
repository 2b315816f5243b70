#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "recint/preprocess.hpp"

namespace recint {

struct DfaResult {
  std::vector<std::size_t> scales;
  std::vector<double> fluctuation;
  // Least-squares slope of ln F against ln l; empty when some F in the fit
  // range is zero (e.g. a signal the detrending annihilates).
  std::optional<double> alpha;
  double alpha_se = 0.0;
  // Inclusive indices into `scales`.
  std::pair<std::size_t, std::size_t> fit_range{0, 0};
  int order = 1;
};

// `count` log-spaced integer window sizes from 4 to n/4 (duplicates removed).
std::vector<std::size_t> default_dfa_scales(std::size_t n, std::size_t count = 20);

// Detrended fluctuation analysis of order `order`: profile of the mean-removed
// series, non-overlapping windows taken from both ends, least-squares
// polynomial removed per window, F(l) the root mean squared residual.
DfaResult dfa(std::span<const double> series, std::span<const std::size_t> scales, int order = 1,
              std::optional<std::pair<std::size_t, std::size_t>> fit_range = std::nullopt, unsigned threads = 1);
DfaResult dfa(std::span<const double> series, int order = 1, unsigned threads = 1);

// Fisher-Yates permutation driven by CounterRng(seed).
std::vector<double> shuffle(std::span<const double> series, std::uint64_t seed);
std::vector<std::size_t> shuffle_permutation(std::size_t n, std::uint64_t seed);

struct IntervalMemory {
  double q = 0.0;
  std::size_t exceedances = 0;
  std::size_t shuffled_exceedances = 0;
  DfaResult raw;       // intervals of the series as observed
  DfaResult shuffled;  // intervals re-extracted from the shuffled series
};

struct MemoryReport {
  std::vector<IntervalMemory> per_q;
  std::optional<DfaResult> series;  // DFA of v itself
  std::vector<std::string> warnings;
};

// Thresholds with fewer than `min_intervals` intervals are skipped with a
// warning; it is an error if all are.
MemoryReport interval_memory_report(const NormalizedSeries& v, std::span<const double> q_list, std::uint64_t seed,
                                    std::size_t min_intervals = 200, unsigned threads = 1);

}  // namespace recint
