#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "recint/preprocess.hpp"

namespace recint {

// Continuous power-law tail f(x) = c x^-delta for x >= x_min.
struct PowerLawFit {
  double x_min = 0.0;
  double delta = 0.0;
  double delta_se = 0.0;
  // Amplitude against the full-sample density: p_tail (delta-1) x_min^(delta-1).
  double c = 0.0;
  // Amplitude of the Pareto normalized on [x_min, inf): (delta-1) x_min^(delta-1).
  double c_pareto = 0.0;
  double ks = 0.0;
  std::size_t n_tail = 0;
  std::size_t n_total = 0;

  double tail_fraction() const { return n_total ? static_cast<double>(n_tail) / static_cast<double>(n_total) : 0.0; }
};

// Scaled intervals of every threshold, concatenated in q order.
std::vector<double> pooled_scaled_sample(const NormalizedSeries& series, std::span<const double> q_list);

struct MleEstimate {
  double delta = 0.0;
  double delta_se = 0.0;
  std::size_t n = 0;
};

// delta = 1 + n / sum ln(x_i / x_min) over samples x_i >= x_min.
MleEstimate mle_delta(std::span<const double> x, double x_min);

// F_PL(x) = 1 - (x / x_min)^(1 - delta).
double power_law_cdf(double x, double x_min, double delta);

// Sup distance between the tail ECDF and F_PL, checking both one-sided limits
// at every sample.
double ks_distance(std::span<const double> x, double x_min, double delta);

// Scans distinct sample values in [x_min_floor, x_(n - n_tail_floor)] as
// x_min candidates and keeps the one with smallest KS (ties -> smaller x_min).
PowerLawFit fit_tail(std::span<const double> x, double x_min_floor, std::size_t n_tail_floor = 50,
                     unsigned threads = 1);

// Fit with x_min held at a known value (no scan).
PowerLawFit fit_fixed_xmin(std::span<const double> x, double x_min);

}  // namespace recint
