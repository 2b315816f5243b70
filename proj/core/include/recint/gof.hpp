#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recint/tailfit.hpp"

namespace recint {

// 1% critical value of the Cramer-von Mises W^2 statistic.
inline constexpr double kCvmCritical = 0.743;
inline constexpr double kSignificance = 0.01;
inline constexpr std::size_t kDefaultBootstrap = 1000;

enum class GofStatistic { ks, ksw };

// sup |F - F_PL| / sqrt(F_PL (1 - F_PL)) over both one-sided limits at each
// tail sample; points where F_PL is exactly 0 or 1 are skipped.
double ksw_distance(std::span<const double> x, double x_min, double delta);

// W^2 = 1/(12N) + sum_i (F_PL(x_(i)) - (2i-1)/(2N))^2 over the ascending tail.
double cvm_statistic(std::span<const double> x, double x_min, double delta);
// The same sum taken directly over probability-integral values u_i.
double cvm_from_uniforms(std::span<const double> u);

inline bool cvm_passes(double w2) { return w2 < kCvmCritical; }

// F_PL^-1(u) = x_min (1 - u)^(-1/(delta-1)).
double pareto_quantile(double u, double x_min, double delta);

struct ReplicateStatistics {
  std::vector<double> ks;
  std::vector<double> ksw;
};

// Replicate b draws fit.n_tail samples from Pareto(fit.delta, fit.x_min) using
// CounterRng(seed, b), refits delta with x_min fixed, and scores the replicate
// against its own refit.
ReplicateStatistics bootstrap_replicates(const PowerLawFit& fit, std::size_t n_boot, std::uint64_t seed,
                                         unsigned threads = 1);

// #{sim > observed} / sims.size()
double pvalue_from_replicates(std::span<const double> sims, double observed);

double bootstrap_pvalue(const PowerLawFit& fit, GofStatistic statistic, double observed,
                        std::size_t n_boot = kDefaultBootstrap, std::uint64_t seed = 0, unsigned threads = 1);

struct GofReport {
  double ks = 0.0;
  double ksw = 0.0;
  double p_ks = 0.0;
  double p_ksw = 0.0;
  double w2 = 0.0;
  std::size_t n_boot = 0;
  std::uint64_t seed = 0;
  bool pass_ks = false;
  bool pass_ksw = false;
  bool pass_cvm = false;
  std::vector<std::string> warnings;
};

// Observed KS, KSW and W^2 of `x` against `fit`, bootstrap p-values from one
// shared replicate set, and decisions at the 1% level.
GofReport goodness_of_fit(std::span<const double> x, const PowerLawFit& fit, std::size_t n_boot = kDefaultBootstrap,
                          std::uint64_t seed = 0, unsigned threads = 1);

}  // namespace recint
