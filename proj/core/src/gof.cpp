#include "recint/gof.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "recint/parallel.hpp"
#include "recint/rng.hpp"

namespace recint {

namespace {

std::vector<double> sorted_tail(std::span<const double> x, double x_min) {
  std::vector<double> tail;
  for (double value : x) {
    if (value >= x_min) tail.push_back(value);
  }
  if (tail.empty()) throw Error(ErrorKind::statistics, "goodness-of-fit statistic needs a non-empty tail");
  std::sort(tail.begin(), tail.end());
  return tail;
}

double ksw_sorted(std::span<const double> tail, double x_min, double delta) {
  const auto n = static_cast<double>(tail.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = power_law_cdf(tail[i], x_min, delta);
    if (f <= 0.0 || f >= 1.0) continue;
    const double weight = 1.0 / std::sqrt(f * (1.0 - f));
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    sup = std::max(sup, weight * std::max(std::abs(above - f), std::abs(below - f)));
  }
  return sup;
}

double ks_sorted(std::span<const double> tail, double x_min, double delta) {
  const auto n = static_cast<double>(tail.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = power_law_cdf(tail[i], x_min, delta);
    sup = std::max({sup, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return sup;
}

}  // namespace

double ksw_distance(std::span<const double> x, double x_min, double delta) {
  const auto tail = sorted_tail(x, x_min);
  return ksw_sorted(tail, x_min, delta);
}

double cvm_from_uniforms(std::span<const double> u) {
  if (u.empty()) throw Error(ErrorKind::statistics, "CvM statistic needs at least one sample");
  const auto n = static_cast<double>(u.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - (2.0 * static_cast<double>(i + 1) - 1.0) / (2.0 * n);
    w2 += d * d;
  }
  return w2;
}

double cvm_statistic(std::span<const double> x, double x_min, double delta) {
  auto tail = sorted_tail(x, x_min);
  for (double& value : tail) value = power_law_cdf(value, x_min, delta);
  return cvm_from_uniforms(tail);
}

double pareto_quantile(double u, double x_min, double delta) {
  return x_min * std::exp(-std::log1p(-u) / (delta - 1.0));
}

ReplicateStatistics bootstrap_replicates(const PowerLawFit& fit, std::size_t n_boot, std::uint64_t seed,
                                         unsigned threads) {
  if (!(fit.delta > 1.0) || !(fit.x_min > 0.0) || fit.n_tail < 2) {
    throw Error(ErrorKind::statistics, "bootstrap needs a valid power-law fit (delta > 1, x_min > 0, n_tail >= 2)");
  }
  ReplicateStatistics out;
  out.ks.assign(n_boot, 0.0);
  out.ksw.assign(n_boot, 0.0);
  const double exponent = -1.0 / (fit.delta - 1.0);
  parallel_for(n_boot, threads, [&](std::size_t b) {
    CounterRng rng(seed, b);
    std::vector<double> sample(fit.n_tail);
    // 1 - U is uniform too; drawing the survival level keeps tail resolution.
    for (double& value : sample) value = fit.x_min * std::pow(rng.uniform(), exponent);
    std::sort(sample.begin(), sample.end());
    const auto refit = mle_delta(sample, fit.x_min);
    out.ks[b] = ks_sorted(sample, fit.x_min, refit.delta);
    out.ksw[b] = ksw_sorted(sample, fit.x_min, refit.delta);
  });
  return out;
}

double pvalue_from_replicates(std::span<const double> sims, double observed) {
  if (sims.empty()) throw Error(ErrorKind::statistics, "no bootstrap replicates");
  const auto exceed = std::count_if(sims.begin(), sims.end(), [&](double s) { return s > observed; });
  return static_cast<double>(exceed) / static_cast<double>(sims.size());
}

double bootstrap_pvalue(const PowerLawFit& fit, GofStatistic statistic, double observed, std::size_t n_boot,
                        std::uint64_t seed, unsigned threads) {
  const auto reps = bootstrap_replicates(fit, n_boot, seed, threads);
  return pvalue_from_replicates(statistic == GofStatistic::ks ? reps.ks : reps.ksw, observed);
}

GofReport goodness_of_fit(std::span<const double> x, const PowerLawFit& fit, std::size_t n_boot, std::uint64_t seed,
                          unsigned threads) {
  if (n_boot == 0) throw Error(ErrorKind::config, "n_boot must be positive");
  GofReport report;
  report.n_boot = n_boot;
  report.seed = seed;
  if (n_boot < 100) {
    report.warnings.push_back(fmt::format("n_boot={} gives p-value resolution coarser than 0.01", n_boot));
  }
  const auto tail = sorted_tail(x, fit.x_min);
  report.ks = ks_sorted(tail, fit.x_min, fit.delta);
  report.ksw = ksw_sorted(tail, fit.x_min, fit.delta);
  report.w2 = cvm_statistic(tail, fit.x_min, fit.delta);

  const auto reps = bootstrap_replicates(fit, n_boot, seed, threads);
  report.p_ks = pvalue_from_replicates(reps.ks, report.ks);
  report.p_ksw = pvalue_from_replicates(reps.ksw, report.ksw);
  report.pass_ks = report.p_ks > kSignificance;
  report.pass_ksw = report.p_ksw > kSignificance;
  report.pass_cvm = cvm_passes(report.w2);
  return report;
}

}  // namespace recint
