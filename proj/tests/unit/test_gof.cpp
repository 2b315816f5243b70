#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "recint/gof.hpp"
#include "recint/rng.hpp"
#include "recint/synth.hpp"

namespace recint {
namespace {

std::vector<double> calibrated(std::size_t n, double x_min, double delta) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = pareto_quantile((i + 0.5) / n, x_min, delta);
  std::sort(x.begin(), x.end());
  return x;
}

TEST(Quantile, InverseCdf) {
  EXPECT_DOUBLE_EQ(pareto_quantile(0.75, 1.0, 2.0), 4.0);
  EXPECT_NEAR(power_law_cdf(pareto_quantile(0.3, 2.0, 2.7), 2.0, 2.7), 0.3, 1e-14);
}

TEST(Ksw, CalibratedQuantilesAttainExtreme) {
  const std::size_t n = 200;
  const auto x = calibrated(n, 1.0, 2.5);
  const double u1 = 0.5 / n;
  EXPECT_NEAR(ksw_distance(x, 1.0, 2.5), (1.0 / (2.0 * n)) / std::sqrt(u1 * (1 - u1)), 1e-9);
}

TEST(Ksw, DominatesKs) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto x = pareto_sample(300, 2.0, 1.0, seed);
    EXPECT_GE(ksw_distance(x, 1.0, 2.3), ks_distance(x, 1.0, 2.3));
  }
}

TEST(Ksw, MedianPointDoublesKs) {
  const std::vector<double> x{pareto_quantile(0.5, 1.0, 2.0)};
  EXPECT_NEAR(ksw_distance(x, 1.0, 2.0), 2.0 * ks_distance(x, 1.0, 2.0), 1e-12);
}

TEST(Cvm, CalibratedIsMinimal) {
  const std::vector<double> u{0.25, 0.75};
  EXPECT_NEAR(cvm_from_uniforms(u), 1.0 / 24.0, 1e-15);
  for (std::size_t n : {1u, 7u, 1000u}) {
    EXPECT_NEAR(cvm_statistic(calibrated(n, 1.0, 2.5), 1.0, 2.5), 1.0 / (12.0 * n), 1e-12);
  }
}

TEST(Cvm, WorstCase) {
  const std::size_t n = 9;
  const std::vector<double> u(n, 0.0);
  EXPECT_NEAR(cvm_from_uniforms(u), 1.0 / (12.0 * n) + (4.0 * n * n - 1.0) / (12.0 * n), 1e-12);
}

TEST(Cvm, DecisionBoundary) {
  EXPECT_TRUE(cvm_passes(0.74));
  EXPECT_FALSE(cvm_passes(0.75));
}

PowerLawFit pareto_fit(std::size_t n) {
  PowerLawFit fit;
  fit.x_min = 1.0;
  fit.delta = 2.5;
  fit.n_tail = n;
  fit.n_total = n;
  return fit;
}

TEST(Bootstrap, ExtremeObservedValues) {
  const auto fit = pareto_fit(200);
  EXPECT_DOUBLE_EQ(bootstrap_pvalue(fit, GofStatistic::ks, 0.0, 200, 1), 1.0);
  EXPECT_DOUBLE_EQ(bootstrap_pvalue(fit, GofStatistic::ks, 1.0, 200, 1), 0.0);
}

TEST(Bootstrap, DeterministicAcrossThreads) {
  const auto fit = pareto_fit(500);
  const auto a = bootstrap_replicates(fit, 300, 42, 1);
  const auto b = bootstrap_replicates(fit, 300, 42, 3);
  EXPECT_EQ(a.ks, b.ks);
  EXPECT_EQ(a.ksw, b.ksw);
  EXPECT_NE(a.ks, bootstrap_replicates(fit, 300, 43, 1).ks);
}

TEST(Bootstrap, PValuesMultiplesOfResolutionAndAntitone) {
  const auto fit = pareto_fit(300);
  const auto reps = bootstrap_replicates(fit, 250, 3);
  double last = 1.0;
  for (double obs = 0.0; obs < 0.2; obs += 0.005) {
    const double p = pvalue_from_replicates(reps.ks, obs);
    EXPECT_NEAR(p * 250.0, std::round(p * 250.0), 1e-9);
    EXPECT_LE(p, last);
    last = p;
  }
}

TEST(Gof, Report) {
  const auto x = pareto_sample(2000, 2.5, 1.0, 10);
  auto fit = fit_fixed_xmin(x, 1.0);
  const auto r = goodness_of_fit(x, fit, 50, 9);
  EXPECT_EQ(r.n_boot, 50u);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.pass_ks, r.p_ks > kSignificance);
  EXPECT_EQ(r.pass_ksw, r.p_ksw > kSignificance);
  EXPECT_EQ(r.pass_cvm, r.w2 < kCvmCritical);
  EXPECT_GE(r.ksw, r.ks);
}

TEST(Gof, ParetoPassesExponentialFails) {
  int pareto_pass = 0;
  int expo_fail = 0;
  const int runs = 100;
  for (int r = 0; r < runs; ++r) {
    const auto x = pareto_sample(1000, 2.5, 1.0, 300 + r);
    const auto g = goodness_of_fit(x, fit_fixed_xmin(x, 1.0), 100, r);
    if (g.pass_ks && g.pass_ksw && g.pass_cvm) ++pareto_pass;

    CounterRng rng(700 + r);
    std::vector<double> e(1000);
    for (auto& v : e) v = 1.0 - std::log(rng.uniform());
    const auto ge = goodness_of_fit(e, fit_fixed_xmin(e, 1.0), 100, r);
    if (!ge.pass_ks || !ge.pass_ksw || !ge.pass_cvm) ++expo_fail;
  }
  EXPECT_GE(pareto_pass, 95);
  EXPECT_GE(expo_fail, 95);
}

}  // namespace
}  // namespace recint
