#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace recint {

// Pearson correlation with population moments; NaN if either margin is constant.
double pearson(std::span<const double> x, std::span<const double> y);
// Mid-ranks (1-based), ties share their average rank.
std::vector<double> ranks(std::span<const double> x);
double spearman(std::span<const double> x, std::span<const double> y);

// Linear-interpolated empirical quantile, p in [0, 1].
double quantile(std::vector<double> values, double p);

// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsTest {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample KS test of u against U(0,1).
KsTest ks_test_uniform(std::span<const double> u);
// Two-sample KS test, asymptotic p-value with the Stephens small-sample correction.
KsTest ks_test_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace recint
