#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "recint/kvconfig.hpp"
#include "recint/parallel.hpp"
#include "recint/rng.hpp"
#include "recint/stats.hpp"

namespace recint {
namespace {

TEST(KeyValue, ParsesCommentsRepeatsAndLines) {
  const auto kv = KeyValueFile::parse("# header\nq = 2, 3\n\nsession = 09:30-11:30\nsession = 13:00-15:00 # pm\n");
  EXPECT_EQ(kv.get("q"), "2, 3");
  EXPECT_EQ(kv.get_all("session").size(), 2u);
  EXPECT_EQ(kv.line_of("session"), 5u);
  EXPECT_EQ(parse_double_list(*kv.get("q"), ErrorKind::config, 2, "q"), (std::vector<double>{2, 3}));
  EXPECT_THROW(KeyValueFile::parse("no equals sign\n"), ParseError);
  EXPECT_THROW(kv.require_known({"q"}), Error);
  EXPECT_NO_THROW(kv.require_known({"q", "session"}));
}

TEST(KeyValue, TypedAccessors) {
  const auto kv = KeyValueFile::parse("a = 1.5\nb = 7\nc = yes\nd = x\n");
  EXPECT_DOUBLE_EQ(kv.get_double("a", 0), 1.5);
  EXPECT_EQ(kv.get_int("b", 0), 7);
  EXPECT_TRUE(kv.get_bool("c", false));
  EXPECT_EQ(kv.get_int("missing", 3), 3);
  EXPECT_THROW(kv.get_double("d", 0), ParseError);
  EXPECT_THROW(kv.get_int("a", 0), ParseError);
}

TEST(Rng, CounterBasedAndUniformRange) {
  CounterRng a(9, 2);
  CounterRng b(9, 2);
  CounterRng c(9, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  CounterRng u(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
    sum += x;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, BelowIsUnbiased) {
  CounterRng rng(4);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(Rng, NormalMoments) {
  CounterRng rng(12);
  double s1 = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1001, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("x");
               }),
               std::runtime_error);
}

TEST(Stats, Correlations) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  EXPECT_NEAR(pearson(x, y), 0.7745966692414834, 1e-12);
  const std::vector<double> z{1, 4, 9, 16, 25};
  EXPECT_NEAR(spearman(x, z), 1.0, 1e-12);
  EXPECT_EQ(ranks(std::vector<double>{3, 1, 3}), (std::vector<double>{2.5, 1, 2.5}));
  EXPECT_TRUE(std::isnan(pearson(x, std::vector<double>(5, 1.0))));
}

TEST(Stats, Quantile) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile({5}, 0.3), 5.0);
}

TEST(Stats, KolmogorovDistribution) {
  EXPECT_NEAR(kolmogorov_sf(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_sf(1.63), 0.0098, 3e-4);
  EXPECT_DOUBLE_EQ(kolmogorov_sf(0.0), 1.0);
}

TEST(Stats, KsTests) {
  std::vector<double> grid(100);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = (i + 0.5) / grid.size();
  const auto t = ks_test_uniform(grid);
  EXPECT_NEAR(t.statistic, 0.005, 1e-12);
  EXPECT_GT(t.p_value, 0.99);
  std::vector<double> a(200), b(200);
  for (std::size_t i = 0; i < 200; ++i) {
    a[i] = static_cast<double>(i);
    b[i] = static_cast<double>(i) + 100.0;
  }
  const auto two = ks_test_two_sample(a, b);
  EXPECT_NEAR(two.statistic, 0.5, 1e-12);
  EXPECT_LT(two.p_value, 1e-6);
}

}  // namespace
}  // namespace recint
