#include <gtest/gtest.h>

#include <cmath>

#include "recint/preprocess.hpp"
#include "recint/synth.hpp"

namespace recint {
namespace {

DayGrid grid_of(std::vector<std::vector<double>> rows) {
  DayGrid g(0, rows.front().size());
  for (const auto& r : rows) g.append_row(r);
  return g;
}

double stdev(std::span<const double> v) { return std::sqrt(population_moments(v).variance); }

TEST(Profile, OneDayIsItself) {
  const auto p = intraday_profile(grid_of({{1, 2, 3}}));
  EXPECT_EQ(p.a, (std::vector<double>{1, 2, 3}));
}

TEST(Profile, MeanAcrossDays) {
  const auto p = intraday_profile(grid_of({{2, 1}, {4, 1}}));
  EXPECT_DOUBLE_EQ(p.a[0], 3.0);
}

TEST(Profile, Constant) {
  const auto p = intraday_profile(DayGrid(5, 7, 3.0));
  for (double a : p.a) EXPECT_DOUBLE_EQ(a, 3.0);
}

TEST(Profile, DeadMinuteIsAnError) {
  EXPECT_THROW(intraday_profile(grid_of({{1, 0}, {2, 0}})), Error);
}

TEST(Deseasonalize, Examples) {
  const auto flat = deseasonalize(DayGrid(3, 4, 5.0), IntradayProfile{{5, 5, 5, 5}});
  for (double x : flat.flat()) EXPECT_DOUBLE_EQ(x, 1.0);
  const auto twice = deseasonalize(grid_of({{2, 6}, {2, 6}}), IntradayProfile{{1, 3}});
  for (double x : twice.flat()) EXPECT_DOUBLE_EQ(x, 2.0);
  const auto g = deseasonalize(grid_of({{2, 8}}), IntradayProfile{{2, 4}});
  EXPECT_EQ(g, grid_of({{1, 2}}));
  EXPECT_THROW(deseasonalize(grid_of({{2, 8}}), IntradayProfile{{2, 4, 1}}), Error);
}

TEST(Normalize, AlreadyUnitVariance) {
  const auto v = normalize(grid_of({{1, 3, 1, 3}}));
  EXPECT_EQ(v.v, (std::vector<double>{1, 3, 1, 3}));
  const auto w = normalize(grid_of({{0, 2}}));
  EXPECT_EQ(w.v, (std::vector<double>{0, 2}));
}

TEST(Normalize, UnitStdevAndDayBoundaries) {
  const auto v = normalize(grid_of({{0.3, 7.1, 2.2}, {9.0, 0.01, 4.4}}));
  EXPECT_NEAR(stdev(v.v), 1.0, 1e-9);
  EXPECT_EQ(v.day_boundaries, (std::vector<std::size_t>{0, 3}));
  EXPECT_THROW(normalize(DayGrid(2, 2, 1.0)), Error);
}

TEST(NormalizeReturns, Examples) {
  ReturnSeries r{1, 3, {0.0, -1.0, 1.0}, {0, 1, 1}};
  const auto v = normalize_returns(r);
  EXPECT_DOUBLE_EQ(v.v[1], 1.0);
  EXPECT_DOUBLE_EQ(v.v[2], 1.0);
  EXPECT_FALSE(v.is_defined(0));
  EXPECT_EQ(v.defined_count(), 2u);

  ReturnSeries zero{1, 3, {0.0, 0.0, 0.0}, {0, 1, 1}};
  EXPECT_THROW(normalize_returns(zero), Error);
}

TEST(NormalizeReturns, ScaleInvariantAndSignedUnitStdev) {
  const auto raw = normal_sample(1000, 0.0, 0.01, 5);
  ReturnSeries r{1, raw.size(), raw, std::vector<std::uint8_t>(raw.size(), 1)};
  ReturnSeries k = r;
  for (auto& x : k.values) x *= 37.0;
  const auto a = normalize_returns(r);
  const auto b = normalize_returns(k);
  for (std::size_t t = 0; t < raw.size(); ++t) EXPECT_NEAR(a.v[t], b.v[t], 1e-12);
  std::vector<double> signed_r(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) signed_r[t] = raw[t] / a.scale;
  EXPECT_NEAR(stdev(signed_r), 1.0, 1e-9);
}

TEST(Pipeline, VolumeScaleInvariance) {
  MarketLikeParams p;
  p.days = 5;
  auto bars = market_like(p, 9);
  const auto v1 = normalized_volume(bars);
  for (auto& x : bars.volume.flat()) x *= 1234.5;
  const auto v2 = normalized_volume(bars);
  ASSERT_EQ(v1.size(), v2.size());
  for (std::size_t t = 0; t < v1.size(); ++t) EXPECT_NEAR(v1.v[t], v2.v[t], 1e-12);
  EXPECT_NEAR(stdev(v1.v), 1.0, 1e-9);
  for (double x : v1.v) EXPECT_GE(x, 0.0);
}

TEST(Pipeline, FlatProfileMatchesDirectNormalization) {
  const auto g = grid_of({{1, 5, 2}, {3, 1, 4}});
  const auto direct = normalize(g);
  const auto via = normalize(deseasonalize(g, IntradayProfile{{2.5, 2.5, 2.5}}));
  for (std::size_t t = 0; t < direct.size(); ++t) EXPECT_NEAR(direct.v[t], via.v[t], 1e-12);
}

TEST(Pipeline, ConcatenationOrder) {
  const auto g = grid_of({{1, 2, 3}, {4, 5, 6}});
  const auto v = normalize(g);
  const double sd = stdev(g.flat());
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(v.v[v.day_boundaries[d] + s], g.at(d, s) / sd, 1e-12);
  }
}

}  // namespace
}  // namespace recint
