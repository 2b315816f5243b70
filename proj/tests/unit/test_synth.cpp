#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "recint/gof.hpp"
#include "recint/ingest.hpp"
#include "recint/preprocess.hpp"
#include "recint/synth.hpp"
#include "recint/tailfit.hpp"

namespace recint {
namespace {

std::string bytes_of(const Generated& g) {
  std::ostringstream out;
  write_generated(out, g);
  return out.str();
}

TEST(Synth, ParetoInverseCdf) { EXPECT_DOUBLE_EQ(pareto_quantile(0.75, 1.0, 2.0), 4.0); }

TEST(Synth, Reproducible) {
  for (auto kind : {"iid-normal", "iid-lognormal", "pareto", "spliced", "fgn", "market-like"}) {
    const auto kv = KeyValueFile::parse(std::string("kind = ") + kind + "\nlength = 3000\nseed = 5\ndays = 2\n");
    const auto spec = GeneratorSpec::from_kv(kv);
    EXPECT_EQ(bytes_of(gen(spec)), bytes_of(gen(spec))) << kind;
    auto other = spec;
    other.seed = 6;
    EXPECT_NE(bytes_of(gen(spec)), bytes_of(gen(other))) << kind;
  }
}

TEST(Synth, InvalidSpecs) {
  EXPECT_THROW(GeneratorSpec::from_kv(KeyValueFile::parse("kind = pareto\nlength = 10\ndelta = 1\n")), Error);
  EXPECT_THROW(GeneratorSpec::from_kv(KeyValueFile::parse("kind = fgn\nlength = 10\nhurst = 1\n")), Error);
  EXPECT_THROW(GeneratorSpec::from_kv(KeyValueFile::parse("kind = fgn\nlength = 0\n")), Error);
  EXPECT_THROW(GeneratorSpec::from_kv(KeyValueFile::parse("kind = brownian\nlength = 10\n")), Error);
  EXPECT_THROW(GeneratorSpec::from_kv(KeyValueFile::parse("kind = pareto\nlength = 10\ntypo = 1\n")), Error);
}

TEST(Synth, ParetoMleWithinThreeSe) {
  const auto x = pareto_sample(20000, 1.8, 2.0, 3);
  const auto m = mle_delta(x, 2.0);
  EXPECT_NEAR(m.delta, 1.8, 3.0 * m.delta_se);
}

TEST(Synth, SplicedTailMass) {
  const SplicedParams p;
  const auto x = spliced_sample(100000, p, 4);
  std::size_t tail = 0;
  for (double v : x) tail += v >= p.splice;
  EXPECT_NEAR(static_cast<double>(tail) / x.size(), p.tail_fraction, 0.005);
}

TEST(Synth, FgnWhiteNoiseLimit) {
  const std::size_t n = 1 << 16;
  const auto x = fgn(n, 0.5, 9);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    den += x[t] * x[t];
    if (t) num += x[t] * x[t - 1];
  }
  EXPECT_LT(std::abs(num / den), 3.0 / std::sqrt(static_cast<double>(n)));
}

// Lag-k autocorrelation of fGn: ((k+1)^2H - 2k^2H + (k-1)^2H) / 2.
TEST(Synth, FgnAutocorrelation) {
  const double h = 0.8;
  const std::size_t n = 1 << 18;
  const auto x = fgn(n, h, 2);
  double var = 0.0;
  for (double v : x) var += v * v;
  var /= n;
  EXPECT_NEAR(var, 1.0, 0.05);
  for (std::size_t k : {1u, 2u, 10u}) {
    double acc = 0.0;
    for (std::size_t t = k; t < n; ++t) acc += x[t] * x[t - k];
    const double kk = static_cast<double>(k);
    const double exact = 0.5 * (std::pow(kk + 1, 2 * h) - 2 * std::pow(kk, 2 * h) + std::pow(kk - 1, 2 * h));
    EXPECT_NEAR(acc / (n - k) / var, exact, 0.03) << "lag " << k;
  }
}

TEST(Synth, MarketLikeFlatProfile) {
  MarketLikeParams p;
  // Long-memory noise averages out as days^(H-1); a quiet latent keeps the
  // check about the profile rather than about convergence speed.
  p.profile_amplitude = 0.0;
  p.volume_sigma = 0.1;
  p.days = 1000;
  const auto bars = market_like(p, 21);
  const auto prof = intraday_profile(bars.volume);
  double mean = 0.0;
  for (double x : bars.volume.flat()) mean += x;
  mean /= static_cast<double>(bars.volume.size());
  for (double a : prof.a) EXPECT_NEAR(a / mean, 1.0, 0.02);
  EXPECT_NO_THROW(bars.validate());
}

TEST(Synth, MarketLikeRoundTripsWithoutWarnings) {
  MarketLikeParams p;
  p.days = 5;
  std::ostringstream out;
  write_generated(out, Generated{market_like(p, 4)});
  std::istringstream in(out.str());
  const auto loaded = parse_minute_bars(in, IngestConfig{});
  EXPECT_TRUE(loaded.warnings.empty());
  EXPECT_EQ(loaded.series.day_count(), 5u);
}

}  // namespace
}  // namespace recint
