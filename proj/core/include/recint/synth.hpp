#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "recint/ingest.hpp"
#include "recint/kvconfig.hpp"

namespace recint {

enum class GeneratorKind { iid_normal, iid_lognormal, pareto, spliced, fgn, market_like };

struct NormalParams {
  double mean = 0.0;
  double sd = 1.0;
};

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct ParetoParams {
  double delta = 2.5;
  double x_min = 1.0;
};

// Exponential body truncated to [0, splice) with probability 1 - tail_fraction,
// Pareto(delta, splice) tail otherwise.
struct SplicedParams {
  double body_rate = 1.0;
  double splice = 3.0;
  double delta = 2.5;
  double tail_fraction = 0.2;
};

struct FgnParams {
  double hurst = 0.5;
};

// Minute bars with a quadratic U-shaped intraday volume profile, lognormal
// volume noise driven by a unit-variance fGn latent z, and a log-price random
// walk whose minute volatility scales with exp(coupling * z).
struct MarketLikeParams {
  std::size_t days = 60;
  SessionCalendar calendar = SessionCalendar::a_share();
  Date start_date{2024, 1, 2};
  double base_volume = 1.0e4;
  double profile_amplitude = 2.0;  // 0 gives a flat profile
  double volume_sigma = 0.7;
  double hurst = 0.8;
  double return_vol = 1.0e-3;
  double coupling = 0.6;
  double start_price = 10.0;
};

using GeneratorParams =
    std::variant<NormalParams, LognormalParams, ParetoParams, SplicedParams, FgnParams, MarketLikeParams>;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::iid_normal;
  std::size_t length = 0;  // ignored by market_like (days x minutes_per_day)
  std::uint64_t seed = 0;
  GeneratorParams params = NormalParams{};

  void validate() const;
  static GeneratorSpec from_kv(const KeyValueFile& kv);
  static GeneratorSpec load(const std::filesystem::path& path);
};

using Generated = std::variant<std::vector<double>, MinuteBarSeries>;

Generated gen(const GeneratorSpec& spec);

std::vector<double> normal_sample(std::size_t n, double mean, double sd, std::uint64_t seed);
std::vector<double> lognormal_sample(std::size_t n, double mu, double sigma, std::uint64_t seed);
std::vector<double> pareto_sample(std::size_t n, double delta, double x_min, std::uint64_t seed);
std::vector<double> spliced_sample(std::size_t n, const SplicedParams& params, std::uint64_t seed);
// Fractional Gaussian noise with unit variance via circulant embedding of the
// exact autocovariance (frequency-domain filtering of complex white noise).
std::vector<double> fgn(std::size_t n, double hurst, std::uint64_t seed);
MinuteBarSeries market_like(const MarketLikeParams& params, std::uint64_t seed);

// Writes `index,value` rows for vector outputs, canonical bars otherwise.
void write_generated(std::ostream& out, const Generated& data);
void write_generated(const std::filesystem::path& path, const Generated& data);

}  // namespace recint
