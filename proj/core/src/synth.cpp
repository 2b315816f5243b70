#include "recint/synth.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <mutex>

#include "recint/rng.hpp"

namespace recint {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void forward_fft(std::vector<std::complex<double>>& data) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

double fgn_autocovariance(std::size_t k, double hurst) {
  const double two_h = 2.0 * hurst;
  const auto x = static_cast<double>(k);
  return 0.5 * (std::pow(x + 1.0, two_h) - 2.0 * std::pow(x, two_h) + std::pow(std::abs(x - 1.0), two_h));
}

constexpr std::uint64_t kStreamSample = 1;
constexpr std::uint64_t kStreamLatent = 2;
constexpr std::uint64_t kStreamReturns = 3;

}  // namespace

std::vector<double> normal_sample(std::size_t n, double mean, double sd, std::uint64_t seed) {
  CounterRng rng(seed, kStreamSample);
  std::vector<double> out(n);
  for (double& x : out) x = mean + sd * rng.normal();
  return out;
}

std::vector<double> lognormal_sample(std::size_t n, double mu, double sigma, std::uint64_t seed) {
  auto out = normal_sample(n, mu, sigma, seed);
  for (double& x : out) x = std::exp(x);
  return out;
}

std::vector<double> pareto_sample(std::size_t n, double delta, double x_min, std::uint64_t seed) {
  CounterRng rng(seed, kStreamSample);
  std::vector<double> out(n);
  const double exponent = -1.0 / (delta - 1.0);
  for (double& x : out) x = x_min * std::pow(rng.uniform(), exponent);
  return out;
}

std::vector<double> spliced_sample(std::size_t n, const SplicedParams& p, std::uint64_t seed) {
  CounterRng rng(seed, kStreamSample);
  std::vector<double> out(n);
  const double body_mass = -std::expm1(-p.body_rate * p.splice);
  const double exponent = -1.0 / (p.delta - 1.0);
  for (double& x : out) {
    const double pick = rng.uniform();
    const double u = rng.uniform();
    if (pick < p.tail_fraction) {
      x = p.splice * std::pow(u, exponent);
    } else {
      x = -std::log1p(-u * body_mass) / p.body_rate;
    }
  }
  return out;
}

std::vector<double> fgn(std::size_t n, double hurst, std::uint64_t seed) {
  if (n == 0) return {};
  if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorKind::config, "Hurst exponent must lie in (0, 1)");
  if (n == 1) return normal_sample(1, 0.0, 1.0, seed);

  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j <= n; ++j) row[j] = fgn_autocovariance(j, hurst);
  for (std::size_t j = 1; j < n; ++j) row[m - j] = row[j];
  forward_fft(row);

  CounterRng rng(seed, kStreamLatent);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double eigen = std::max(0.0, row[k].real());
    const double amp = std::sqrt(eigen / static_cast<double>(m));
    const double a = rng.normal();
    const double b = rng.normal();
    w[k] = {amp * a, amp * b};
  }
  forward_fft(w);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = w[t].real();
  return out;
}

MinuteBarSeries market_like(const MarketLikeParams& p, std::uint64_t seed) {
  const std::size_t minutes = p.calendar.minutes_per_day();
  const std::size_t total = p.days * minutes;
  const auto latent = fgn(total, p.hurst, seed);

  MinuteBarSeries series;
  series.calendar = p.calendar;
  series.price = DayGrid(p.days, minutes);
  series.volume = DayGrid(p.days, minutes);
  Date date = p.start_date;
  CounterRng rng(seed, kStreamReturns);
  double log_price = std::log(p.start_price);
  const double span = minutes > 1 ? static_cast<double>(minutes - 1) : 1.0;
  const double vol_shift = 0.5 * p.volume_sigma * p.volume_sigma;
  const double ret_shift = p.coupling * p.coupling;
  for (std::size_t d = 0; d < p.days; ++d) {
    series.days.push_back(date);
    date = date.next_weekday();
    for (std::size_t s = 0; s < minutes; ++s) {
      const std::size_t t = d * minutes + s;
      const double u = 2.0 * static_cast<double>(s) / span - 1.0;
      const double profile = 1.0 + p.profile_amplitude * u * u;
      series.volume.at(d, s) = p.base_volume * profile * std::exp(p.volume_sigma * latent[t] - vol_shift);
      if (t > 0) log_price += p.return_vol * rng.normal() * std::exp(p.coupling * latent[t] - ret_shift);
      series.price.at(d, s) = std::exp(log_price);
    }
  }
  series.validate();
  return series;
}

void GeneratorSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, "invalid generator spec: " + msg); };
  if (kind != GeneratorKind::market_like && length == 0) fail("length must be positive");
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NormalParams>) {
          if (!(p.sd > 0.0)) fail("sd must be positive");
        } else if constexpr (std::is_same_v<T, LognormalParams>) {
          if (!(p.sigma > 0.0)) fail("sigma must be positive");
        } else if constexpr (std::is_same_v<T, ParetoParams>) {
          if (!(p.delta > 1.0)) fail("delta must exceed 1");
          if (!(p.x_min > 0.0)) fail("x_min must be positive");
        } else if constexpr (std::is_same_v<T, SplicedParams>) {
          if (!(p.delta > 1.0)) fail("delta must exceed 1");
          if (!(p.splice > 0.0) || !(p.body_rate > 0.0)) fail("splice and body_rate must be positive");
          if (!(p.tail_fraction > 0.0 && p.tail_fraction < 1.0)) fail("tail_fraction must lie in (0, 1)");
        } else if constexpr (std::is_same_v<T, FgnParams>) {
          if (!(p.hurst > 0.0 && p.hurst < 1.0)) fail("hurst must lie in (0, 1)");
        } else {
          if (p.days == 0) fail("days must be positive");
          if (!(p.hurst > 0.0 && p.hurst < 1.0)) fail("hurst must lie in (0, 1)");
          if (!(p.base_volume > 0.0) || !(p.start_price > 0.0)) fail("base_volume and start_price must be positive");
          if (p.profile_amplitude < 0.0 || p.volume_sigma < 0.0 || p.return_vol < 0.0) {
            fail("profile_amplitude, volume_sigma and return_vol must be non-negative");
          }
        }
      },
      params);
  const bool match = (kind == GeneratorKind::iid_normal && std::holds_alternative<NormalParams>(params)) ||
                     (kind == GeneratorKind::iid_lognormal && std::holds_alternative<LognormalParams>(params)) ||
                     (kind == GeneratorKind::pareto && std::holds_alternative<ParetoParams>(params)) ||
                     (kind == GeneratorKind::spliced && std::holds_alternative<SplicedParams>(params)) ||
                     (kind == GeneratorKind::fgn && std::holds_alternative<FgnParams>(params)) ||
                     (kind == GeneratorKind::market_like && std::holds_alternative<MarketLikeParams>(params));
  if (!match) fail("parameters do not match kind");
}

GeneratorSpec GeneratorSpec::from_kv(const KeyValueFile& kv) {
  kv.require_known({"kind", "seed", "length", "mean", "sd", "mu", "sigma", "delta", "x_min", "body_rate", "splice",
                    "tail_fraction", "hurst", "days", "session", "start_date", "base_volume", "profile_amplitude",
                    "flat_profile", "volume_sigma", "return_vol", "coupling", "start_price"});
  GeneratorSpec spec;
  const auto kind = kv.get("kind");
  if (!kind) throw Error(ErrorKind::config, "generator spec needs a 'kind'");
  spec.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  const auto length = kv.get_int("length", 0);
  if (length < 0) throw ParseError(ErrorKind::config, kv.line_of("length"), "length must be non-negative");
  spec.length = static_cast<std::size_t>(length);

  if (*kind == "iid-normal") {
    spec.kind = GeneratorKind::iid_normal;
    spec.params = NormalParams{kv.get_double("mean", 0.0), kv.get_double("sd", 1.0)};
  } else if (*kind == "iid-lognormal") {
    spec.kind = GeneratorKind::iid_lognormal;
    spec.params = LognormalParams{kv.get_double("mu", 0.0), kv.get_double("sigma", 1.0)};
  } else if (*kind == "pareto") {
    spec.kind = GeneratorKind::pareto;
    spec.params = ParetoParams{kv.get_double("delta", 2.5), kv.get_double("x_min", 1.0)};
  } else if (*kind == "spliced") {
    spec.kind = GeneratorKind::spliced;
    SplicedParams p;
    p.body_rate = kv.get_double("body_rate", p.body_rate);
    p.splice = kv.get_double("splice", p.splice);
    p.delta = kv.get_double("delta", p.delta);
    p.tail_fraction = kv.get_double("tail_fraction", p.tail_fraction);
    spec.params = p;
  } else if (*kind == "fgn") {
    spec.kind = GeneratorKind::fgn;
    spec.params = FgnParams{kv.get_double("hurst", 0.5)};
  } else if (*kind == "market-like") {
    spec.kind = GeneratorKind::market_like;
    MarketLikeParams p;
    const auto days = kv.get_int("days", static_cast<long long>(p.days));
    if (days <= 0) throw ParseError(ErrorKind::config, kv.line_of("days"), "days must be positive");
    p.days = static_cast<std::size_t>(days);
    std::vector<Session> sessions;
    for (const auto& e : kv.entries()) {
      if (e.key == "session") sessions.push_back(SessionCalendar::parse_session(e.value, e.line));
    }
    if (!sessions.empty()) p.calendar = SessionCalendar(std::move(sessions));
    if (auto d = kv.get("start_date")) {
      const auto parsed = Date::parse(*d);
      if (!parsed) throw ParseError(ErrorKind::config, kv.line_of("start_date"), "invalid start_date");
      p.start_date = *parsed;
    }
    p.base_volume = kv.get_double("base_volume", p.base_volume);
    p.profile_amplitude = kv.get_double("profile_amplitude", p.profile_amplitude);
    if (kv.get_bool("flat_profile", false)) p.profile_amplitude = 0.0;
    p.volume_sigma = kv.get_double("volume_sigma", p.volume_sigma);
    p.hurst = kv.get_double("hurst", p.hurst);
    p.return_vol = kv.get_double("return_vol", p.return_vol);
    p.coupling = kv.get_double("coupling", p.coupling);
    p.start_price = kv.get_double("start_price", p.start_price);
    spec.params = p;
  } else {
    throw ParseError(ErrorKind::config, kv.line_of("kind"), "unknown generator kind '" + *kind + "'");
  }
  spec.validate();
  return spec;
}

GeneratorSpec GeneratorSpec::load(const std::filesystem::path& path) { return from_kv(KeyValueFile::load(path)); }

Generated gen(const GeneratorSpec& spec) {
  spec.validate();
  return std::visit(
      [&](const auto& p) -> Generated {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NormalParams>) {
          return normal_sample(spec.length, p.mean, p.sd, spec.seed);
        } else if constexpr (std::is_same_v<T, LognormalParams>) {
          return lognormal_sample(spec.length, p.mu, p.sigma, spec.seed);
        } else if constexpr (std::is_same_v<T, ParetoParams>) {
          return pareto_sample(spec.length, p.delta, p.x_min, spec.seed);
        } else if constexpr (std::is_same_v<T, SplicedParams>) {
          return spliced_sample(spec.length, p, spec.seed);
        } else if constexpr (std::is_same_v<T, FgnParams>) {
          return fgn(spec.length, p.hurst, spec.seed);
        } else {
          return market_like(p, spec.seed);
        }
      },
      spec.params);
}

void write_generated(std::ostream& out, const Generated& data) {
  if (const auto* bars = std::get_if<MinuteBarSeries>(&data)) {
    write_canonical_csv(out, *bars);
    return;
  }
  const auto& values = std::get<std::vector<double>>(data);
  out << "index,value\n";
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    line.clear();
    fmt::format_to(std::back_inserter(line), "{},{}\n", i, values[i]);
    out << line;
  }
}

void write_generated(const std::filesystem::path& path, const Generated& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_generated(out, data);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace recint
