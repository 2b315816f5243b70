#include "run_config.hpp"

#include <fmt/format.h>

#include <cmath>

namespace recint::cli {

Instrument parse_instrument(const std::string& text, const std::filesystem::path& base_dir) {
  const auto value = std::string(trim(text));
  if (value.empty()) throw Error(ErrorKind::config, "empty input specification");
  Instrument inst;
  const auto eq = value.find('=');
  std::filesystem::path path = eq == std::string::npos ? value : value.substr(eq + 1);
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  inst.path = path;
  inst.id = eq == std::string::npos ? path.stem().string() : std::string(trim(value.substr(0, eq)));
  if (inst.id.empty()) throw Error(ErrorKind::config, "empty instrument id in '" + value + "'");
  return inst;
}

namespace {

std::size_t as_size(const KeyValueFile& kv, std::string_view key, std::size_t fallback) {
  const auto v = kv.get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw ParseError(ErrorKind::config, kv.line_of(key), std::string(key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig RunConfig::from_kv(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
  kv.require_known({"input", "q", "comove_q", "comove_points", "xmin_floor", "n_tail_floor", "n_boot", "seed", "out",
                    "threads", "trace_trigger", "trace_horizon", "dfa_min_intervals", "conditional_bins",
                    "mean_conditional_bins", "delimiter", "column.date", "column.time", "column.price",
                    "column.volume", "session", "missing_minutes"});
  RunConfig cfg;
  cfg.ingest = IngestConfig::from_kv(kv);
  for (const auto& e : kv.entries()) {
    if (e.key == "input") cfg.instruments.push_back(parse_instrument(e.value, base_dir));
  }
  if (auto q = kv.get("q")) cfg.q_list = parse_double_list(*q, ErrorKind::config, kv.line_of("q"), "q");
  if (auto g = kv.get("comove_q")) cfg.comove_grid = parse_double_list(*g, ErrorKind::config, kv.line_of("comove_q"), "comove_q");
  cfg.comove_points = as_size(kv, "comove_points", cfg.comove_points);
  cfg.xmin_floor = kv.get_double("xmin_floor", cfg.xmin_floor);
  cfg.n_tail_floor = as_size(kv, "n_tail_floor", cfg.n_tail_floor);
  cfg.n_boot = as_size(kv, "n_boot", cfg.n_boot);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(cfg.seed)));
  if (auto out = kv.get("out")) {
    std::filesystem::path p = *out;
    cfg.out = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  cfg.threads = static_cast<unsigned>(as_size(kv, "threads", cfg.threads));
  cfg.trace_trigger = kv.get_double("trace_trigger", cfg.trace_trigger);
  cfg.trace_horizon = as_size(kv, "trace_horizon", cfg.trace_horizon);
  cfg.dfa_min_intervals = as_size(kv, "dfa_min_intervals", cfg.dfa_min_intervals);
  cfg.conditional_bins = as_size(kv, "conditional_bins", cfg.conditional_bins);
  cfg.mean_conditional_bins = as_size(kv, "mean_conditional_bins", cfg.mean_conditional_bins);
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  return from_kv(KeyValueFile::load(path), path.parent_path());
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, "invalid configuration: " + msg); };
  if (q_list.empty()) fail("threshold list q is empty");
  for (double q : q_list) {
    if (!(q > 0.0) || !std::isfinite(q)) fail(fmt::format("threshold q={} must be positive", q));
  }
  for (double Q : comove_grid) {
    if (!(Q >= 0.0) || !std::isfinite(Q)) fail("comovement thresholds must be non-negative");
  }
  if (n_boot == 0) fail("n_boot must be positive");
  if (n_tail_floor < 2) fail("n_tail_floor must be at least 2");
  if (!std::isfinite(xmin_floor) || xmin_floor < 0.0) fail("xmin_floor must be non-negative");
  if (trace_horizon == 0) fail("trace_horizon must be positive");
  if (conditional_bins == 0 || mean_conditional_bins == 0) fail("bin counts must be positive");
  for (std::size_t i = 0; i < instruments.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (instruments[i].id == instruments[j].id) fail("duplicate instrument id '" + instruments[i].id + "'");
    }
  }
}

std::string RunConfig::canonical() const {
  std::string s;
  auto line = [&](std::string_view key, const std::string& value) { s += fmt::format("{}={}\n", key, value); };
  line("q", fmt::format("{}", fmt::join(q_list, ",")));
  line("comove_q", fmt::format("{}", fmt::join(comove_grid, ",")));
  line("comove_points", std::to_string(comove_points));
  line("xmin_floor", fmt::format("{}", xmin_floor));
  line("n_tail_floor", std::to_string(n_tail_floor));
  line("n_boot", std::to_string(n_boot));
  line("seed", std::to_string(seed));
  line("trace_trigger", fmt::format("{}", trace_trigger));
  line("trace_horizon", std::to_string(trace_horizon));
  line("dfa_min_intervals", std::to_string(dfa_min_intervals));
  line("conditional_bins", std::to_string(conditional_bins));
  line("mean_conditional_bins", std::to_string(mean_conditional_bins));
  line("delimiter", std::string(1, ingest.delimiter));
  line("columns", fmt::format("{},{},{},{}", ingest.date_column, ingest.time_column, ingest.price_column,
                              ingest.volume_column));
  for (const auto& session : ingest.calendar.sessions()) {
    line("session", format_clock(session.open_minute) + "-" + format_clock(session.close_minute));
  }
  line("missing_minutes", std::to_string(static_cast<int>(ingest.missing)));
  for (const auto& inst : instruments) line("instrument", inst.id);
  return s;
}

}  // namespace recint::cli
