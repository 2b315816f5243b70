#include "app.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pipeline.hpp"
#include "recint/synth.hpp"

namespace recint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::vector<std::string> inputs;
};

struct SubOptions {
  std::vector<double> q;
  std::optional<double> xmin_floor;
  std::optional<std::size_t> n_tail_floor;
  std::optional<std::size_t> n_boot;
  std::vector<std::string> stats{"ks", "ksw", "cvm"};
  std::string report;
  std::optional<std::size_t> bins;
  std::optional<std::size_t> mean_bins;
  std::string binning = "log";
  std::optional<std::size_t> min_intervals;
  bool rank = false;
  std::vector<double> comove_grid;
  std::optional<std::size_t> comove_points;
  std::optional<double> trigger;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> event;
  std::string spec;
};

RunConfig resolve_config(const GlobalOptions& g, const SubOptions& s) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : RunConfig::load(g.config);
  if (!g.inputs.empty()) {
    cfg.instruments.clear();
    for (const auto& in : g.inputs) cfg.instruments.push_back(parse_instrument(in));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out = *g.out;
  if (g.threads) cfg.threads = *g.threads;
  if (!s.q.empty()) cfg.q_list = s.q;
  if (s.xmin_floor) cfg.xmin_floor = *s.xmin_floor;
  if (s.n_tail_floor) cfg.n_tail_floor = *s.n_tail_floor;
  if (s.n_boot) cfg.n_boot = *s.n_boot;
  if (s.bins) cfg.conditional_bins = *s.bins;
  if (s.mean_bins) cfg.mean_conditional_bins = *s.mean_bins;
  if (s.min_intervals) cfg.dfa_min_intervals = *s.min_intervals;
  if (!s.comove_grid.empty()) cfg.comove_grid = s.comove_grid;
  if (s.comove_points) cfg.comove_points = *s.comove_points;
  if (s.trigger) cfg.trace_trigger = *s.trigger;
  if (s.horizon) cfg.trace_horizon = *s.horizon;
  cfg.validate();
  return cfg;
}

// Runs `body` once per instrument, writing into <out>/<id>/.
template <class Body>
void per_instrument(const RunConfig& cfg, const std::string& stage, Body&& body) {
  for (const auto& data : load_all(cfg)) {
    const fs::path dir = cfg.out / data.id;
    try {
      body(dir, data);
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e.kind(), e.what());
    }
  }
}

fs::path report_path(const RunConfig& cfg) {
  return cfg.out.extension() == ".json" ? cfg.out : cfg.out / "report.json";
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

void cmd_fit(const RunConfig& cfg, std::ostream& out) {
  json rows = json::array();
  for (const auto& data : load_all(cfg)) {
    const auto fit = fit_instrument(data, cfg);
    rows.push_back(to_json(Table1Row{data.id, cfg.q_list, fit, std::nullopt}));
  }
  const auto path = report_path(cfg);
  write_json(path, rows);
  out << path.string() << "\n";
}

void cmd_gof(const RunConfig& cfg, const SubOptions& s, std::ostream& out, std::ostream& err) {
  bool ks = false, ksw = false, cvm = false;
  for (const auto& name : s.stats) {
    if (name == "ks") ks = true;
    else if (name == "ksw") ksw = true;
    else if (name == "cvm") cvm = true;
    else throw Error(ErrorKind::config, "unknown statistic '" + name + "' (expected ks, ksw, cvm)");
  }
  const fs::path path = s.report.empty() ? report_path(cfg) : fs::path(s.report);
  json existing = json::array();
  if (fs::exists(path)) {
    try {
      existing = json::parse(read_text(path));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::config, path.string() + ": " + e.what());
    }
    if (!existing.is_array()) throw Error(ErrorKind::config, path.string() + ": expected a JSON array of fit rows");
  }
  json rows = json::array();
  for (const auto& data : load_all(cfg)) {
    std::optional<Table1Row> row;
    for (const auto& j : existing) {
      if (j.value("instrument", std::string{}) == data.id) row = table1_from_json(j);
    }
    if (!row) row = Table1Row{data.id, cfg.q_list, fit_instrument(data, cfg), std::nullopt};
    RunConfig local = cfg;
    local.q_list = row->q_list;
    row->gof = gof_instrument(data, local, row->fit);
    print_warnings(err, row->gof->warnings);
    rows.push_back(to_json(*row, ks, ksw, cvm));
  }
  write_json(path, rows);
  out << path.string() << "\n";
}

void cmd_synth(const GlobalOptions& g, const SubOptions& s, std::ostream& out) {
  auto spec = GeneratorSpec::load(s.spec);
  if (g.seed) spec.seed = *g.seed;
  fs::path path = g.out ? fs::path(*g.out) : fs::path("synth.csv");
  if (fs::is_directory(path)) path /= fs::path(s.spec).stem().string() + ".csv";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_generated(path, gen(spec));
  out << path.string() << "\n";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrence-interval analysis of minute-sampled market data", "recint"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kSoftwareVersion));

  GlobalOptions g;
  SubOptions s;
  app.add_option("--config", g.config, "Key-value run configuration");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output directory (or .json path for fit/gof, .csv for synth)");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--input", g.inputs, "Minute-bar CSV as id=path or path; repeatable");

  auto add_q = [&](CLI::App* sub) { sub->add_option("--q", s.q, "Thresholds, comma-separated")->delimiter(','); };

  auto* profile = app.add_subcommand("profile", "Intraday pattern A(s)");
  auto* intervals = app.add_subcommand("intervals", "Recurrence intervals per threshold");
  add_q(intervals);
  auto* fit = app.add_subcommand("fit", "Power-law tail fit of pooled scaled intervals");
  add_q(fit);
  fit->add_option("--xmin-floor", s.xmin_floor, "Smallest admissible x_min");
  fit->add_option("--n-tail-floor", s.n_tail_floor, "Minimum tail sample size");
  auto* gof = app.add_subcommand("gof", "Bootstrap goodness of fit");
  add_q(gof);
  gof->add_option("--n-boot", s.n_boot, "Bootstrap replicates");
  gof->add_option("--stat", s.stats, "Statistics: ks,ksw,cvm")->delimiter(',');
  gof->add_option("--report", s.report, "Fit report to extend");
  gof->add_option("--xmin-floor", s.xmin_floor, "Smallest admissible x_min when fitting afresh");
  auto* conditional = app.add_subcommand("conditional", "Conditional PDFs and mean conditional intervals");
  add_q(conditional);
  conditional->add_option("--bins", s.bins, "Number of tau0 bins for conditional PDFs");
  conditional->add_option("--mean-bins", s.mean_bins, "Number of tau0 bins for the mean conditional interval");
  conditional->add_option("--binning", s.binning, "log or linear")->check(CLI::IsMember({"log", "linear"}));
  auto* dfa_cmd = app.add_subcommand("dfa", "DFA of raw and shuffled interval sequences");
  add_q(dfa_cmd);
  dfa_cmd->add_option("--min-intervals", s.min_intervals, "Skip thresholds with fewer intervals");
  auto* couple = app.add_subcommand("couple", "Interval-return correlation and comovement");
  add_q(couple);
  couple->add_flag("--rank", s.rank, "Spearman rank correlation");
  couple->add_option("--Q", s.comove_grid, "Return thresholds, comma-separated")->delimiter(',');
  auto* trace = app.add_subcommand("trace", "Volume trace after large return events");
  trace->add_option("--trigger", s.trigger, "Trigger on |r| above this value");
  trace->add_option("--horizon", s.horizon, "Minutes after the trigger");
  trace->add_option("--event", s.event, "Trace a single event by index");
  auto* comove = app.add_subcommand("comove", "Comovement probability P(tau | |r|>Q)");
  add_q(comove);
  comove->add_option("--Q", s.comove_grid, "Return thresholds, comma-separated")->delimiter(',');
  comove->add_option("--points", s.comove_points, "Size of the default Q grid");
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--spec", s.spec, "Generator spec file")->required();
  auto* report = app.add_subcommand("report", "Full report bundle");
  add_q(report);
  report->add_option("--n-boot", s.n_boot, "Bootstrap replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (synth->parsed()) {
      cmd_synth(g, s, out);
      return 0;
    }
    const RunConfig cfg = resolve_config(g, s);
    std::vector<std::string> warnings;
    if (profile->parsed()) {
      per_instrument(cfg, "profile", [&](const fs::path& dir, const InstrumentData& d) { write_profile(dir, d); });
    } else if (intervals->parsed()) {
      per_instrument(cfg, "intervals",
                     [&](const fs::path& dir, const InstrumentData& d) { write_intervals(dir, d, cfg.q_list); });
    } else if (fit->parsed()) {
      cmd_fit(cfg, out);
    } else if (gof->parsed()) {
      cmd_gof(cfg, s, out, err);
    } else if (conditional->parsed()) {
      const auto binning = s.binning == "linear" ? Binning::linear : Binning::log;
      per_instrument(cfg, "conditional", [&](const fs::path& dir, const InstrumentData& d) {
        write_conditional(dir, d, cfg, binning, warnings);
      });
    } else if (dfa_cmd->parsed()) {
      per_instrument(cfg, "dfa", [&](const fs::path& dir, const InstrumentData& d) {
        const auto memory = memory_instrument(d, cfg);
        warnings.insert(warnings.end(), memory.warnings.begin(), memory.warnings.end());
        write_dfa(dir, memory);
      });
    } else if (couple->parsed()) {
      const auto kind = s.rank ? CorrelationKind::spearman : CorrelationKind::pearson;
      per_instrument(cfg, "couple", [&](const fs::path& dir, const InstrumentData& d) {
        write_correlation(dir, correlation_instrument(d, cfg, kind, warnings));
        write_comovement(dir, comovement_instrument(d, cfg, warnings));
      });
    } else if (trace->parsed()) {
      per_instrument(cfg, "trace", [&](const fs::path& dir, const InstrumentData& d) {
        write_trace(dir, trace_instrument(d, cfg, s.event));
      });
    } else if (comove->parsed()) {
      per_instrument(cfg, "comove", [&](const fs::path& dir, const InstrumentData& d) {
        write_comovement(dir, comovement_instrument(d, cfg, warnings));
      });
    } else if (report->parsed()) {
      run_full_report(cfg);
      out << cfg.out.string() << "\n";
    }
    print_warnings(err, warnings);
  } catch (const Error& e) {
    err << "recint: error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "recint: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::io);
  } catch (const std::exception& e) {
    err << "recint: error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::statistics);
  }
  return 0;
}

}  // namespace recint::cli
