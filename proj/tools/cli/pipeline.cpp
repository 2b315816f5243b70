#include "pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "recint/parallel.hpp"
#include "recint/rng.hpp"

namespace recint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class F>
auto in_stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.kind(), e.what());
  } catch (const std::exception& e) {
    throw StageError(name, ErrorKind::statistics, e.what());
  }
}

std::string q_label(double q) { return fmt::format("{}", q); }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

std::uint64_t instrument_seed(std::uint64_t master, const std::string& id, std::uint64_t salt) {
  return mix64(mix64(master) ^ fnv1a64(id) ^ mix64(salt + 0x9e3779b97f4a7c15ULL));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

void require_finite(const json& j, const std::string& where) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) throw Error(ErrorKind::statistics, "non-finite value in " + where);
  } else if (j.is_structured()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      require_finite(*it, j.is_object() ? where + "." + it.key() : where);
    }
  }
}

void write_json(const fs::path& path, const json& j) {
  require_finite(j, path.filename().string());
  write_text(path, j.dump(2) + "\n");
}

InstrumentData load_instrument(const Instrument& inst, const IngestConfig& ingest) {
  InstrumentData data;
  data.id = inst.id;
  const std::string text = read_text(inst.path);
  data.input_hash = hex64(fnv1a64(text));
  std::istringstream in(text);
  LoadedBars loaded;
  try {
    loaded = parse_minute_bars(in, ingest);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), 0, inst.path.string() + ": " + e.what());
  }
  data.bars = std::move(loaded.series);
  for (auto& w : loaded.warnings) data.warnings.push_back(inst.id + ": " + w);
  data.profile = intraday_profile(data.bars.volume);
  data.volume = normalize(deseasonalize(data.bars.volume, data.profile), SeriesSource::volume);
  data.abs_return = normalize_returns(to_returns(data.bars));
  return data;
}

std::vector<InstrumentData> load_all(const RunConfig& cfg) {
  if (cfg.instruments.empty()) throw Error(ErrorKind::config, "no input given (use --input or 'input =' in the config)");
  std::vector<InstrumentData> all;
  for (const auto& inst : cfg.instruments) all.push_back(in_stage("ingest", [&] { return load_instrument(inst, cfg.ingest); }));
  return all;
}

json to_json(const Table1Row& row, bool with_ks, bool with_ksw, bool with_cvm) {
  const auto& f = row.fit;
  json j = {
      {"instrument", row.instrument},
      {"q", row.q_list},
      {"x_min", f.x_min},
      {"delta", f.delta},
      {"delta_se", f.delta_se},
      {"c", f.c},
      {"c_pareto", f.c_pareto},
      {"KS", f.ks},
      {"n_tail", f.n_tail},
      {"n_total", f.n_total},
  };
  if (row.gof) {
    const auto& g = *row.gof;
    j["n_boot"] = g.n_boot;
    j["seed"] = g.seed;
    json decisions = json::object();
    if (with_ks) {
      j["p_KS"] = g.p_ks;
      decisions["KS"] = g.pass_ks ? "pass" : "fail";
    }
    if (with_ksw) {
      j["KSW"] = g.ksw;
      j["p_KSW"] = g.p_ksw;
      decisions["KSW"] = g.pass_ksw ? "pass" : "fail";
    }
    if (with_cvm) {
      j["W2"] = g.w2;
      decisions["CvM"] = g.pass_cvm ? "pass" : "fail";
    }
    j["decisions"] = decisions;
  }
  return j;
}

Table1Row table1_from_json(const json& j) {
  try {
    Table1Row row;
    row.instrument = j.at("instrument").get<std::string>();
    row.q_list = j.at("q").get<std::vector<double>>();
    auto& f = row.fit;
    f.x_min = j.at("x_min").get<double>();
    f.delta = j.at("delta").get<double>();
    f.delta_se = j.at("delta_se").get<double>();
    f.c = j.at("c").get<double>();
    f.c_pareto = j.at("c_pareto").get<double>();
    f.ks = j.at("KS").get<double>();
    f.n_tail = j.at("n_tail").get<std::size_t>();
    f.n_total = j.at("n_total").get<std::size_t>();
    return row;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed fit report row: ") + e.what());
  }
}

std::vector<std::string> write_profile(const fs::path& dir, const InstrumentData& data) {
  std::string out = "s\ta\n";
  for (std::size_t s = 0; s < data.profile.size(); ++s) out += fmt::format("{}\t{}\n", s, data.profile.a[s]);
  write_text(dir / "fig1_profile.tsv", out);
  return {"fig1_profile.tsv"};
}

std::vector<std::string> write_intervals(const fs::path& dir, const InstrumentData& data,
                                         const std::vector<double>& q_list) {
  std::vector<std::string> files;
  json summary = json::array();
  for (double q : q_list) {
    const auto ris = extract_intervals(data.volume, q);
    std::string out = "start_index\ttau\n";
    for (std::size_t k = 0; k < ris.size(); ++k) out += fmt::format("{}\t{}\n", ris.start_index[k], ris.tau[k]);
    const auto name = fmt::format("intervals_q{}.tsv", q_label(q));
    write_text(dir / name, out);
    files.push_back(name);
    summary.push_back({{"q", q}, {"count", ris.size()}, {"mean_tau", ris.mean_tau}});
  }
  write_json(dir / "intervals_summary.json", summary);
  files.push_back("intervals_summary.json");
  return files;
}

std::vector<std::string> write_scaled_pdf(const fs::path& dir, const InstrumentData& data,
                                          const std::vector<double>& q_list, const PowerLawFit& fit) {
  std::string out = "q\tx\tp\tn\n";
  double x_max = fit.x_min;
  for (double q : q_list) {
    const auto ris = extract_intervals(data.volume, q);
    const auto pdf = log_binned_pdf_discrete(ris.tau, ris.mean_tau);
    for (const auto& pt : pdf.points) {
      out += fmt::format("{}\t{}\t{}\t{}\n", q_label(q), pt.x, pt.p, pt.n);
      x_max = std::max(x_max, pt.hi / ris.mean_tau);
    }
  }
  write_text(dir / "fig2_scaled_pdf.tsv", out);

  std::string curve = "x\tf\n";
  constexpr int kPoints = 50;
  const double step = std::log(x_max / fit.x_min) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double x = fit.x_min * std::exp(step * i);
    curve += fmt::format("{}\t{}\n", x, fit.c * std::pow(x, -fit.delta));
  }
  write_text(dir / "fig2_fit.tsv", curve);
  return {"fig2_scaled_pdf.tsv", "fig2_fit.tsv"};
}

std::vector<std::string> write_conditional(const fs::path& dir, const InstrumentData& data, const RunConfig& cfg,
                                           Binning binning, std::vector<std::string>& warnings) {
  std::string pdf_out = "q\tbin\ttau0_lo\ttau0_hi\tx\tp\tn\n";
  std::string mean_out = "q\ttau0\tmean\tse\tn\n";
  for (double q : cfg.q_list) {
    try {
      const auto ris = extract_intervals(data.volume, q);
      const auto stats = conditional_pdf(ris, cfg.conditional_bins);
      for (std::size_t b = 0; b < stats.bins.size(); ++b) {
        const auto& bin = stats.bins[b];
        if (bin.empty) {
          warnings.push_back(fmt::format("{}: q={} tau0 bin {} has fewer than 2 successors", data.id, q, b));
          continue;
        }
        for (const auto& pt : bin.pdf.points) {
          pdf_out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", q_label(q), b, bin.tau0_lo, bin.tau0_hi, pt.x, pt.p, pt.n);
        }
      }
      for (const auto& pt : mean_conditional_interval(ris, cfg.mean_conditional_bins, binning)) {
        mean_out += fmt::format("{}\t{}\t{}\t{}\t{}\n", q_label(q), pt.tau0, pt.mean, pt.se, pt.n);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::statistics) throw;
      warnings.push_back(fmt::format("{}: conditional statistics skipped for q={}: {}", data.id, q, e.what()));
    }
  }
  write_text(dir / "fig3_conditional_pdf.tsv", pdf_out);
  write_text(dir / "fig4_mean_conditional.tsv", mean_out);
  return {"fig3_conditional_pdf.tsv", "fig4_mean_conditional.tsv"};
}

namespace {

json dfa_json(const DfaResult& r) {
  json j = {{"order", r.order},
            {"fit_range", {r.scales[r.fit_range.first], r.scales[r.fit_range.second]}},
            {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
            {"alpha_se", r.alpha_se}};
  return j;
}

void append_dfa_rows(std::string& out, const std::string& q, const std::string& series, const DfaResult& r) {
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    out += fmt::format("{}\t{}\t{}\t{}\n", q, series, r.scales[i], r.fluctuation[i]);
  }
}

}  // namespace

std::vector<std::string> write_dfa(const fs::path& dir, const MemoryReport& memory) {
  std::string out = "q\tseries\tl\tF\n";
  json j = {{"intervals", json::array()}};
  if (memory.series) {
    append_dfa_rows(out, "-", "volume", *memory.series);
    j["volume"] = dfa_json(*memory.series);
  }
  for (const auto& m : memory.per_q) {
    append_dfa_rows(out, q_label(m.q), "raw", m.raw);
    append_dfa_rows(out, q_label(m.q), "shuffled", m.shuffled);
    j["intervals"].push_back({{"q", m.q},
                              {"exceedances", m.exceedances},
                              {"shuffled_exceedances", m.shuffled_exceedances},
                              {"raw", dfa_json(m.raw)},
                              {"shuffled", dfa_json(m.shuffled)}});
  }
  j["warnings"] = memory.warnings;
  write_text(dir / "fig5_dfa.tsv", out);
  write_json(dir / "dfa.json", j);
  return {"fig5_dfa.tsv", "dfa.json"};
}

std::vector<std::string> write_trace(const fs::path& dir, const VolumeTrace& trace) {
  std::string out = fmt::format("# trigger={} events={}\noffset\tmean_v\n", trace.trigger, trace.n_events);
  for (const auto& pt : trace.points) out += fmt::format("{}\t{}\n", pt.offset, pt.mean_v);
  write_text(dir / "fig6_volume_trace.tsv", out);
  return {"fig6_volume_trace.tsv"};
}

std::vector<std::string> write_correlation(const fs::path& dir, const std::vector<IntervalReturnCorrelation>& rows) {
  std::string out = "q\tC\tn_pairs\n";
  json j = json::array();
  for (const auto& r : rows) {
    out += fmt::format("{}\t{}\t{}\n", q_label(r.q), r.c, r.n_pairs);
    j.push_back({{"q", r.q}, {"C", r.c}, {"n_pairs", r.n_pairs}});
  }
  write_text(dir / "fig7_correlation.tsv", out);
  write_json(dir / "couple.json", j);
  return {"fig7_correlation.tsv", "couple.json"};
}

std::vector<std::string> write_comovement(const fs::path& dir, const std::vector<ComovementCurve>& curves) {
  std::string out = "q\tQ\tP\tn\tn_tau\tn_tau_raw\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.points) {
      out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", q_label(c.q), pt.Q, pt.p, pt.n_kept, c.n_tau, c.n_tau_raw);
    }
  }
  write_text(dir / "fig8_comovement.tsv", out);
  return {"fig8_comovement.tsv"};
}

PowerLawFit fit_instrument(const InstrumentData& data, const RunConfig& cfg) {
  const auto pooled = pooled_scaled_sample(data.volume, cfg.q_list);
  return fit_tail(pooled, cfg.xmin_floor, cfg.n_tail_floor, cfg.threads);
}

GofReport gof_instrument(const InstrumentData& data, const RunConfig& cfg, const PowerLawFit& fit) {
  const auto pooled = pooled_scaled_sample(data.volume, cfg.q_list);
  return goodness_of_fit(pooled, fit, cfg.n_boot, instrument_seed(cfg.seed, data.id, 1), cfg.threads);
}

MemoryReport memory_instrument(const InstrumentData& data, const RunConfig& cfg) {
  return interval_memory_report(data.volume, cfg.q_list, instrument_seed(cfg.seed, data.id, 2), cfg.dfa_min_intervals,
                                cfg.threads);
}

std::vector<IntervalReturnCorrelation> correlation_instrument(const InstrumentData& data, const RunConfig& cfg,
                                                              CorrelationKind kind, std::vector<std::string>& warnings) {
  std::vector<IntervalReturnCorrelation> rows;
  for (double q : cfg.q_list) {
    try {
      rows.push_back(interval_return_correlation(extract_intervals(data.volume, q), data.abs_return, kind));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::statistics) throw;
      warnings.push_back(fmt::format("{}: correlation skipped for q={}: {}", data.id, q, e.what()));
    }
  }
  return rows;
}

std::vector<ComovementCurve> comovement_instrument(const InstrumentData& data, const RunConfig& cfg,
                                                   std::vector<std::string>& warnings) {
  const auto grid = cfg.comove_grid.empty() ? default_comovement_grid(data.abs_return, cfg.comove_points) : cfg.comove_grid;
  std::vector<ComovementCurve> curves;
  for (double q : cfg.q_list) {
    try {
      curves.push_back(comovement_probability(data.volume, data.abs_return, q, grid));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::statistics) throw;
      warnings.push_back(fmt::format("{}: comovement skipped for q={}: {}", data.id, q, e.what()));
    }
  }
  return curves;
}

VolumeTrace trace_instrument(const InstrumentData& data, const RunConfig& cfg, std::optional<std::size_t> single_event) {
  return conditioned_volume_trace(data.volume, data.abs_return, cfg.trace_trigger, cfg.trace_horizon, single_event);
}

namespace {

struct InstrumentOutcome {
  Table1Row row;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

InstrumentOutcome analyse(const Instrument& inst, const RunConfig& cfg, const fs::path& out) {
  InstrumentOutcome result;
  const auto data = in_stage("ingest", [&] { return load_instrument(inst, cfg.ingest); });
  result.warnings = data.warnings;
  const fs::path dir = out / data.id;
  auto add = [&](const std::vector<std::string>& names) {
    for (const auto& n : names) result.files.push_back(data.id + "/" + n);
  };

  add(in_stage("profile", [&] { return write_profile(dir, data); }));
  auto fit = in_stage("fit", [&] { return fit_instrument(data, cfg); });
  add(in_stage("fit", [&] { return write_scaled_pdf(dir, data, cfg.q_list, fit); }));
  auto gof = in_stage("gof", [&] { return gof_instrument(data, cfg, fit); });
  for (const auto& w : gof.warnings) result.warnings.push_back(data.id + ": " + w);
  result.row = {data.id, cfg.q_list, fit, gof};

  add(in_stage("conditional", [&] { return write_conditional(dir, data, cfg, Binning::log, result.warnings); }));
  const auto memory = in_stage("dfa", [&] { return memory_instrument(data, cfg); });
  for (const auto& w : memory.warnings) result.warnings.push_back(data.id + ": " + w);
  add(in_stage("dfa", [&] { return write_dfa(dir, memory); }));
  add(in_stage("trace", [&] { return write_trace(dir, trace_instrument(data, cfg)); }));
  add(in_stage("couple", [&] {
    return write_correlation(dir, correlation_instrument(data, cfg, CorrelationKind::pearson, result.warnings));
  }));
  add(in_stage("comove", [&] { return write_comovement(dir, comovement_instrument(data, cfg, result.warnings)); }));
  return result;
}

}  // namespace

void run_full_report(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  in_stage("config", [&] {
    cfg.validate();
    if (cfg.instruments.empty()) throw Error(ErrorKind::config, "no input given (use --input or 'input =' in the config)");
  });
  const fs::path out = cfg.out;
  const fs::path marker = out / ".partial";
  try {
    fs::create_directories(out);
    fs::remove(marker);
  } catch (const fs::filesystem_error& e) {
    throw StageError("output", ErrorKind::io, e.what());
  }

  try {
    const std::size_t n = cfg.instruments.size();
    const unsigned threads = resolve_threads(cfg.threads);
    RunConfig inner = cfg;
    inner.threads = n > 1 ? 1 : threads;
    std::vector<InstrumentOutcome> outcomes(n);
    parallel_for(n, threads, [&](std::size_t i) { outcomes[i] = analyse(cfg.instruments[i], inner, out); });

    std::vector<std::string> files{"report.json"};
    std::vector<std::string> warnings;
    json report = json::array();
    json inputs = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      report.push_back(to_json(outcomes[i].row));
      files.insert(files.end(), outcomes[i].files.begin(), outcomes[i].files.end());
      warnings.insert(warnings.end(), outcomes[i].warnings.begin(), outcomes[i].warnings.end());
      inputs.push_back({{"instrument", cfg.instruments[i].id},
                        {"fnv1a64", hex64(fnv1a64(read_text(cfg.instruments[i].path)))}});
    }
    in_stage("report", [&] { write_json(out / "report.json", report); });

    std::sort(files.begin(), files.end());
    json listing = json::array();
    for (const auto& f : files) {
      const auto content = read_text(out / f);
      listing.push_back({{"path", f}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}});
    }
    const json manifest = {{"software", kSoftwareName},
                           {"version", kSoftwareVersion},
                           {"seed", cfg.seed},
                           {"config_hash", hex64(fnv1a64(cfg.canonical()))},
                           {"inputs", inputs},
                           {"files", listing},
                           {"warnings", warnings}};
    in_stage("manifest", [&] { write_json(out / "manifest.json", manifest); });
  } catch (const StageError& e) {
    try {
      write_text(marker, fmt::format("stage: {}\nerror: {}\n", e.stage(), e.what()));
    } catch (...) {
    }
    throw;
  }
}

}  // namespace recint::cli
