#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "recint/ingest.hpp"
#include "recint/kvconfig.hpp"

namespace recint::cli {

struct Instrument {
  std::string id;
  std::filesystem::path path;
};

// `id=path` or a bare path (id = file stem).
Instrument parse_instrument(const std::string& text, const std::filesystem::path& base_dir = {});

struct RunConfig {
  std::vector<Instrument> instruments;
  IngestConfig ingest;
  std::vector<double> q_list{2.0, 3.0, 4.0, 5.0};
  std::vector<double> comove_grid;  // empty: default log grid
  std::size_t comove_points = 40;
  double xmin_floor = 0.1;
  std::size_t n_tail_floor = 50;
  std::size_t n_boot = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path out = "recint_out";
  unsigned threads = 1;
  double trace_trigger = 5.0;
  std::size_t trace_horizon = 240;
  std::size_t dfa_min_intervals = 200;
  std::size_t conditional_bins = 4;
  std::size_t mean_conditional_bins = 20;

  // Relative input paths resolve against `base_dir`.
  static RunConfig from_kv(const KeyValueFile& kv, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  void validate() const;

  // Every setting that influences results, one per line; excludes thread
  // count and output location so bundles compare across those.
  std::string canonical() const;
};

}  // namespace recint::cli
