#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recint/coupling.hpp"
#include "recint/gof.hpp"
#include "recint/ingest.hpp"
#include "recint/intervals.hpp"
#include "recint/memory.hpp"
#include "recint/preprocess.hpp"
#include "recint/tailfit.hpp"
#include "run_config.hpp"

namespace recint::cli {

// Error raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& what)
      : Error(kind, stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct InstrumentData {
  std::string id;
  MinuteBarSeries bars;
  IntradayProfile profile;
  NormalizedSeries volume;
  NormalizedSeries abs_return;
  std::string input_hash;
  std::vector<std::string> warnings;
};

InstrumentData load_instrument(const Instrument& inst, const IngestConfig& ingest);

// Per-instrument seeds do not depend on the order instruments are listed in.
std::uint64_t instrument_seed(std::uint64_t master, const std::string& id, std::uint64_t salt);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

struct Table1Row {
  std::string instrument;
  std::vector<double> q_list;
  PowerLawFit fit;
  std::optional<GofReport> gof;
};

nlohmann::json to_json(const Table1Row& row, bool with_ks = true, bool with_ksw = true, bool with_cvm = true);
// Reads back the fit part of a row.
Table1Row table1_from_json(const nlohmann::json& j);

// Throws Error(statistics) if any number in `j` is NaN or infinite.
void require_finite(const nlohmann::json& j, const std::string& where);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Artifact writers; each returns the written file names relative to `dir`.
std::vector<std::string> write_profile(const std::filesystem::path& dir, const InstrumentData& data);
std::vector<std::string> write_intervals(const std::filesystem::path& dir, const InstrumentData& data,
                                         const std::vector<double>& q_list);
std::vector<std::string> write_scaled_pdf(const std::filesystem::path& dir, const InstrumentData& data,
                                          const std::vector<double>& q_list, const PowerLawFit& fit);
std::vector<std::string> write_conditional(const std::filesystem::path& dir, const InstrumentData& data,
                                           const RunConfig& cfg, Binning binning, std::vector<std::string>& warnings);
std::vector<std::string> write_dfa(const std::filesystem::path& dir, const MemoryReport& memory);
std::vector<std::string> write_trace(const std::filesystem::path& dir, const VolumeTrace& trace);
std::vector<std::string> write_correlation(const std::filesystem::path& dir,
                                           const std::vector<IntervalReturnCorrelation>& rows);
std::vector<std::string> write_comovement(const std::filesystem::path& dir, const std::vector<ComovementCurve>& curves);

PowerLawFit fit_instrument(const InstrumentData& data, const RunConfig& cfg);
GofReport gof_instrument(const InstrumentData& data, const RunConfig& cfg, const PowerLawFit& fit);
MemoryReport memory_instrument(const InstrumentData& data, const RunConfig& cfg);
std::vector<IntervalReturnCorrelation> correlation_instrument(const InstrumentData& data, const RunConfig& cfg,
                                                              CorrelationKind kind, std::vector<std::string>& warnings);
std::vector<ComovementCurve> comovement_instrument(const InstrumentData& data, const RunConfig& cfg,
                                                   std::vector<std::string>& warnings);
VolumeTrace trace_instrument(const InstrumentData& data, const RunConfig& cfg,
                             std::optional<std::size_t> single_event = std::nullopt);

std::vector<InstrumentData> load_all(const RunConfig& cfg);

inline constexpr const char* kSoftwareName = "recint";
inline constexpr const char* kSoftwareVersion = "0.1.0";

// Full bundle: report.json (Table-1 rows), per-instrument figure data, and
// manifest.json. On failure a `.partial` marker names the stage and cause.
void run_full_report(const RunConfig& cfg);

}  // namespace recint::cli
