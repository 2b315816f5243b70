#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "recint/density.hpp"
#include "recint/preprocess.hpp"

namespace recint {

// Waiting times between successive minutes with v[t] > q. Intervals run on
// the concatenated axis and cross day and session boundaries.
struct RecurrenceIntervalSeries {
  double q = 0.0;
  std::vector<std::int64_t> tau;
  // Opening exceedance of each interval.
  std::vector<std::size_t> start_index;
  double mean_tau = 0.0;

  std::size_t size() const { return tau.size(); }
  std::size_t exceedances() const { return tau.empty() ? 0 : tau.size() + 1; }
};

// Minutes t with v[t] > q, skipping minutes without a defined value.
std::vector<std::size_t> exceedance_indices(const NormalizedSeries& v, double q);

RecurrenceIntervalSeries extract_intervals(const NormalizedSeries& v, double q);
RecurrenceIntervalSeries intervals_from_taus(std::vector<std::int64_t> tau, double q = 0.0);

// tau[k] / mean_tau.
std::vector<double> scaled_intervals(const RecurrenceIntervalSeries& ris);

struct ConditionalBin {
  // tau0 range covered by this rank bin.
  std::int64_t tau0_lo = 0;
  std::int64_t tau0_hi = 0;
  std::size_t members = 0;            // intervals ranked into the bin
  std::vector<double> successors;     // scaled tau following each tau0 in the bin
  PdfEstimate pdf;                    // scaled conditional density P(tau|tau0)<tau>
  double mean_successor = 0.0;        // <tau|tau0>/<tau>
  bool empty = false;                 // fewer than 2 successors
};

struct ConditionalStats {
  double q = 0.0;
  double mean_tau = 0.0;
  std::vector<ConditionalBin> bins;
};

// Ranks all intervals ascending (stable, so ties keep time order), splits the
// ranking into n_bins equal parts, then collects the successor of each tau0.
ConditionalStats conditional_pdf(const RecurrenceIntervalSeries& ris, std::size_t n_bins = 4);

enum class Binning { linear, log };

struct ConditionalMeanPoint {
  double tau0 = 0.0;   // mean tau0 in bin / <tau>
  double mean = 0.0;   // <tau|tau0> / <tau>
  double se = 0.0;     // standard error of `mean`
  std::size_t n = 0;
};

// Mean successor interval per tau0 bin; empty bins are omitted.
std::vector<ConditionalMeanPoint> mean_conditional_interval(const RecurrenceIntervalSeries& ris,
                                                            std::size_t n_bins = 20,
                                                            Binning binning = Binning::log);

}  // namespace recint
