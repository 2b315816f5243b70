#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace recint {

// Ten bins per decade.
inline const double kLogBinRatio = 1.2589254117941673;  // 10^(1/10)

struct PdfPoint {
  double x = 0.0;      // bin location (geometric centre, or lattice midpoint)
  double p = 0.0;      // density: count / (total * width)
  std::size_t n = 0;   // samples in bin
  double lo = 0.0;     // bin range in sample units
  double hi = 0.0;
  double width = 0.0;  // measure used for normalization
};

struct BinningDescriptor {
  double ratio = kLogBinRatio;
  double anchor = 0.0;   // left edge of bin 0, in unscaled units
  bool discrete = false; // integer samples, width counts lattice points
  double scale = 1.0;    // discrete only: samples reported as value / scale
};

struct PdfEstimate {
  std::vector<PdfPoint> points;  // empty bins omitted
  BinningDescriptor binning;
  std::size_t total = 0;

  // sum of p * width; 1 up to rounding when every sample was binned.
  double integral() const;
};

// Logarithmic binning of positive continuous samples, edges anchor*ratio^k with
// anchor = min(samples).
PdfEstimate log_binned_pdf(std::span<const double> samples, double ratio = kLogBinRatio);

// Logarithmic binning of positive integer samples reported in scaled units
// x = value / scale. A bin's width is the number of integers it contains
// divided by scale, so the estimate is exact for lattice data; bins that
// contain no integer disappear.
PdfEstimate log_binned_pdf_discrete(std::span<const std::int64_t> samples, double scale,
                                    double ratio = kLogBinRatio);

}  // namespace recint
