#include "recint/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "recint/error.hpp"

namespace recint {

double PdfEstimate::integral() const {
  double sum = 0.0;
  for (const auto& pt : points) sum += pt.p * pt.width;
  return sum;
}

PdfEstimate log_binned_pdf(std::span<const double> samples, double ratio) {
  if (samples.empty()) throw Error(ErrorKind::statistics, "density estimate needs at least one sample");
  if (!(ratio > 1.0)) throw Error(ErrorKind::statistics, "log-binning ratio must exceed 1");
  const double anchor = *std::min_element(samples.begin(), samples.end());
  if (!(anchor > 0.0)) throw Error(ErrorKind::statistics, "log-binning requires positive samples");

  const double log_ratio = std::log(ratio);
  std::map<long, std::size_t> counts;
  for (double x : samples) {
    const auto k = static_cast<long>(std::floor(std::log(x / anchor) / log_ratio));
    ++counts[std::max(0L, k)];
  }

  PdfEstimate est;
  est.binning = {ratio, anchor, false, 1.0};
  est.total = samples.size();
  const auto total = static_cast<double>(samples.size());
  for (const auto& [k, n] : counts) {
    PdfPoint pt;
    pt.lo = anchor * std::pow(ratio, static_cast<double>(k));
    pt.hi = pt.lo * ratio;
    pt.width = pt.hi - pt.lo;
    pt.x = std::sqrt(pt.lo * pt.hi);
    pt.n = n;
    pt.p = static_cast<double>(n) / (total * pt.width);
    est.points.push_back(pt);
  }
  return est;
}

PdfEstimate log_binned_pdf_discrete(std::span<const std::int64_t> samples, double scale, double ratio) {
  if (samples.empty()) throw Error(ErrorKind::statistics, "density estimate needs at least one sample");
  if (!(ratio > 1.0)) throw Error(ErrorKind::statistics, "log-binning ratio must exceed 1");
  if (!(scale > 0.0)) throw Error(ErrorKind::statistics, "discrete density scale must be positive");
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  const std::int64_t lo_value = *min_it;
  const std::int64_t hi_value = *max_it;
  if (lo_value < 1) throw Error(ErrorKind::statistics, "log-binning requires positive samples");

  // Integer starts of successive bins: first integer >= anchor * ratio^k.
  std::vector<std::int64_t> starts;
  const auto anchor = static_cast<double>(lo_value);
  for (int k = 0;; ++k) {
    const auto start = static_cast<std::int64_t>(std::ceil(anchor * std::pow(ratio, k)));
    if (starts.empty() || start > starts.back()) starts.push_back(start);
    if (start > hi_value) break;
  }

  std::vector<std::size_t> counts(starts.size() - 1, 0);
  for (auto value : samples) {
    const auto it = std::upper_bound(starts.begin(), starts.end(), value);
    ++counts[static_cast<std::size_t>(it - starts.begin()) - 1];
  }

  PdfEstimate est;
  est.binning = {ratio, anchor, true, scale};
  est.total = samples.size();
  const auto total = static_cast<double>(samples.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0) continue;
    const auto first = starts[b];
    const auto last = starts[b + 1] - 1;
    PdfPoint pt;
    pt.lo = static_cast<double>(first);
    pt.hi = static_cast<double>(last + 1);
    pt.width = static_cast<double>(last - first + 1) / scale;
    pt.x = 0.5 * static_cast<double>(first + last) / scale;
    pt.n = counts[b];
    pt.p = static_cast<double>(counts[b]) / (total * pt.width);
    est.points.push_back(pt);
  }
  return est;
}

}  // namespace recint
