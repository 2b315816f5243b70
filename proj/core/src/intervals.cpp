#include "recint/intervals.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace recint {

std::vector<std::size_t> exceedance_indices(const NormalizedSeries& v, double q) {
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (v.is_defined(t) && v.v[t] > q) idx.push_back(t);
  }
  return idx;
}

RecurrenceIntervalSeries intervals_from_taus(std::vector<std::int64_t> tau, double q) {
  if (tau.empty()) throw Error(ErrorKind::statistics, "interval series is empty");
  RecurrenceIntervalSeries ris;
  ris.q = q;
  std::size_t position = 0;
  ris.start_index.reserve(tau.size());
  std::int64_t sum = 0;
  for (auto t : tau) {
    if (t < 1) throw Error(ErrorKind::statistics, "recurrence intervals must be >= 1");
    ris.start_index.push_back(position);
    position += static_cast<std::size_t>(t);
    sum += t;
  }
  ris.tau = std::move(tau);
  ris.mean_tau = static_cast<double>(sum) / static_cast<double>(ris.tau.size());
  return ris;
}

RecurrenceIntervalSeries extract_intervals(const NormalizedSeries& v, double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::statistics, "threshold q must be positive");
  const auto idx = exceedance_indices(v, q);
  if (idx.size() < 2) throw InsufficientExceedances(q, idx.size());
  RecurrenceIntervalSeries ris;
  ris.q = q;
  ris.tau.reserve(idx.size() - 1);
  ris.start_index.assign(idx.begin(), idx.end() - 1);
  for (std::size_t k = 1; k < idx.size(); ++k) ris.tau.push_back(static_cast<std::int64_t>(idx[k] - idx[k - 1]));
  ris.mean_tau = static_cast<double>(idx.back() - idx.front()) / static_cast<double>(ris.tau.size());
  return ris;
}

std::vector<double> scaled_intervals(const RecurrenceIntervalSeries& ris) {
  if (ris.tau.empty()) throw Error(ErrorKind::statistics, "interval series is empty");
  std::vector<double> x;
  x.reserve(ris.tau.size());
  for (auto t : ris.tau) x.push_back(static_cast<double>(t) / ris.mean_tau);
  return x;
}

ConditionalStats conditional_pdf(const RecurrenceIntervalSeries& ris, std::size_t n_bins) {
  const std::size_t n = ris.tau.size();
  if (n_bins == 0) throw Error(ErrorKind::statistics, "conditional PDF needs at least one tau0 bin");
  if (n < 2 * n_bins) {
    throw Error(ErrorKind::statistics,
                fmt::format("conditional PDF with {} bins needs at least {} intervals, got {}", n_bins, 2 * n_bins, n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ris.tau[a] < ris.tau[b]; });

  // Rank r goes to bin floor(r * n_bins / n): sizes differ by at most one.
  std::vector<std::size_t> bin_of(n);
  ConditionalStats stats;
  stats.q = ris.q;
  stats.mean_tau = ris.mean_tau;
  stats.bins.resize(n_bins);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t b = r * n_bins / n;
    bin_of[order[r]] = b;
    auto& bin = stats.bins[b];
    const auto value = ris.tau[order[r]];
    if (bin.members == 0) bin.tau0_lo = value;
    bin.tau0_hi = value;
    ++bin.members;
  }

  std::vector<std::vector<std::int64_t>> raw(n_bins);
  for (std::size_t k = 0; k + 1 < n; ++k) raw[bin_of[k]].push_back(ris.tau[k + 1]);

  for (std::size_t b = 0; b < n_bins; ++b) {
    auto& bin = stats.bins[b];
    bin.empty = raw[b].size() < 2;
    if (raw[b].empty()) continue;
    double sum = 0.0;
    for (auto t : raw[b]) {
      const double x = static_cast<double>(t) / ris.mean_tau;
      bin.successors.push_back(x);
      sum += x;
    }
    bin.mean_successor = sum / static_cast<double>(raw[b].size());
    if (!bin.empty) bin.pdf = log_binned_pdf_discrete(raw[b], ris.mean_tau);
  }
  return stats;
}

std::vector<ConditionalMeanPoint> mean_conditional_interval(const RecurrenceIntervalSeries& ris, std::size_t n_bins,
                                                            Binning binning) {
  const std::size_t n = ris.tau.size();
  if (n < 2) throw Error(ErrorKind::statistics, "mean conditional interval needs at least 2 intervals");
  if (n_bins == 0) throw Error(ErrorKind::statistics, "mean conditional interval needs at least one bin");

  const auto [min_it, max_it] = std::minmax_element(ris.tau.begin(), ris.tau.end() - 1);
  const auto lo = static_cast<double>(*min_it);
  const auto hi = static_cast<double>(*max_it);
  auto bin_index = [&](double tau0) -> std::size_t {
    if (hi <= lo) return 0;
    const double u = binning == Binning::log ? std::log(tau0 / lo) / std::log(hi / lo) : (tau0 - lo) / (hi - lo);
    return std::min(n_bins - 1, static_cast<std::size_t>(u * static_cast<double>(n_bins)));
  };

  struct Acc {
    double tau0 = 0.0, sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
  };
  std::vector<Acc> acc(n_bins);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto tau0 = static_cast<double>(ris.tau[k]);
    const auto next = static_cast<double>(ris.tau[k + 1]);
    auto& a = acc[bin_index(tau0)];
    a.tau0 += tau0;
    a.sum += next;
    a.sum_sq += next * next;
    ++a.n;
  }

  std::vector<ConditionalMeanPoint> out;
  for (const auto& a : acc) {
    if (a.n == 0) continue;
    const auto count = static_cast<double>(a.n);
    const double mean = a.sum / count;
    const double var = a.n > 1 ? std::max(0.0, (a.sum_sq - count * mean * mean) / (count - 1.0)) : 0.0;
    out.push_back({a.tau0 / count / ris.mean_tau, mean / ris.mean_tau, std::sqrt(var / count) / ris.mean_tau, a.n});
  }
  return out;
}

}  // namespace recint
