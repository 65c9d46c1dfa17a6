#include "wrg/stats.hpp"

#include <algorithm>
#include <cmath>

#include "wrg/special_fn.hpp"

namespace wrg::stats {

void validate_windows(std::span<const MarkWindow> windows) {
  for (const auto& w : windows)
    if (!(w.lo < w.hi)) throw WindowOverlap("mark window: need lo < hi");
  for (std::size_t a = 0; a < windows.size(); ++a)
    for (std::size_t b = a + 1; b < windows.size(); ++b) {
      if (windows[a].j != windows[b].j || windows[a].at_least != windows[b].at_least) continue;
      if (windows[a].lo < windows[b].hi && windows[b].lo < windows[a].hi)
        throw WindowOverlap("mark windows at the same level must be disjoint");
    }
}

CountsAccumulator::CountsAccumulator(std::vector<MarkWindow> windows,
                                     analytics::Centering centering,
                                     std::vector<int> factorial_orders)
    : windows_(std::move(windows)), centering_(centering), orders_(std::move(factorial_orders)) {
  validate_windows(windows_);
  counts_.resize(windows_.size());
  marks_.resize(windows_.size());
}

void CountsAccumulator::add(const DegreeLedger& ledger) {
  const double log_n = std::log(static_cast<double>(ledger.n));
  const double rate = 1.0 - 1.0 / centering_.theta;
  std::vector<std::uint64_t> counts(windows_.size(), 0);
  for (std::size_t wi = 0; wi < windows_.size(); ++wi) {
    const auto& win = windows_[wi];
    const long d_level = centering_.center_floor + win.j;
    if (d_level < 1) continue;  // below the tracked band; counted as zero
    const double dd = static_cast<double>(d_level);
    const double center = log_n - rate * dd;
    const double scale = rate * std::sqrt(dd);
    for (std::uint64_t i = 0; i < ledger.n; ++i) {
      const long deg = static_cast<long>(ledger.indeg[i]);
      const bool hit = win.at_least ? deg >= d_level : deg == d_level;
      if (!hit) continue;
      const double z = (std::log(static_cast<double>(i + 1)) - center) / scale;
      if (z > win.lo && z <= win.hi) {
        ++counts[wi];
        marks_[wi].push_back(z);
      }
    }
  }
  for (std::size_t wi = 0; wi < windows_.size(); ++wi) counts_[wi].push_back(counts[wi]);
  ++replicas_;
}

namespace {

double falling_factorial(double x, int c) {
  double out = 1.0;
  for (int i = 0; i < c; ++i) out *= x - i;
  return out;
}

// jackknife standard error of a mean-type estimator over replicas
double jackknife_se(std::span<const double> per_replica) {
  const std::size_t r = per_replica.size();
  if (r < 2) return 0.0;
  double total = 0.0;
  for (double v : per_replica) total += v;
  const double mean = total / r;
  double ss = 0.0;
  for (double v : per_replica) {
    const double loo = (total - v) / (r - 1);  // leave-one-out mean
    ss += (loo - mean) * (loo - mean);
  }
  return std::sqrt(ss * (r - 1) / r);
}

}  // namespace

std::vector<WindowCounts> CountsAccumulator::finish() const {
  std::vector<WindowCounts> out;
  out.reserve(windows_.size());
  for (std::size_t wi = 0; wi < windows_.size(); ++wi) {
    WindowCounts wc;
    wc.window = windows_[wi];
    wc.counts = counts_[wi];
    wc.marks = marks_[wi];
    const std::size_t r = wc.counts.size();
    if (r > 0) {
      double sum = 0.0;
      for (auto c : wc.counts) sum += static_cast<double>(c);
      wc.mean = sum / r;
      if (r > 1) {
        double ss = 0.0;
        for (auto c : wc.counts) {
          const double d = static_cast<double>(c) - wc.mean;
          ss += d * d;
        }
        wc.variance = ss / (r - 1);
      }
      wc.dispersion = wc.mean > 0.0 ? wc.variance / wc.mean : 0.0;
      for (int order : orders_) {
        std::vector<double> ff(r);
        for (std::size_t i = 0; i < r; ++i)
          ff[i] = falling_factorial(static_cast<double>(wc.counts[i]), order);
        double fsum = 0.0;
        for (double v : ff) fsum += v;
        wc.factorial_orders.push_back(order);
        wc.factorial_moments.push_back(fsum / r);
        wc.factorial_se.push_back(jackknife_se(ff));
      }
    }
    out.push_back(std::move(wc));
  }
  return out;
}

std::vector<double> collect_conditional_z(const DegreeLedger& ledger, double theta, int d) {
  if (d < 1) throw special::DomainError("collect_conditional_z: need d >= 1");
  const double rate = 1.0 - 1.0 / theta;
  const double log_n = std::log(static_cast<double>(ledger.n));
  const double center = log_n - rate * d;
  const double scale = rate * std::sqrt(static_cast<double>(d));
  std::vector<double> out;
  for (std::uint64_t i = 0; i < ledger.n; ++i)
    if (static_cast<long>(ledger.indeg[i]) >= d)
      out.push_back((std::log(static_cast<double>(i + 1)) - center) / scale);
  return out;
}

KsResult ks_normal(std::vector<double> sample, double mean) {
  if (sample.empty()) throw EmptySample("ks_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double d_stat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = special::normal_cdf(sample[i] - mean);
    d_stat = std::max(d_stat, std::max(f - static_cast<double>(i) / n,
                                       static_cast<double>(i + 1) / n - f));
  }
  const double sq = std::sqrt(static_cast<double>(n));
  const double x = (sq + 0.12 + 0.11 / sq) * d_stat;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    p += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  KsResult out;
  out.statistic = d_stat;
  out.p_value = std::clamp(p, 0.0, 1.0);
  out.n = n;
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

LocationReport location_statistics(std::span<const RunSummary> summaries,
                                   const analytics::LimitConstants& constants) {
  if (summaries.empty()) throw EmptySample("location_statistics: no summaries");
  std::vector<double> vals;
  vals.reserve(summaries.size());
  for (const auto& s : summaries)
    vals.push_back(std::log(static_cast<double>(s.i_n)) / std::log(static_cast<double>(s.n)));
  std::sort(vals.begin(), vals.end());
  LocationReport out;
  out.replicas = vals.size();
  out.mu = constants.mu;
  out.median = quantile_sorted(vals, 0.5);
  out.iqr = quantile_sorted(vals, 0.75) - quantile_sorted(vals, 0.25);
  // order-statistic 95% CI for the median: ranks n/2 -+ 0.98 sqrt(n)
  const double half = 0.5 * vals.size();
  const double span = 0.98 * std::sqrt(static_cast<double>(vals.size()));
  const auto clamp_rank = [&](double r) {
    return std::min(std::max(r, 0.0), static_cast<double>(vals.size() - 1));
  };
  out.ci_low = vals[static_cast<std::size_t>(clamp_rank(half - span))];
  out.ci_high = vals[static_cast<std::size_t>(clamp_rank(half + span))];
  return out;
}

MaxDegreeReport max_degree_statistics(std::span<const RunSummary> summaries,
                                      const analytics::Centering& centering) {
  if (summaries.empty()) throw EmptySample("max_degree_statistics: no summaries");
  MaxDegreeReport out;
  out.replicas = summaries.size();
  out.limit_value = centering.limit_value;
  double sum_ratio = 0.0, sum_c = 0.0, sum_c2 = 0.0;
  for (const auto& s : summaries) {
    const double max_deg = static_cast<double>(s.max_degree);
    sum_ratio += max_deg / centering.log_theta_n;
    const double c = (max_deg - centering.center) / centering.scale;
    sum_c += c;
    sum_c2 += c * c;
  }
  const double r = static_cast<double>(summaries.size());
  out.mean_ratio = sum_ratio / r;
  out.mean_centered = sum_c / r;
  if (summaries.size() > 1)
    out.sd_centered = std::sqrt(std::max(0.0, (sum_c2 - r * out.mean_centered * out.mean_centered) /
                                                  (r - 1.0)));
  return out;
}

}  // namespace wrg::stats
