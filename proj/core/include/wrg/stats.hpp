#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "wrg/analytics.hpp"
#include "wrg/simulator.hpp"

namespace wrg::stats {

struct WindowOverlap : std::domain_error {
  using std::domain_error::domain_error;
};

struct EmptySample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counting window: degree level offset j relative to the integer centering,
// mark interval (lo, hi] over the extended reals, and whether the level is
// matched exactly or as "at least".
struct MarkWindow {
  long j = 0;
  double lo = 0.0;
  double hi = 0.0;  // lo < hi; +-infinity allowed
  bool at_least = false;
};

// Same-level windows must have disjoint mark intervals.
void validate_windows(std::span<const MarkWindow> windows);

struct WindowCounts {
  MarkWindow window;
  std::vector<std::uint64_t> counts;  // one entry per replica
  double mean = 0.0;
  double variance = 0.0;    // unbiased, across replicas
  double dispersion = 0.0;  // variance / mean (Poisson limit: 1)
  std::vector<int> factorial_orders;
  std::vector<double> factorial_moments;  // mean of x(x-1)...(x-c+1)
  std::vector<double> factorial_se;       // jackknife over replicas
  std::vector<double> marks;              // pooled marks of qualifying vertices
};

// Per-replica counts of vertices whose degree sits at level
// center_floor + j and whose label mark
//   (log i - (log n - (1-1/theta) d)) / sqrt((1-1/theta)^2 d),
// d = center_floor + j, falls in the window interval.
class CountsAccumulator {
public:
  CountsAccumulator(std::vector<MarkWindow> windows, analytics::Centering centering,
                    std::vector<int> factorial_orders = {1, 2});

  void add(const DegreeLedger& ledger);
  std::vector<WindowCounts> finish() const;
  std::uint64_t replicas() const { return replicas_; }

private:
  std::vector<MarkWindow> windows_;
  analytics::Centering centering_;
  std::vector<int> orders_;
  std::vector<std::vector<std::uint64_t>> counts_;
  std::vector<std::vector<double>> marks_;
  std::uint64_t replicas_ = 0;
};

// z-scores of labels of vertices with in-degree >= d (Gaussian in the
// limit, location 0 or the class-specific negative mean).
std::vector<double> collect_conditional_z(const DegreeLedger& ledger, double theta, int d);

struct KsResult {
  double statistic = 0.0;  // sup-distance D_n
  double p_value = 0.0;    // asymptotic Kolmogorov tail
  std::size_t n = 0;
};

// One-sample KS against Normal(mean, 1). Throws EmptySample on an empty
// sample.
KsResult ks_normal(std::vector<double> sample, double mean = 0.0);

struct LocationReport {
  std::size_t replicas = 0;
  double median = 0.0;  // of log I_n / log n
  double iqr = 0.0;
  double ci_low = 0.0;  // order-statistic 95% CI for the median
  double ci_high = 0.0;
  double mu = 0.0;  // the predicted limit
};

LocationReport location_statistics(std::span<const RunSummary> summaries,
                                   const analytics::LimitConstants& constants);

struct MaxDegreeReport {
  std::size_t replicas = 0;
  double mean_ratio = 0.0;  // mean of max_degree / log_theta n (limit 1)
  double mean_centered = 0.0;  // mean of (max_degree - center) / scale
  double sd_centered = 0.0;
  double limit_value = 0.0;  // class-specific target for mean_centered
};

MaxDegreeReport max_degree_statistics(std::span<const RunSummary> summaries,
                                      const analytics::Centering& centering);

}  // namespace wrg::stats
