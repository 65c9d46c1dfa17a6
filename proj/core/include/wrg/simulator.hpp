#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wrg/analytics.hpp"
#include "wrg/weight_model.hpp"

namespace wrg {

struct ResourceGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GrowthVariant { FixedOutDegree, RandomOutDegree };

struct GrowthConfig {
  std::uint64_t n = 0;
  int m = 1;
  GrowthVariant variant = GrowthVariant::FixedOutDegree;
  WeightModel model = WeightModel::degenerate();
  std::uint64_t seed = 0;
  int track_top_k = 5;
  // retain labels with degree >= max - delta when delta >= 0
  long near_max_delta = -1;
  // RandomOutDegree costs Theta(n^2); refuse n > 1e5 unless overridden
  bool allow_large_random_out_degree = false;
  bool keep_edges = false;
};

// One realized growth run. Vertex labels are 1-based: index i-1 holds
// vertex i. cumsum[i-1] = S_i = W_1 + ... + W_i.
struct DegreeLedger {
  std::uint64_t n = 0;
  int m = 1;
  GrowthVariant variant = GrowthVariant::FixedOutDegree;
  std::vector<double> weights;
  std::vector<std::uint32_t> indeg;
  std::vector<double> cumsum;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;  // (child, parent)
};

struct TopEntry {
  std::uint64_t label = 0;
  std::uint64_t degree = 0;
  double z_mark = 0.0;  // (log label - mu log n) / sqrt((1-sigma2) log n)
  long level = 0;       // degree - floor(centering)
};

struct RunSummary {
  std::uint64_t n = 0;
  std::uint64_t max_degree = 0;
  std::uint64_t i_n = 0;        // smallest label attaining max_degree
  std::uint64_t i_tilde_n = 0;  // largest label attaining max_degree
  std::vector<TopEntry> top;    // by degree, ties ranked by seeded shuffle
  std::vector<std::uint64_t> near_max_labels;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  double elapsed_seconds = 0.0;
};

// Grow one realization; stream_id selects the replica substream of seed.
DegreeLedger grow(const GrowthConfig& config, std::uint64_t stream_id = 0);

// Same growth dynamics with a caller-fixed weight vector (weights.size()
// == n); the edge randomness still comes from (seed, stream_id). Used for
// common-random-number couplings.
DegreeLedger grow_with_weights(const GrowthConfig& config, std::span<const double> weights,
                               std::uint64_t stream_id = 0);

RunSummary summarize(const DegreeLedger& ledger, const analytics::LimitConstants& constants,
                     const analytics::Centering& centering, const GrowthConfig& config,
                     std::uint64_t replica = 0);

// Replica r always uses substream (seed, r): results are byte-identical
// regardless of parallelism. Summaries are returned in replica order.
std::vector<RunSummary> run_ensemble(const GrowthConfig& config, std::uint64_t replicas,
                                     int parallelism);

// Streaming variant: ledgers are produced in parallel blocks and handed to
// the (sequential, replica-ordered) sink, then discarded.
void run_ensemble_fold(
    const GrowthConfig& config, std::uint64_t replicas, int parallelism,
    const std::function<void(const DegreeLedger&, const RunSummary&)>& sink);

}  // namespace wrg
