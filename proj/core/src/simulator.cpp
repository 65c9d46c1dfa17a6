#include "wrg/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace wrg {

namespace {

void grow_edges(DegreeLedger& ledger, const GrowthConfig& config, RngStream& rng) {
  const std::uint64_t n = config.n;
  const auto& w = ledger.weights;
  ledger.cumsum.resize(n);
  double s = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    s += w[i];
    ledger.cumsum[i] = s;
  }
  ledger.indeg.assign(n, 0);
  if (config.variant == GrowthVariant::FixedOutDegree) {
    for (std::uint64_t v = 2; v <= n; ++v) {
      for (int e = 0; e < config.m; ++e) {
        // predecessor proportional to weight: uniform proposal + accept
        // with probability w (valid since w <= 1)
        std::uint64_t j;
        do {
          j = rng.next_below(v - 1);
        } while (rng.next_unit() >= w[j]);
        ++ledger.indeg[j];
        if (config.keep_edges) ledger.edges.emplace_back(v, j + 1);
      }
    }
  } else {
    for (std::uint64_t v = 2; v <= n; ++v) {
      const double s_prev = ledger.cumsum[v - 2];
      for (std::uint64_t i = 0; i < v - 1; ++i) {
        if (rng.next_unit() < w[i] / s_prev) {
          ++ledger.indeg[i];
          if (config.keep_edges) ledger.edges.emplace_back(v, i + 1);
        }
      }
    }
  }
}

void validate(const GrowthConfig& config) {
  if (config.n < 1) throw InvalidParameter("grow: need n >= 1");
  if (config.m < 1) throw InvalidParameter("grow: need m >= 1");
  if (config.variant == GrowthVariant::RandomOutDegree && config.n > 100000 &&
      !config.allow_large_random_out_degree)
    throw ResourceGuard("grow: RandomOutDegree with n > 1e5 requires an explicit override");
  if (config.keep_edges && config.n > 100000)
    throw ResourceGuard("grow: edge retention limited to n <= 1e5");
}

}  // namespace

DegreeLedger grow(const GrowthConfig& config, std::uint64_t stream_id) {
  validate(config);
  RngStream rng = RngStream::from_seed(config.seed, stream_id);
  DegreeLedger ledger;
  ledger.n = config.n;
  ledger.m = config.m;
  ledger.variant = config.variant;
  ledger.weights.resize(config.n);
  for (auto& w : ledger.weights) w = config.model.sample(rng);
  grow_edges(ledger, config, rng);
  return ledger;
}

DegreeLedger grow_with_weights(const GrowthConfig& config, std::span<const double> weights,
                               std::uint64_t stream_id) {
  validate(config);
  if (weights.size() != config.n)
    throw InvalidParameter("grow_with_weights: weights.size() must equal n");
  for (double w : weights)
    if (!(w > 0.0 && w <= 1.0))
      throw InvalidParameter("grow_with_weights: weights must lie in (0,1]");
  RngStream rng = RngStream::from_seed(config.seed, stream_id);
  DegreeLedger ledger;
  ledger.n = config.n;
  ledger.m = config.m;
  ledger.variant = config.variant;
  ledger.weights.assign(weights.begin(), weights.end());
  grow_edges(ledger, config, rng);
  return ledger;
}

RunSummary summarize(const DegreeLedger& ledger, const analytics::LimitConstants& constants,
                     const analytics::Centering& centering, const GrowthConfig& config,
                     std::uint64_t replica) {
  RunSummary out;
  out.n = ledger.n;
  out.seed = config.seed;
  out.replica = replica;
  std::uint32_t max_deg = 0;
  out.i_n = 1;
  for (std::uint64_t i = 0; i < ledger.n; ++i) {
    const std::uint32_t d = ledger.indeg[i];
    if (d > max_deg) {
      max_deg = d;
      out.i_n = i + 1;
    }
  }
  out.max_degree = max_deg;
  for (std::uint64_t i = ledger.n; i-- > 0;) {
    if (ledger.indeg[i] == max_deg) {
      out.i_tilde_n = i + 1;
      break;
    }
  }
  if (config.near_max_delta >= 0) {
    const long cut = static_cast<long>(max_deg) - config.near_max_delta;
    for (std::uint64_t i = 0; i < ledger.n; ++i)
      if (static_cast<long>(ledger.indeg[i]) >= cut) out.near_max_labels.push_back(i + 1);
  }

  const int k = config.track_top_k;
  if (k > 0 && ledger.n > 0) {
    // threshold degree via histogram, then a seeded shuffle ranks the tie
    // group at the cut ("ties are split uniformly at random")
    std::vector<std::uint64_t> hist(max_deg + 1, 0);
    for (std::uint64_t i = 0; i < ledger.n; ++i) ++hist[ledger.indeg[i]];
    std::uint64_t above = 0;
    std::uint32_t cut = max_deg;
    for (;;) {
      if (above + hist[cut] >= static_cast<std::uint64_t>(k) || cut == 0) break;
      above += hist[cut];
      --cut;
    }
    std::vector<std::uint64_t> strict, ties;
    for (std::uint64_t i = 0; i < ledger.n; ++i) {
      if (ledger.indeg[i] > cut)
        strict.push_back(i + 1);
      else if (ledger.indeg[i] == cut)
        ties.push_back(i + 1);
    }
    std::sort(strict.begin(), strict.end(), [&](std::uint64_t a, std::uint64_t b) {
      return ledger.indeg[a - 1] != ledger.indeg[b - 1] ? ledger.indeg[a - 1] > ledger.indeg[b - 1]
                                                       : a < b;
    });
    RngStream tie_rng = RngStream::from_seed(config.seed, replica ^ 0xA5A5A5A5A5A5A5A5ull);
    for (std::size_t i = ties.size(); i > 1; --i)
      std::swap(ties[i - 1], ties[tie_rng.next_below(i)]);
    std::vector<std::uint64_t> picked = std::move(strict);
    for (std::uint64_t lbl : ties) {
      if (picked.size() >= static_cast<std::size_t>(k)) break;
      picked.push_back(lbl);
    }
    const double log_n = std::log(static_cast<double>(ledger.n));
    const double denom = std::sqrt((1.0 - constants.sigma2) * log_n);
    for (std::uint64_t lbl : picked) {
      TopEntry e;
      e.label = lbl;
      e.degree = ledger.indeg[lbl - 1];
      e.z_mark = (std::log(static_cast<double>(lbl)) - constants.mu * log_n) / denom;
      e.level = static_cast<long>(e.degree) - centering.center_floor;
      out.top.push_back(e);
    }
  }
  return out;
}

namespace {

struct EnsembleContext {
  const GrowthConfig* config;
  analytics::LimitConstants constants;
  analytics::Centering centering;
};

RunSummary one_replica(const EnsembleContext& ctx, std::uint64_t r, DegreeLedger* keep) {
  const auto t0 = std::chrono::steady_clock::now();
  DegreeLedger ledger = grow(*ctx.config, r);
  RunSummary s = summarize(ledger, ctx.constants, ctx.centering, *ctx.config, r);
  s.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (keep) *keep = std::move(ledger);
  return s;
}

}  // namespace

std::vector<RunSummary> run_ensemble(const GrowthConfig& config, std::uint64_t replicas,
                                     int parallelism) {
  std::vector<RunSummary> out(replicas);
  run_ensemble_fold(config, replicas, parallelism,
                    [&](const DegreeLedger&, const RunSummary& s) { out[s.replica] = s; });
  return out;
}

void run_ensemble_fold(
    const GrowthConfig& config, std::uint64_t replicas, int parallelism,
    const std::function<void(const DegreeLedger&, const RunSummary&)>& sink) {
  if (replicas == 0) return;
  if (parallelism < 1) parallelism = 1;
  EnsembleContext ctx{&config, analytics::limit_constants(config.model, config.m),
                      analytics::centering(config.model, std::max<double>(config.n, 3.0))};
  const std::uint64_t block = static_cast<std::uint64_t>(parallelism);
  std::vector<DegreeLedger> ledgers(block);
  std::vector<RunSummary> summaries(block);
  for (std::uint64_t start = 0; start < replicas; start += block) {
    const std::uint64_t count = std::min(block, replicas - start);
    if (count == 1 || parallelism == 1) {
      for (std::uint64_t i = 0; i < count; ++i) {
        summaries[i] = one_replica(ctx, start + i, &ledgers[i]);
        sink(ledgers[i], summaries[i]);
        ledgers[i] = DegreeLedger{};
      }
      continue;
    }
    std::vector<std::thread> workers;
    workers.reserve(count);
    std::exception_ptr error;
    std::mutex error_mu;
    for (std::uint64_t i = 0; i < count; ++i) {
      workers.emplace_back([&, i] {
        try {
          summaries[i] = one_replica(ctx, start + i, &ledgers[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
    for (std::uint64_t i = 0; i < count; ++i) {
      sink(ledgers[i], summaries[i]);
      ledgers[i] = DegreeLedger{};
    }
  }
}

}  // namespace wrg
