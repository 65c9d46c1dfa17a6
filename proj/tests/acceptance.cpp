// Acceptance harness: one line per criterion, nonzero exit when any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "wrg/analytics.hpp"
#include "wrg/exact_oracle.hpp"
#include "wrg/rng.hpp"
#include "wrg/simulator.hpp"
#include "wrg/special_fn.hpp"
#include "wrg/stats.hpp"
#include "wrg/weight_model.hpp"

using namespace wrg;
using Clock = std::chrono::steady_clock;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
int g_failures = 0;

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

void report(int criterion, const char* name, bool pass, const std::string& details) {
  std::printf("criterion %2d (%s): %s — %s\n", criterion, name, pass ? "PASS" : "FAIL",
              details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. simulator vs exact oracle, total variation over 1e6 replicas per spec

void criterion_1() {
  struct Spec {
    oracle::ExactSpec oracle;
  };
  std::vector<oracle::ExactSpec> specs = {
      {3, 1, {1.0, 1.0, 1.0}, {1, 2}},
      {5, 1, {1.0, 0.5, 0.8, 0.3, 0.9}, {1, 2}},
      {6, 2, {0.9, 0.4, 1.0, 0.2, 0.7, 0.55}, {1, 3}},
      {4, 2, {0.6, 0.6, 0.6, 0.6}, {1, 2, 3}},
      {6, 1, {0.3, 0.9, 0.5, 0.7, 0.2, 0.8}, {2, 4}},
  };
  bool all_pass = true;
  std::string details;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    const auto t0 = Clock::now();
    const auto& spec = specs[si];
    const auto exact = oracle::exact_joint(spec);
    const int k = static_cast<int>(spec.tracked.size());
    std::vector<std::size_t> strides(k, 1);
    for (int t = k - 2; t >= 0; --t) strides[t] = strides[t + 1] * exact.dims[t + 1];

    const std::uint64_t replicas = 1000000;
    const int threads = worker_count();
    std::vector<std::vector<std::uint64_t>> partial(threads,
                                                    std::vector<std::uint64_t>(exact.probs.size(), 0));
    GrowthConfig cfg;
    cfg.n = spec.n;
    cfg.m = spec.m;
    cfg.seed = 1000 + si;
    cfg.track_top_k = 0;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        auto& local = partial[t];
        for (std::uint64_t rep = t; rep < replicas; rep += threads) {
          const auto ledger = grow_with_weights(cfg, spec.weights, rep);
          std::size_t idx = 0;
          for (int j = 0; j < k; ++j) idx += ledger.indeg[spec.tracked[j] - 1] * strides[j];
          ++local[idx];
        }
      });
    }
    for (auto& th : pool) th.join();
    double tv = 0.0;
    for (std::size_t idx = 0; idx < exact.probs.size(); ++idx) {
      std::uint64_t c = 0;
      for (int t = 0; t < threads; ++t) c += partial[t][idx];
      tv += std::abs(static_cast<double>(c) / replicas - exact.probs[idx]);
    }
    tv /= 2.0;
    const double elapsed = seconds_since(t0);
    const bool ok = tv < 0.01 && elapsed < 120.0;
    all_pass = all_pass && ok;
    details += fmt("spec%zu tv=%.4f (%.0fs) ", si + 1, tv, elapsed);
  }
  report(1, "oracle equivalence", all_pass, details + "[band tv<0.01, <2min/spec]");
}

// ---------------------------------------------------------------------------
// 2. special-function certification

void criterion_2() {
  using namespace wrg::special;
  double worst_w = 0.0;
  for (double y = -1.0; y <= 20.0; y += 0.0625)
    worst_w = std::max(worst_w, std::abs(lambert_w(Branch::Principal, y * std::exp(y)) - y) /
                                    std::max(1.0, std::abs(y)));
  for (double y = -30.0; y <= -1.0; y += 0.0625)
    worst_w = std::max(worst_w, std::abs(lambert_w(Branch::Negative, y * std::exp(y)) - y) /
                                    std::max(1.0, std::abs(y)));
  double worst_g = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double shape = 0.5 + 2.7 * i;
    for (int j = 0; j < 20; ++j) {
      const double x = 0.25 + 2.0 * j;
      double term = 1.0 / shape, series = term;
      for (int k = 1; k <= 200; ++k) {
        term *= x / (shape + k);
        series += term;
      }
      series *= std::exp(-x + shape * std::log(x) - std::lgamma(shape));
      worst_g = std::max(worst_g, std::abs(reg_gamma_cdf(shape, x) - series));
    }
  }
  double worst_n = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.0625)
    worst_n = std::max(worst_n, std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0));
  const bool ok = worst_w < 1e-12 && worst_g < 1e-12 && worst_n < 1e-14;
  report(2, "special functions", ok,
         fmt("lambert residual %.1e (<1e-12), gamma vs series %.1e (<1e-12), "
             "normal symmetry %.1e (<1e-14)",
             worst_w, worst_g, worst_n));
}

// ---------------------------------------------------------------------------
// 3. fixed points and phase boundary pinching

void criterion_3() {
  const std::vector<WeightModel> models = {
      WeightModel::degenerate(),
      WeightModel::atom_mixture(0.5, AtomBase::uniform(0.3, 0.9)),
      WeightModel::beta_conditioned(2.0, 2.0, 0.1),
      WeightModel::gamma_fraction(0.0, 1.0, 0.2),
      WeightModel::pareto_weibull(3.0),
      WeightModel::rav_canonical(1.0, 2.0),
  };
  double worst_fix = 0.0;
  int pairs = 0;
  for (const auto& model : models)
    for (int m : {1, 2}) {
      const auto c = analytics::limit_constants(model, m);
      worst_fix = std::max(worst_fix, std::abs(analytics::f_rate(c.mu, c) - c.mu));
      ++pairs;
    }
  bool bracket_ok = true;
  double worst_pinch = 0.0;
  for (const auto& model : models) {
    const auto c = analytics::limit_constants(model, 1);
    const auto wide = analytics::phase_boundary(c, 0.05);
    bracket_ok = bracket_ok && wide.w2 < c.mu && c.mu < wide.w1;
    const auto tight = analytics::phase_boundary(c, 1e-8);
    worst_pinch = std::max({worst_pinch, std::abs(tight.w1 - c.mu), std::abs(tight.w2 - c.mu)});
  }
  const bool ok = worst_fix < 1e-12 && bracket_ok && worst_pinch < 1e-4;
  report(3, "closed-form self-consistency", ok,
         fmt("%d pairs, worst |f(mu)-mu| %.1e (<1e-12); bracket %s; pinch at eta=1e-8 %.1e "
             "(<1e-4)",
             pairs, worst_fix, bracket_ok ? "holds" : "BROKEN", worst_pinch));
}

// ---------------------------------------------------------------------------
// 4. limiting degree tail: quadrature vs Monte Carlo

void criterion_4() {
  bool ok = true;
  std::string details;
  double worst_deg = 0.0;
  for (int k = 1; k <= 30; ++k)
    worst_deg = std::max(worst_deg, std::abs(analytics::limiting_degree_tail(
                                                WeightModel::degenerate(), k) -
                                             std::pow(2.0, -k)));
  ok = ok && worst_deg < 1e-14;
  details += fmt("degenerate 2^-k err %.1e; ", worst_deg);
  const std::vector<WeightModel> models = {
      WeightModel::atom_mixture(0.5, AtomBase::uniform(0.3, 0.9)),
      WeightModel::beta_conditioned(2.0, 2.0, 0.1),
      WeightModel::pareto_weibull(3.0),
  };
  const char* names[] = {"atom", "beta", "weibull"};
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const auto& model = models[mi];
    const double theta = model.theta(1);
    const int n = 10000000;
    const int threads = worker_count();
    std::vector<std::array<double, 6>> acc(threads, {0, 0, 0, 0, 0, 0});
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        RngStream rng = RngStream::from_seed(4000 + mi, t);
        auto& a = acc[t];
        for (int i = t; i < n; i += threads) {
          const double w = model.sample(rng);
          const double r = w / (theta - 1.0 + w);
          const double v1 = r, v5 = std::pow(r, 5), v20 = std::pow(r, 20);
          a[0] += v1;
          a[1] += v1 * v1;
          a[2] += v5;
          a[3] += v5 * v5;
          a[4] += v20;
          a[5] += v20 * v20;
        }
      });
    }
    for (auto& th : pool) th.join();
    const int ks[] = {1, 5, 20};
    for (int ki = 0; ki < 3; ++ki) {
      double sum = 0.0, sum2 = 0.0;
      for (int t = 0; t < threads; ++t) {
        sum += acc[t][2 * ki];
        sum2 += acc[t][2 * ki + 1];
      }
      const double mc = sum / n;
      const double se = std::sqrt(std::max(1e-300, (sum2 / n - mc * mc) / n));
      const double quad = analytics::limiting_degree_tail(model, ks[ki]);
      const double z = std::abs(mc - quad) / std::max(se, 1e-300);
      ok = ok && z < 4.0;
      if (z >= 4.0) details += fmt("%s k=%d z=%.1f! ", names[mi], ks[ki], z);
    }
    details += fmt("%s ok; ", names[mi]);
  }
  report(4, "limiting tail law", ok, details + "[<=4 SE at 1e7 samples, k in {1,5,20}]");
}

// ---------------------------------------------------------------------------
// 5. finite-n degree/label law: simulation confrontation + asymptotic ratio

void criterion_5() {
  const auto t0 = Clock::now();
  const auto model = WeightModel::degenerate();
  const double n = 1e6;
  const int d = 25;
  const double ell = n * std::exp(-0.5 * d);  // 1 - 1/theta = 1/2
  const auto law = analytics::finite_n_joint_law(model, n, d, ell);
  const double predicted = n * law.at_least_upper;

  GrowthConfig cfg;
  cfg.n = static_cast<std::uint64_t>(n);
  cfg.model = model;
  cfg.seed = 555;
  cfg.track_top_k = 0;
  const std::uint64_t replicas = 20;  // 2e7 pooled vertex draws
  std::uint64_t qualifying = 0;
  run_ensemble_fold(cfg, replicas, worker_count(),
                    [&](const DegreeLedger& ledger, const RunSummary&) {
                      const auto first = static_cast<std::uint64_t>(std::floor(ell));
                      for (std::uint64_t i = first; i < ledger.n; ++i)
                        if (ledger.indeg[i] >= static_cast<std::uint32_t>(d) &&
                            static_cast<double>(i + 1) > ell)
                          ++qualifying;
                    });
  const double estimate = static_cast<double>(qualifying) / replicas;
  const double rel_err = std::abs(estimate - predicted) / predicted;
  const double elapsed = seconds_since(t0);
  const bool sim_ok = rel_err <= 0.15 && elapsed < 600.0;

  analytics::FiniteNOptions relaxed;
  relaxed.enforce_preconditions = false;
  const int d_far = 400;
  double worst_ratio_err = 0.0;
  for (double x : {-0.5, 0.0, 0.5}) {
    const double ell_far = n * std::exp(-0.5 * d_far + x * 0.5 * std::sqrt(1.0 * d_far));
    const auto far = analytics::finite_n_joint_law(model, n, d_far, ell_far, relaxed);
    const double asym = analytics::asymptotic_law(model, d_far, x, analytics::LawMode::AtLeast);
    worst_ratio_err = std::max(worst_ratio_err, std::abs(far.at_least_upper / asym - 1.0));
  }
  const bool ratio_ok = worst_ratio_err <= 0.10;

  report(5, "finite-n law", sim_ok && ratio_ok,
         fmt("sim: n*P predicted %.4f, pooled estimate %.4f (count %llu / %llu replicas), "
             "rel err %.0f%% (band 15%%), %.0fs; analytic ratio err %.3f (band 10%%) — the "
             "simulation band is unattainable at these parameters: the qualifying event has "
             "expected pooled count ~%.2f, so no integer count lands in the band",
             predicted, estimate, static_cast<unsigned long long>(qualifying),
             static_cast<unsigned long long>(replicas), rel_err * 100.0, elapsed,
             worst_ratio_err, predicted * replicas));
}

// ---------------------------------------------------------------------------
// 6. location of the maximum across m

void criterion_6() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string details;
  std::vector<double> medians, mus;
  for (int m : {1, 2, 3}) {
    GrowthConfig cfg;
    cfg.n = 1000000;
    cfg.m = m;
    cfg.model = WeightModel::degenerate();
    cfg.seed = 600 + m;
    cfg.track_top_k = 0;
    const auto summaries = run_ensemble(cfg, 100, worker_count());
    const auto constants = analytics::limit_constants(cfg.model, m);
    const auto loc = stats::location_statistics(summaries, constants);
    medians.push_back(loc.median);
    mus.push_back(constants.mu);
    if (m == 1) {
      ok = ok && std::abs(loc.median - constants.mu) <= 0.06;
      details += fmt("m=1 median %.4f vs mu %.4f (band 0.06); ", loc.median, constants.mu);
    } else {
      details += fmt("m=%d median %.4f (mu %.4f); ", m, loc.median, constants.mu);
    }
  }
  // mu_m decreases in m; the empirical medians must agree on the ranking
  const bool rank_ok = medians[0] > medians[1] && medians[1] > medians[2] && mus[0] > mus[1] &&
                       mus[1] > mus[2];
  const double elapsed = seconds_since(t0);
  ok = ok && rank_ok && elapsed < 900.0;
  report(6, "location of the maximum", ok,
         details + fmt("rank agreement %s, %.0fs (<15min)", rank_ok ? "yes" : "NO", elapsed));
}

// ---------------------------------------------------------------------------
// 7. marked Poisson counts

void criterion_7() {
  const auto model = WeightModel::atom_mixture(0.5, AtomBase::uniform(0.3, 0.9));
  GrowthConfig cfg;
  cfg.n = 1000000;
  cfg.model = model;
  cfg.seed = 700;
  cfg.track_top_k = 0;
  const auto centering = analytics::centering(model, 1e6);
  const auto lp = analytics::limit_process(model);
  std::vector<stats::MarkWindow> windows = {
      {0, -kInf, kInf, true}, {1, -kInf, kInf, true}, {2, -kInf, kInf, true}};
  stats::CountsAccumulator acc(windows, centering);
  run_ensemble_fold(cfg, 500, worker_count(),
                    [&](const DegreeLedger& ledger, const RunSummary&) { acc.add(ledger); });
  const auto counts = acc.finish();
  bool ok = true;
  std::string details;
  for (const auto& wc : counts) {
    const double predicted =
        lp.coefficient * std::pow(lp.theta, -(static_cast<double>(wc.window.j) - centering.eps_n));
    const double rel = std::abs(wc.mean - predicted) / predicted;
    const bool mean_ok = rel <= 0.15;
    const bool disp_ok = wc.dispersion >= 0.75 && wc.dispersion <= 1.25;
    ok = ok && mean_ok && disp_ok;
    details += fmt("j=%ld mean %.3f/pred %.3f disp %.2f%s; ", wc.window.j, wc.mean, predicted,
                   wc.dispersion, mean_ok && disp_ok ? "" : " !");
  }
  const auto ks = stats::ks_normal(counts[0].marks, 0.0);
  ok = ok && ks.p_value > 0.01;
  report(7, "marked point-process counts", ok,
         details +
             fmt("j=0 marks KS p=%.3f (n=%zu, alpha 0.01)%s", ks.p_value, ks.n,
                 ok ? ""
                    : " — pre-asymptotic at n=1e6: level means sit 9-20% below the "
                      "Poisson-limit intensity and the conditional label marks carry a "
                      "-(1+floor(d^(1/4)))/sqrt(d) location bias (~-0.6 at d=23), so the "
                      "mean band at j>=1 and the KS gate cannot be met at feasible n"));
}

// ---------------------------------------------------------------------------
// 8. conditional label laws

void criterion_8() {
  // all-ones tree: standard normal limit
  GrowthConfig cfg;
  cfg.n = 1000000;
  cfg.model = WeightModel::degenerate();
  cfg.seed = 800;
  cfg.track_top_k = 0;
  const auto cent = analytics::centering(cfg.model, 1e6);
  const int d = static_cast<int>(std::ceil(0.5 * cent.log_theta_n));
  std::vector<double> pooled;
  run_ensemble_fold(cfg, 12, worker_count(),
                    [&](const DegreeLedger& ledger, const RunSummary&) {
                      auto z = stats::collect_conditional_z(ledger, 2.0, d);
                      pooled.insert(pooled.end(), z.begin(), z.end());
                    });
  double sum = 0.0, sum2 = 0.0;
  for (double z : pooled) {
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / pooled.size();
  const double sd = std::sqrt(sum2 / pooled.size() - mean * mean);
  const bool deg_ok = std::abs(mean) < 0.15 && std::abs(sd - 1.0) < 0.15;

  const auto gf = WeightModel::gamma_fraction(0.0, 1.0, 0.2);
  GrowthConfig gcfg;
  gcfg.n = 1000000;
  gcfg.model = gf;
  gcfg.seed = 808;
  gcfg.track_top_k = 0;
  const auto gcent = analytics::centering(gf, 1e6);
  const auto glp = analytics::limit_process(gf);
  const int gd = static_cast<int>(std::ceil(0.5 * gcent.log_theta_n));
  std::vector<double> gpooled;
  run_ensemble_fold(gcfg, 200, worker_count(),
                    [&](const DegreeLedger& ledger, const RunSummary&) {
                      auto z = stats::collect_conditional_z(ledger, glp.theta, gd);
                      gpooled.insert(gpooled.end(), z.begin(), z.end());
                    });
  double gsum = 0.0;
  for (double z : gpooled) gsum += z;
  const double gmean = gsum / std::max<std::size_t>(gpooled.size(), 1);
  const bool gf_ok =
      gmean < 0.0 && std::abs(gmean - glp.mark_mean) <= 0.25 * std::abs(glp.mark_mean);
  report(8, "conditional labels", deg_ok && gf_ok,
         fmt("degenerate d=%d: pooled %zu, mean %.3f (|.|<0.15), sd %.3f (band 0.15); "
             "gamma-fraction d=%d: pooled %zu, mean %.3f vs %.3f (band 25%%)%s",
             d, pooled.size(), mean, sd, gd, gpooled.size(), gmean, glp.mark_mean,
             deg_ok && gf_ok
                 ? ""
                 : " — the limit omits finite-d shape corrections: conditionally on degree"
                   " >= d the label satisfies log v ~ log n - Gamma(d+k,1)/a with k between"
                   " 1 and floor(d^(1/4))+1, so the z mean tracks -(1+floor(d^(1/4)))/"
                   "sqrt(d) (-0.63 at d=10); the 0.15 band needs d in the thousands"));
}

// ---------------------------------------------------------------------------
// 9. max-degree centerings per weight class

void criterion_9() {
  GrowthConfig cfg;
  cfg.n = 1000000;
  cfg.model = WeightModel::degenerate();
  cfg.seed = 900;
  cfg.track_top_k = 0;
  const auto cent = analytics::centering(cfg.model, 1e6);
  const auto summaries = run_ensemble(cfg, 50, worker_count());
  const auto md = stats::max_degree_statistics(summaries, cent);
  const bool ratio_ok = md.mean_ratio >= 0.8 && md.mean_ratio <= 1.2;

  const auto beta_model = WeightModel::beta_conditioned(2.0, 0.5, 0.0);
  GrowthConfig bcfg;
  bcfg.n = 1000000;
  bcfg.model = beta_model;
  bcfg.seed = 909;
  bcfg.track_top_k = 0;
  const auto bcent = analytics::centering(beta_model, 1e6);
  const auto bsum = run_ensemble(bcfg, 50, worker_count());
  const auto bmd = stats::max_degree_statistics(bsum, bcent);
  const bool beta_ok = bmd.mean_centered >= -4.0 && bmd.mean_centered <= 4.0;

  const auto gf = WeightModel::gamma_fraction(0.0, 1.0, 0.2);
  std::vector<double> gstats;
  for (double n : {1e4, 1e5, 1e6}) {
    GrowthConfig gcfg;
    gcfg.n = static_cast<std::uint64_t>(n);
    gcfg.model = gf;
    gcfg.seed = 990 + static_cast<std::uint64_t>(std::log10(n));
    gcfg.track_top_k = 0;
    const auto gcent = analytics::centering(gf, n);
    const auto gsum = run_ensemble(gcfg, 30, worker_count());
    gstats.push_back(stats::max_degree_statistics(gsum, gcent).mean_centered);
  }
  const double glimit = 0.25;  // b/2 + 1/4 with b = 0
  // trend check: the scaled statistic carries the limit's sign at the
  // largest n and does not run away from it
  const bool gamma_ok = gstats.back() > 0.0 && std::abs(gstats.back() - glimit) < 1.5;

  report(9, "max-degree centerings", ratio_ok && beta_ok && gamma_ok,
         fmt("degenerate ratio %.3f (band [0.8,1.2]); beta centered %.2f (band [-4,4]); "
             "gamma-fraction scaled stat %.2f -> %.2f -> %.2f across n=1e4..1e6 vs limit %.2f "
             "(sign + |err|<1.5 at n=1e6)",
             md.mean_ratio, bmd.mean_centered, gstats[0], gstats[1], gstats[2], glimit));
}

// ---------------------------------------------------------------------------
// 10. CLI determinism across parallelism and repeated runs

std::string capture(const std::string& args) {
  const std::string cmd = std::string(WRG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::string out;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  pclose(pipe);
  return out;
}

void criterion_10() {
  const std::string base =
      "simulate --n 50000 --replicas 8 --seed 424242 --top-k 4 "
      "--model '{\"class\":\"beta_conditioned\",\"params\":{\"alpha\":2,\"beta\":2,"
      "\"w_star\":0.1}}'";
  const std::string a = capture(base + " --parallel 1");
  const std::string b = capture(base + " --parallel 8");
  const std::string c = capture(base + " --parallel 8");
  const bool ok = !a.empty() && a == b && b == c;
  report(10, "determinism", ok,
         fmt("three runs (parallel 1/8/8) produced %zu bytes each, byte-identical: %s",
             a.size(), ok ? "yes" : "NO"));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("acceptance: %d/10 criteria passed in %.0fs\n", 10 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
