#include "wrg/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>

namespace wrg::oracle {

namespace {

void validate(const ExactSpec& spec) {
  if (spec.n < 1 || spec.n > 14) throw GuardExceeded("exact oracle: need 1 <= n <= 14");
  if (spec.m < 1 || spec.m > 3) throw GuardExceeded("exact oracle: need 1 <= m <= 3");
  if (static_cast<int>(spec.weights.size()) != spec.n)
    throw GuardExceeded("exact oracle: weights.size() must equal n");
  for (double w : spec.weights)
    if (!(w > 0.0 && w <= 1.0)) throw GuardExceeded("exact oracle: weights must lie in (0,1]");
}

double binom_pmf(int m, int k, double p) {
  static const double choose[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return choose[m][k] * std::pow(p, k) * std::pow(1.0 - p, m - k);
}

}  // namespace

std::vector<double> exact_marginal(const ExactSpec& spec, int vertex) {
  validate(spec);
  if (vertex < 1 || vertex > spec.n) throw GuardExceeded("exact_marginal: vertex out of range");
  const int max_deg = spec.m * (spec.n - vertex);
  std::vector<double> dist(max_deg + 1, 0.0);
  dist[0] = 1.0;
  double s = 0.0;
  for (int j = 1; j < vertex; ++j) s += spec.weights[j - 1];
  const double w = spec.weights[vertex - 1];
  int reach = 0;
  for (int j = vertex; j < spec.n; ++j) {
    s += spec.weights[j - 1];  // now S_j
    const double p = w / s;
    std::vector<double> next(std::min(reach + spec.m, max_deg) + 1, 0.0);
    for (int d = 0; d <= reach; ++d)
      for (int k = 0; k <= spec.m; ++k) next[d + k] += dist[d] * binom_pmf(spec.m, k, p);
    reach = static_cast<int>(next.size()) - 1;
    dist.swap(next);
  }
  dist.resize(max_deg + 1, 0.0);
  return dist;
}

double JointTable::at(std::span<const int> degrees) const {
  if (degrees.size() != dims.size()) throw GuardExceeded("JointTable::at: arity mismatch");
  std::size_t idx = 0;
  for (std::size_t t = 0; t < dims.size(); ++t) {
    if (degrees[t] < 0 || degrees[t] >= dims[t]) return 0.0;
    idx = idx * dims[t] + degrees[t];
  }
  return probs[idx];
}

std::vector<double> JointTable::marginal(int tracked_index) const {
  std::vector<double> out(dims.at(tracked_index), 0.0);
  std::size_t stride = 1;
  for (std::size_t t = tracked_index + 1; t < dims.size(); ++t) stride *= dims[t];
  const std::size_t dim = dims[tracked_index];
  for (std::size_t i = 0; i < probs.size(); ++i) out[(i / stride) % dim] += probs[i];
  return out;
}

double JointTable::total_mass() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

JointTable exact_joint(const ExactSpec& spec) {
  validate(spec);
  if (spec.tracked.empty() || spec.tracked.size() > 3)
    throw GuardExceeded("exact_joint: need 1 to 3 tracked vertices");
  for (int label : spec.tracked)
    if (label < 1 || label > spec.n) throw GuardExceeded("exact_joint: tracked label out of range");
  for (std::size_t a = 0; a < spec.tracked.size(); ++a)
    for (std::size_t b = a + 1; b < spec.tracked.size(); ++b)
      if (spec.tracked[a] == spec.tracked[b])
        throw GuardExceeded("exact_joint: tracked labels must be distinct");

  const int k = static_cast<int>(spec.tracked.size());
  JointTable table;
  table.tracked = spec.tracked;
  std::size_t states = 1;
  for (int label : spec.tracked) {
    table.dims.push_back(spec.m * (spec.n - label) + 1);
    states *= table.dims.back();
    if (states > 10000000) throw GuardExceeded("exact_joint: state space above 1e7");
  }
  table.probs.assign(states, 0.0);
  table.probs[0] = 1.0;

  std::vector<std::size_t> strides(k, 1);
  for (int t = k - 2; t >= 0; --t) strides[t] = strides[t + 1] * table.dims[t + 1];

  double s = 0.0;
  for (int j = 1; j < spec.n; ++j) {
    s += spec.weights[j - 1];  // S_j when vertex j+1 arrives
    // attachment probability per half-edge for each tracked vertex active
    // at this step
    std::vector<double> p(k, 0.0);
    for (int t = 0; t < k; ++t)
      if (spec.tracked[t] <= j) p[t] = spec.weights[spec.tracked[t] - 1] / s;
    // enumerate multinomial splits c of the m half-edges over tracked
    std::vector<std::pair<std::vector<int>, double>> splits;
    std::vector<int> c(k, 0);
    const double rest = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
    auto choose = [](int nn, int kk) {
      double out = 1.0;
      for (int i = 0; i < kk; ++i) out *= static_cast<double>(nn - i) / (i + 1);
      return out;
    };
    // multinomial coefficient as a chain of binomials over remaining slots
    std::function<void(int, int, double, double)> rec = [&](int t, int remaining, double prob,
                                                            double coeff) {
      if (t == k) {
        splits.emplace_back(c, coeff * prob * std::pow(rest, remaining));
        return;
      }
      for (int ct = 0; ct <= remaining; ++ct) {
        c[t] = ct;
        rec(t + 1, remaining - ct, prob * std::pow(p[t], ct), coeff * choose(remaining, ct));
      }
      c[t] = 0;
    };
    rec(0, spec.m, 1.0, 1.0);

    std::vector<double> next(states, 0.0);
    for (std::size_t idx = 0; idx < states; ++idx) {
      const double mass = table.probs[idx];
      if (mass == 0.0) continue;
      for (const auto& [cc, pr] : splits) {
        if (pr == 0.0) continue;
        std::size_t nidx = idx;
        bool ok = true;
        for (int t = 0; t < k; ++t) {
          if (cc[t] == 0) continue;
          const int deg = static_cast<int>((idx / strides[t]) % table.dims[t]);
          if (deg + cc[t] >= table.dims[t]) {
            ok = false;
            break;
          }
          nidx += static_cast<std::size_t>(cc[t]) * strides[t];
        }
        if (ok) next[nidx] += mass * pr;
      }
    }
    table.probs.swap(next);
  }
  return table;
}

}  // namespace wrg::oracle
