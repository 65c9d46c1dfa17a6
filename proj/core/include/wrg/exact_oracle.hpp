#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace wrg::oracle {

struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Toy-scale brute-force setup: fixed weights, tracked vertex labels.
struct ExactSpec {
  int n = 0;                    // <= 14
  int m = 1;                    // <= 3
  std::vector<double> weights;  // size n, values in (0,1]
  std::vector<int> tracked;     // 1-based labels, at most 3
};

// Exact law of the final in-degree of one vertex: index d holds
// P(Z_n(vertex) = d), d = 0 .. m*(n - vertex). Computed as the
// convolution over arrival steps j = vertex..n-1 of Binomial(m, w/S_j).
std::vector<double> exact_marginal(const ExactSpec& spec, int vertex);

// Exact joint law of the tracked vertices' final in-degrees, row-major
// over per-vertex degree alphabets 0 .. m*(n - label).
struct JointTable {
  std::vector<int> tracked;
  std::vector<int> dims;
  std::vector<double> probs;

  double at(std::span<const int> degrees) const;
  std::vector<double> marginal(int tracked_index) const;
  double total_mass() const;
};

JointTable exact_joint(const ExactSpec& spec);

}  // namespace wrg::oracle
