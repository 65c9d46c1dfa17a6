#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "wrg/exact_oracle.hpp"

using namespace wrg::oracle;

TEST_CASE("three-vertex tree marginals by hand") {
  ExactSpec spec;
  spec.n = 3;
  spec.m = 1;
  spec.weights = {1.0, 1.0, 1.0};
  const auto z1 = exact_marginal(spec, 1);
  REQUIRE(z1.size() == 3);
  CHECK(z1[0] == doctest::Approx(0.0));
  CHECK(z1[1] == doctest::Approx(0.5));
  CHECK(z1[2] == doctest::Approx(0.5));
  const auto z2 = exact_marginal(spec, 2);
  REQUIRE(z2.size() == 2);
  CHECK(z2[0] == doctest::Approx(0.5));
  CHECK(z2[1] == doctest::Approx(0.5));
  const auto z3 = exact_marginal(spec, 3);
  REQUIRE(z3.size() == 1);
  CHECK(z3[0] == doctest::Approx(1.0));
}

TEST_CASE("marginals sum to one") {
  ExactSpec spec;
  spec.n = 7;
  spec.m = 2;
  spec.weights = {0.9, 0.4, 1.0, 0.2, 0.7, 0.55, 0.3};
  for (int v = 1; v <= 7; ++v) {
    const auto dist = exact_marginal(spec, v);
    double total = 0.0;
    for (double p : dist) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

namespace {

// exhaustive path enumeration for n=4, m=1: each of vertices 2,3,4 picks a
// predecessor with probability w/S
std::vector<double> enumerate_joint_n4(const std::vector<double>& w, int v1, int v2,
                                       std::array<int, 2> want) {
  double total = 0.0;
  std::vector<double> unused;
  const double s1 = w[0], s2 = w[0] + w[1], s3 = s2 + w[2];
  (void)s1;
  for (int p2 = 1; p2 <= 1; ++p2)
    for (int p3 = 1; p3 <= 2; ++p3)
      for (int p4 = 1; p4 <= 3; ++p4) {
        const double prob = 1.0 * (w[p3 - 1] / s2) * (w[p4 - 1] / s3);
        int deg[5] = {0, 0, 0, 0, 0};
        deg[p2]++;
        deg[p3]++;
        deg[p4]++;
        if (deg[v1] == want[0] && deg[v2] == want[1]) total += prob;
      }
  return {total};
}

}  // namespace

TEST_CASE("joint table matches exhaustive enumeration at n=4") {
  ExactSpec spec;
  spec.n = 4;
  spec.m = 1;
  spec.weights = {1.0, 1.0, 1.0, 1.0};
  spec.tracked = {1, 2};
  const auto joint = exact_joint(spec);
  CHECK(std::abs(joint.total_mass() - 1.0) < 1e-12);
  for (int d1 = 0; d1 <= 3; ++d1)
    for (int d2 = 0; d2 <= 2; ++d2) {
      const std::array<int, 2> degrees{d1, d2};
      const double want = enumerate_joint_n4(spec.weights, 1, 2, degrees)[0];
      const std::vector<int> key{d1, d2};
      CHECK(joint.at(key) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("joint marginalization equals exact marginal") {
  ExactSpec spec;
  spec.n = 6;
  spec.m = 2;
  spec.weights = {0.8, 0.5, 1.0, 0.4, 0.9, 0.6};
  spec.tracked = {1, 3};
  const auto joint = exact_joint(spec);
  CHECK(std::abs(joint.total_mass() - 1.0) < 1e-12);
  const auto m1 = joint.marginal(0);
  const auto m3 = joint.marginal(1);
  const auto e1 = exact_marginal(spec, 1);
  const auto e3 = exact_marginal(spec, 3);
  REQUIRE(m1.size() == e1.size());
  REQUIRE(m3.size() == e3.size());
  for (std::size_t d = 0; d < e1.size(); ++d) CHECK(std::abs(m1[d] - e1[d]) < 1e-12);
  for (std::size_t d = 0; d < e3.size(); ++d) CHECK(std::abs(m3[d] - e3[d]) < 1e-12);
}

TEST_CASE("negative quadrant dependence spot check") {
  ExactSpec spec;
  spec.n = 4;
  spec.m = 1;
  spec.weights = {1.0, 1.0, 1.0, 1.0};
  spec.tracked = {1, 2};
  const auto joint = exact_joint(spec);
  auto tail2 = [&](int d1, int d2) {
    double p = 0.0;
    for (int a = d1; a < joint.dims[0]; ++a)
      for (int b = d2; b < joint.dims[1]; ++b) {
        const std::vector<int> key{a, b};
        p += joint.at(key);
      }
    return p;
  };
  const auto m1 = joint.marginal(0);
  const auto m2 = joint.marginal(1);
  auto tail1 = [](const std::vector<double>& m, int d) {
    double p = 0.0;
    for (std::size_t a = d; a < m.size(); ++a) p += m[a];
    return p;
  };
  CHECK(tail2(2, 1) <= tail1(m1, 2) * tail1(m2, 1) + 1e-12);
}

TEST_CASE("no mass beyond the degree budget") {
  ExactSpec spec;
  spec.n = 5;
  spec.m = 2;
  spec.weights = {0.9, 0.8, 0.7, 0.6, 0.5};
  spec.tracked = {1, 2, 3};
  const auto joint = exact_joint(spec);
  std::vector<int> degrees(3, 0);
  const int budget = spec.m * (spec.n - 1);
  for (std::size_t idx = 0; idx < joint.probs.size(); ++idx) {
    if (joint.probs[idx] == 0.0) continue;
    std::size_t rem = idx;
    int total = 0;
    for (std::size_t t = joint.dims.size(); t-- > 0;) {
      degrees[t] = static_cast<int>(rem % joint.dims[t]);
      rem /= joint.dims[t];
      total += degrees[t];
    }
    CHECK(total <= budget);
  }
}

TEST_CASE("guards") {
  ExactSpec spec;
  spec.n = 20;
  spec.m = 1;
  spec.weights.assign(20, 0.5);
  CHECK_THROWS_AS(exact_marginal(spec, 1), GuardExceeded);
  spec.n = 5;
  spec.weights.assign(5, 0.5);
  spec.m = 4;
  CHECK_THROWS_AS(exact_marginal(spec, 1), GuardExceeded);
  spec.m = 1;
  spec.tracked = {1, 1};
  CHECK_THROWS_AS(exact_joint(spec), GuardExceeded);
  spec.tracked = {9};
  CHECK_THROWS_AS(exact_joint(spec), GuardExceeded);
  spec.tracked = {};
  CHECK_THROWS_AS(exact_joint(spec), GuardExceeded);
  spec.weights.assign(5, 1.5);
  spec.tracked = {1};
  CHECK_THROWS_AS(exact_joint(spec), GuardExceeded);
}
