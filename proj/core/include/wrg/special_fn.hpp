#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace wrg::special {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Real branches of the Lambert W function (inverse of x -> x e^x).
// Principal covers [-1/e, inf) with outputs >= -1; Negative covers
// [-1/e, 0) with outputs <= -1.
enum class Branch { Principal, Negative };

// Halley iteration from a branch-specific initial guess; switches to the
// sqrt(2(e x + 1)) series within 1e-6 of the branch point -1/e.
// Relative error <= 1e-13.
double lambert_w(Branch branch, double x);

// P(Gamma(shape, 1) <= x): lower series for x < shape + 1, continued
// fraction otherwise. Absolute error <= 1e-13.
double reg_gamma_cdf(double shape, double x);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// P(a < N(mean, 1) <= b); a and b may be +-infinity.
double normal_cdf_interval(double a, double b, double mean = 0.0);

// Regularized incomplete beta I_x(a, b), continued fraction evaluation.
double reg_beta_inc(double a, double b, double x);

struct IntegrateOptions {
  double rel_tol = 1e-10;
  int max_depth = 60;
};

// Adaptive Simpson quadrature on a finite interval. Throws NonConvergence
// when the subdivision budget is exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 IntegrateOptions opts = {});

}  // namespace wrg::special
