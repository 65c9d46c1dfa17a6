#pragma once

#include <stdexcept>
#include <utility>

#include "wrg/weight_model.hpp"

namespace wrg::analytics {

struct EtaTooLarge : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnsupportedClass : std::domain_error {
  using std::domain_error::domain_error;
};

struct PreconditionViolated : std::domain_error {
  using std::domain_error::domain_error;
};

struct LimitConstants {
  double theta = 2.0;   // 1 + E[W]/m
  double mu = 0.0;      // 1 - (theta-1)/(theta log theta)
  double sigma2 = 0.0;  // 1 - (theta-1)^2/(theta^2 log theta)
  int m = 1;
};

LimitConstants limit_constants(const WeightModel& model, int m = 1);

// Chernoff rate phi(u) = u - 1 - log u
double phi_rate(double u);

// f(x) = phi((1-x) log theta / (theta-1)) / log theta; unique fixed point
// at mu, and f(x) > x elsewhere on (0,1).
double f_rate(double x, const LimitConstants& c);

struct PhaseBoundary {
  double eta = 0.0;
  double w1 = 0.0;                 // principal-branch solution, > mu
  double w2 = 0.0;                 // negative-branch solution, < mu
  double w_derivative_zero = 0.0;  // 1 - (1-eta)(theta-1)/(theta log theta)
  double eta_max = 0.0;            // admissible upper bound for eta
  bool near_limit = false;         // within 1e-3 of eta_max
};

// Fixed points of the label-exponent equation through both Lambert-W
// branches. Throws EtaTooLarge outside the admissible range.
PhaseBoundary phase_boundary(const LimitConstants& c, double eta);

// p_{>=k} = E[(W/(theta-1+W))^k] with theta = theta_1
double limiting_degree_tail(const WeightModel& model, int k);

struct FiniteNOptions {
  double eta = 0.05;  // lower label bound exponent: ell >= n^eta
  double xi = 0.1;    // slack in the upper label bound
  bool enforce_preconditions = true;
};

struct FiniteNLaw {
  double exact_degree = 0.0;    // P(Z_n(v) = d, v > ell)
  double at_least_upper = 0.0;  // upper-bound form of P(Z_n(v) >= d, v > ell)
  double at_least_lower = 0.0;  // lower-bound form (inflated gamma shape)
  bool lower_precondition_ok = true;  // ell >= n^eta
  bool upper_precondition_ok = true;  // ell <= n exp(-(1-xi)(1-1/theta)(d+1))
};

// Single-vertex finite-n degree/label law: expectations over W of
// (W/(theta-1+W))^d weighted tails of Gamma CDFs evaluated at
// (1 + W/(theta-1)) log(n/ell). ell = 0 is an "all labels" sentinel.
FiniteNLaw finite_n_joint_law(const WeightModel& model, double n, int d, double ell,
                              FiniteNOptions opts = {});

enum class LawMode { ExactDegree, AtLeast };

// Closed asymptotic value of the finite-n law when ell is matched to
// n exp(-(1-1/theta)d + x (1-1/theta) sqrt(d)). x may be +-infinity.
double asymptotic_law(const WeightModel& model, int d, double x, LawMode mode);

// C_{theta,tau,c1} = (tau^gamma/((1-gamma) log theta)) ((1-1/theta)/c1)^{1-gamma},
// gamma = 1/(1+tau)
double c_theta_tau_c1(double theta, double tau, double c1);

struct Centering {
  WeightClass cls = WeightClass::Degenerate;
  double theta = 2.0;
  double log_theta_n = 0.0;
  double log_log_theta_n = 0.0;
  double center = 0.0;       // subtract from max_degree ...
  double scale = 1.0;        // ... then divide by this ...
  double limit_value = 0.0;  // ... and compare against this
  double full_center = 0.0;  // center including the limit-order term
  long center_floor = 0;     // floor(full_center), the integer level origin
  double eps_n = 0.0;        // fractional part of full_center
};

Centering centering(const WeightModel& model, double n);

struct LimitProcessSpec {
  double coefficient = 1.0;  // intensity coefficient of the Poisson limit
  double theta = 2.0;
  double mark_mean = 0.0;  // Gaussian mark location
  double mark_sd = 1.0;
};

// Poisson-limit intensity coefficient and mark law; defined for the
// Degenerate, AtomMixture, BetaConditioned and GammaFraction classes.
LimitProcessSpec limit_process(const WeightModel& model);

// (d_low, d_high): d_high is the largest d with n * p_{>=d} >= 1 and
// d_low = d_high + 1 is the first level expected to be empty.
std::pair<int, int> max_degree_threshold(const WeightModel& model, double n);

}  // namespace wrg::analytics
