#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "wrg/rng.hpp"

namespace wrg {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class WeightClass {
  Degenerate,       // W = 1 a.s.
  AtomMixture,      // atom at 1 with prob q0, else a base law on (0,1)
  BetaConditioned,  // Beta(alpha, beta) conditioned on W >= w_star
  GammaFraction,    // tail Z (1-x)^{-b} exp(-x / (c1 (1-x))) on [w_star, 1)
  ParetoWeibull,    // tail (1-x)^{alpha-1} on [0, 1)
  RaVCanonical,     // tail exp(-(-log(1-w)/c)^tau), rapidly varying
};

// Base law of the non-atomic part of an AtomMixture.
struct AtomBase {
  enum class Kind { Uniform, Point } kind = Kind::Uniform;
  double a = 0.0;  // Uniform(a, b) support, 0 < a <= b <= 1
  double b = 1.0;
  double point = 0.5;  // Point mass location in (0, 1]

  static AtomBase uniform(double a, double b);
  static AtomBase point_mass(double p);
};

// A vertex-weight law on (0, 1] with essential supremum 1. Instances are
// immutable; build them through the factories, which validate parameters.
class WeightModel {
public:
  static WeightModel degenerate();
  static WeightModel atom_mixture(double q0, AtomBase base);
  static WeightModel beta_conditioned(double alpha, double beta, double w_star);
  static WeightModel gamma_fraction(double b, double c1, double w_star);
  static WeightModel pareto_weibull(double alpha);
  static WeightModel rav_canonical(double c, double tau);

  // JSON schema: {"class": "<name>", "params": {...}}. Unknown keys and
  // missing params are rejected. The string form round-trips.
  static WeightModel from_json(const std::string& text);
  std::string to_json() const;

  WeightClass cls() const { return cls_; }

  // E[W], closed form where available, quadrature (rel tol 1e-10) otherwise.
  double mean_w() const;

  // theta_m = 1 + E[W] / m
  double theta(int m = 1) const;

  // P(W >= x)
  double tail_probability(double x) const;

  double sample(RngStream& rng) const;

  // E[h(W)]
  double expect(const std::function<double(double)>& h) const;

  // accessors for the class-specific parameters
  double param(const std::string& name) const;
  const AtomBase& atom_base() const;

  // normalizer Z such that tail_probability(w_star) == 1 for the
  // conditioned classes
  double normalizer() const { return z_; }

private:
  WeightModel() = default;

  WeightClass cls_ = WeightClass::Degenerate;
  // parameter slots, meaning depends on cls_
  double p1_ = 0, p2_ = 0, p3_ = 0;
  AtomBase base_{};
  double z_ = 1.0;
  mutable double mean_cache_ = -1.0;
};

}  // namespace wrg
