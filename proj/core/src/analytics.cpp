#include "wrg/analytics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wrg/special_fn.hpp"

namespace wrg::analytics {

using special::lambert_w;
using special::normal_cdf;
using special::reg_gamma_cdf;
using special::Branch;

LimitConstants limit_constants(const WeightModel& model, int m) {
  LimitConstants c;
  c.m = m;
  c.theta = model.theta(m);
  const double t = c.theta, lt = std::log(t);
  c.mu = 1.0 - (t - 1.0) / (t * lt);
  c.sigma2 = 1.0 - (t - 1.0) * (t - 1.0) / (t * t * lt);
  return c;
}

double phi_rate(double u) {
  if (!(u > 0.0)) throw special::DomainError("phi_rate: need u > 0");
  return u - 1.0 - std::log(u);
}

double f_rate(double x, const LimitConstants& c) {
  if (!(x > 0.0 && x < 1.0)) throw special::DomainError("f_rate: need x in (0,1)");
  const double lt = std::log(c.theta);
  return phi_rate((1.0 - x) * lt / (c.theta - 1.0)) / lt;
}

PhaseBoundary phase_boundary(const LimitConstants& c, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw EtaTooLarge("phase_boundary: need eta in (0,1)");
  const double t = c.theta, lt = std::log(t);
  // admissible range: eta < 1 - log(t/e) / W_{-1}(log(t/e) t/e)
  const double lte = std::log(t / M_E);  // negative for theta < e
  const double eta_max = 1.0 - lte / lambert_w(Branch::Negative, lte * t / M_E);
  if (eta >= eta_max)
    throw EtaTooLarge("phase_boundary: eta = " + std::to_string(eta) +
                      " outside admissible (0, " + std::to_string(eta_max) + ")");
  PhaseBoundary out;
  out.eta = eta;
  out.eta_max = eta_max;
  out.near_limit = eta > eta_max - 1e-3;
  const double pre = (1.0 - eta) * (t - 1.0) / (t * lt);
  const double arg = -std::pow(t, -eta / (1.0 - eta)) / M_E;
  out.w1 = 1.0 + pre * lambert_w(Branch::Principal, arg);
  out.w2 = 1.0 + pre * lambert_w(Branch::Negative, arg);
  out.w_derivative_zero = 1.0 - pre;
  if (!(out.w2 < c.mu && c.mu < out.w1))
    throw EtaTooLarge("phase_boundary: ordering w2 < mu < w1 failed");
  return out;
}

double limiting_degree_tail(const WeightModel& model, int k) {
  if (k < 0) throw special::DomainError("limiting_degree_tail: need k >= 0");
  if (k == 0) return 1.0;
  const double theta = model.theta(1);
  if (model.cls() == WeightClass::Degenerate) return std::pow(theta, -k);
  return model.expect([&](double w) { return std::pow(w / (theta - 1.0 + w), k); });
}

FiniteNLaw finite_n_joint_law(const WeightModel& model, double n, int d, double ell,
                              FiniteNOptions opts) {
  if (!(n > 1.0) || d < 1 || ell < 0.0)
    throw special::DomainError("finite_n_joint_law: need n > 1, d >= 1, ell >= 0");
  const double theta = model.theta(1);
  const double tm1 = theta - 1.0;
  FiniteNLaw out;
  out.lower_precondition_ok = ell >= std::pow(n, opts.eta);
  out.upper_precondition_ok =
      ell <= n * std::exp(-(1.0 - opts.xi) * (1.0 - 1.0 / theta) * (d + 1));
  if (opts.enforce_preconditions) {
    if (!out.lower_precondition_ok)
      throw PreconditionViolated("finite_n_joint_law: ell < n^eta (label lower bound)");
    if (!out.upper_precondition_ok)
      throw PreconditionViolated("finite_n_joint_law: ell > n exp(-(1-xi)(1-1/theta)(d+1))");
  }
  const double log_ratio = ell > 0.0 ? std::log(n / ell) : std::numeric_limits<double>::infinity();
  const int d_lower = d + static_cast<int>(std::floor(std::pow(d, 0.25)));
  auto body = [&](double w, double shape, bool exact_prefactor) {
    const double frac = w / (tm1 + w);
    const double gamma_arg = (1.0 + w / tm1) * log_ratio;
    double v = std::pow(frac, d) * reg_gamma_cdf(shape, gamma_arg);
    if (exact_prefactor) v *= tm1 / (tm1 + w);
    return v;
  };
  out.exact_degree = model.expect([&](double w) { return body(w, d + 1, true); });
  out.at_least_upper = model.expect([&](double w) { return body(w, d + 1, false); });
  out.at_least_lower = model.expect([&](double w) { return body(w, d_lower + 1, false); });
  return out;
}

double c_theta_tau_c1(double theta, double tau, double c1) {
  const double gamma = 1.0 / (1.0 + tau);
  return std::pow(tau, gamma) / ((1.0 - gamma) * std::log(theta)) *
         std::pow((1.0 - 1.0 / theta) / c1, 1.0 - gamma);
}

double asymptotic_law(const WeightModel& model, int d, double x, LawMode mode) {
  if (d < 1) throw special::DomainError("asymptotic_law: need d >= 1");
  const double theta = model.theta(1);
  const double one_phi = 1.0 - normal_cdf(x);  // P(N(0,1) >= x), x may be +-inf
  double at_least;
  switch (model.cls()) {
    case WeightClass::Degenerate:
      at_least = std::pow(theta, -d) * one_phi;
      break;
    case WeightClass::AtomMixture:
      at_least = model.param("q0") * std::pow(theta, -d) * one_phi;
      break;
    case WeightClass::BetaConditioned: {
      const double a = model.param("alpha"), b = model.param("beta");
      const double coeff = model.normalizer() *
                           std::exp(std::lgamma(a + b) - std::lgamma(a)) /
                           std::pow(1.0 - 1.0 / theta, b);
      at_least = coeff * std::pow(d, -b) * std::pow(theta, -d) * one_phi;
      break;
    }
    case WeightClass::GammaFraction: {
      const double b = model.param("b"), c1 = model.param("c1");
      const double inv_rate = 1.0 - 1.0 / theta;
      const double cc = std::exp(-inv_rate / (2.0 * c1)) * std::sqrt(M_PI) *
                        std::pow(c1, -0.25 + 0.5 * b) * std::pow(inv_rate, 0.25 + 0.5 * b);
      const double mark_mean = -1.0 / std::sqrt(c1 * theta * (theta - 1.0));
      const double p_mark = 1.0 - normal_cdf(std::isinf(x) ? x : x - mark_mean);
      at_least = model.normalizer() * cc * std::pow(d, 0.5 * b + 0.25) *
                 std::exp(-2.0 * std::sqrt(inv_rate * d / c1)) * std::pow(theta, -d) * p_mark;
      break;
    }
    default:
      throw UnsupportedClass("asymptotic_law: class has no closed asymptotic form");
  }
  if (mode == LawMode::AtLeast) return at_least;
  return (1.0 - 1.0 / theta) * at_least;
}

Centering centering(const WeightModel& model, double n) {
  if (!(n >= 3.0)) throw special::DomainError("centering: need n >= 3");
  Centering out;
  out.cls = model.cls();
  out.theta = model.theta(1);
  const double lt = std::log(out.theta);
  out.log_theta_n = std::log(n) / lt;
  out.log_log_theta_n = std::log(out.log_theta_n) / lt;
  const double ln = out.log_theta_n, lln = out.log_log_theta_n;
  switch (model.cls()) {
    case WeightClass::Degenerate:
    case WeightClass::AtomMixture:
      out.center = ln;
      out.scale = 1.0;
      out.limit_value = 0.0;
      out.full_center = ln;
      break;
    case WeightClass::BetaConditioned:
      out.center = ln - model.param("beta") * lln;
      out.scale = 1.0;
      out.limit_value = 0.0;
      out.full_center = out.center;
      break;
    case WeightClass::ParetoWeibull:
      out.center = ln;
      out.scale = lln;
      out.limit_value = -(model.param("alpha") - 1.0);
      out.full_center = ln + out.limit_value * lln;
      break;
    case WeightClass::GammaFraction: {
      const double b = model.param("b"), c1 = model.param("c1");
      const double corr = c_theta_tau_c1(out.theta, 1.0, c1);
      out.center = ln - corr * std::sqrt(ln);
      out.scale = lln;
      out.limit_value = 0.5 * b + 0.25;
      out.full_center = out.center + out.limit_value * lln;
      break;
    }
    case WeightClass::RaVCanonical: {
      const double c = model.param("c"), tau = model.param("tau");
      const double c1t = std::pow(lt, tau - 1.0) * std::pow(c, -tau);
      const double c2 = c1t * tau * (tau - 1.0);
      const double llln = std::log(lln) / lt;
      const double c3 = (std::log(lt) / lt * (tau - 1.0) * lt -
                         std::log(M_E * std::pow(c, tau) * (1.0 - 1.0 / out.theta) / tau)) *
                        std::pow(lt, tau - 2.0) * tau * std::pow(c, -tau);
      out.center = ln - c1t * std::pow(lln, tau) + c2 * std::pow(lln, tau - 1.0) * llln;
      out.scale = std::pow(lln, tau - 1.0);
      out.limit_value = c3;
      out.full_center = out.center + c3 * out.scale;
      break;
    }
  }
  out.center_floor = static_cast<long>(std::floor(out.full_center));
  out.eps_n = out.full_center - static_cast<double>(out.center_floor);
  return out;
}

LimitProcessSpec limit_process(const WeightModel& model) {
  LimitProcessSpec out;
  out.theta = model.theta(1);
  switch (model.cls()) {
    case WeightClass::Degenerate:
      out.coefficient = 1.0;
      break;
    case WeightClass::AtomMixture:
      out.coefficient = model.param("q0");
      break;
    case WeightClass::BetaConditioned: {
      const double a = model.param("alpha"), b = model.param("beta");
      out.coefficient = model.normalizer() * std::exp(std::lgamma(a + b) - std::lgamma(a)) /
                        std::pow(1.0 - 1.0 / out.theta, b);
      break;
    }
    case WeightClass::GammaFraction: {
      const double b = model.param("b"), c1 = model.param("c1");
      const double inv_rate = 1.0 - 1.0 / out.theta;
      const double cc = std::exp(-inv_rate / (2.0 * c1)) * std::sqrt(M_PI) *
                        std::pow(c1, -0.25 + 0.5 * b) * std::pow(inv_rate, 0.25 + 0.5 * b);
      const double corr = c_theta_tau_c1(out.theta, 1.0, c1);
      out.coefficient = model.normalizer() * cc * std::pow(out.theta, 0.5 * corr * corr);
      out.mark_mean = -1.0 / std::sqrt(c1 * out.theta * (out.theta - 1.0));
      break;
    }
    default:
      throw UnsupportedClass("limit_process: class has no Poisson-limit description");
  }
  return out;
}

std::pair<int, int> max_degree_threshold(const WeightModel& model, double n) {
  if (!(n >= 3.0)) throw special::DomainError("max_degree_threshold: need n >= 3");
  auto holds = [&](int d) { return n * limiting_degree_tail(model, d) >= 1.0; };
  if (!holds(1)) return {2, 1};
  int lo = 1, hi = 2;
  while (holds(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1 << 24) break;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (holds(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo + 1, lo};
}

}  // namespace wrg::analytics
