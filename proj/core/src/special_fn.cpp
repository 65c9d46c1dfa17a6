#include "wrg/special_fn.hpp"

#include <cmath>
#include <limits>

namespace wrg::special {

namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;  // 1/e

// Series around the branch point x = -1/e in p = +-sqrt(2(e x + 1)).
double branch_point_series(double p) {
  // W = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + ...
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double halley(double x, double w) {
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w(Branch branch, double x) {
  const double arg = x + kInvE;  // distance from the branch point
  if (branch == Branch::Principal) {
    if (arg < -1e-14) throw DomainError("lambert_w: x < -1/e");
    if (x == 0.0) return 0.0;
    if (arg < 1e-6) return branch_point_series(std::sqrt(2.0 * std::max(arg, 0.0) * M_E));
    double w0;
    if (x > M_E) {
      const double l1 = std::log(x);
      const double l2 = std::log(l1);
      w0 = l1 - l2 + l2 / l1;
    } else if (x > 0.0) {
      w0 = x / (1.0 + x);
    } else {
      w0 = branch_point_series(std::sqrt(2.0 * arg * M_E));
    }
    return halley(x, w0);
  }
  // negative branch
  if (arg < -1e-14 || x >= 0.0) throw DomainError("lambert_w: negative branch needs x in [-1/e, 0)");
  if (arg < 1e-6) return branch_point_series(-std::sqrt(2.0 * std::max(arg, 0.0) * M_E));
  double w0;
  if (x > -0.25) {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w0 = l1 - l2;
  } else {
    w0 = branch_point_series(-std::sqrt(2.0 * arg * M_E));
  }
  return halley(x, w0);
}

double reg_gamma_cdf(double shape, double x) {
  if (shape <= 0.0) throw DomainError("reg_gamma_cdf: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double lg = std::lgamma(shape);
  if (x < shape + 1.0) {
    // lower series
    double ap = shape;
    double sum = 1.0 / shape;
    double del = sum;
    for (int it = 0; it < 1000; ++it) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + shape * std::log(x) - lg);
  }
  // upper continued fraction (modified Lentz)
  const double tiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - shape);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + shape * std::log(x) - lg) * h;
  return 1.0 - q;
}

double normal_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x * 0.70710678118654752440084436210485);
}

double normal_cdf_interval(double a, double b, double mean) {
  if (!(a < b)) throw DomainError("normal_cdf_interval: need a < b");
  const double lo = std::isinf(a) ? 0.0 : normal_cdf(a - mean);
  const double hi = std::isinf(b) ? 1.0 : normal_cdf(b - mean);
  return hi - lo;
}

double reg_beta_inc(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw DomainError("reg_beta_inc: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  auto betacf = [](double aa, double bb, double xx) {
    const double tiny = 1e-300;
    const double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
    double c = 1.0, d = 1.0 - qab * xx / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
      const int m2 = 2 * m;
      double an = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
      d = 1.0 + an * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      h *= d * c;
      an = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
      d = 1.0 + an * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
  };
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * betacf(a, b, x) / a;
  return 1.0 - std::exp(ln_front) * betacf(b, a, 1.0 - x) / b;
}

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double eps;
  int max_depth;
};

double adaptive_step(const SimpsonState& st, double a, double b, double fa, double fm, double fb,
                     double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm), frm = (*st.f)(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * st.eps || (b - a) < 1e-15 * (std::abs(a) + std::abs(b)))
    return left + right + delta / 15.0;
  if (depth >= st.max_depth)
    throw NonConvergence("integrate: max subdivision depth reached");
  return adaptive_step(st, a, m, fa, flm, fm, left, depth + 1) +
         adaptive_step(st, m, b, fm, frm, fb, right, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 IntegrateOptions opts) {
  if (lo == hi) return 0.0;
  const double fa = f(lo), fb = f(hi);
  const double m = 0.5 * (lo + hi);
  const double fm = f(m);
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  // coarse magnitude estimate for the relative tolerance target
  double scale = std::abs(whole);
  for (int i = 1; i < 16; i += 2) scale = std::max(scale, std::abs(f(lo + (hi - lo) * i / 16.0)) * std::abs(hi - lo));
  SimpsonState st{&f, std::max(scale, 1e-300) * opts.rel_tol, opts.max_depth};
  return adaptive_step(st, lo, hi, fa, fm, fb, whole, 0);
}

}  // namespace wrg::special
