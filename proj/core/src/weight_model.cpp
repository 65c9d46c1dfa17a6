#include "wrg/weight_model.hpp"

#include <cmath>

#include <json.hpp>

#include "wrg/special_fn.hpp"

namespace wrg {

using special::integrate;
using special::reg_beta_inc;
using json = nlohmann::json;

AtomBase AtomBase::uniform(double a, double b) {
  if (!(a > 0.0 && a <= b && b < 1.0))
    throw InvalidParameter("AtomBase::uniform: need 0 < a <= b < 1");
  AtomBase out;
  out.kind = Kind::Uniform;
  out.a = a;
  out.b = b;
  return out;
}

AtomBase AtomBase::point_mass(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("AtomBase::point_mass: need p in (0,1)");
  AtomBase out;
  out.kind = Kind::Point;
  out.point = p;
  return out;
}

WeightModel WeightModel::degenerate() {
  WeightModel m;
  m.cls_ = WeightClass::Degenerate;
  m.mean_cache_ = 1.0;
  return m;
}

WeightModel WeightModel::atom_mixture(double q0, AtomBase base) {
  if (!(q0 > 0.0 && q0 <= 1.0)) throw InvalidParameter("atom_mixture: need q0 in (0,1]");
  WeightModel m;
  m.cls_ = WeightClass::AtomMixture;
  m.p1_ = q0;
  m.base_ = base;
  if (base.kind == AtomBase::Kind::Uniform)
    m.mean_cache_ = q0 + (1.0 - q0) * 0.5 * (base.a + base.b);
  else
    m.mean_cache_ = q0 + (1.0 - q0) * base.point;
  return m;
}

WeightModel WeightModel::beta_conditioned(double alpha, double beta, double w_star) {
  if (!(alpha > 0.0 && beta > 0.0)) throw InvalidParameter("beta_conditioned: need alpha, beta > 0");
  if (!(w_star >= 0.0 && w_star < 1.0)) throw InvalidParameter("beta_conditioned: need w_star in [0,1)");
  WeightModel m;
  m.cls_ = WeightClass::BetaConditioned;
  m.p1_ = alpha;
  m.p2_ = beta;
  m.p3_ = w_star;
  m.z_ = 1.0 / (1.0 - reg_beta_inc(alpha, beta, w_star));
  return m;
}

WeightModel WeightModel::gamma_fraction(double b, double c1, double w_star) {
  if (!(c1 > 0.0)) throw InvalidParameter("gamma_fraction: need c1 > 0");
  if (!(w_star >= 0.0 && w_star < 1.0)) throw InvalidParameter("gamma_fraction: need w_star in [0,1)");
  if (1.0 / (1.0 - w_star) < b * c1)
    throw InvalidParameter("gamma_fraction: tail not monotone, need 1/(1-w_star) >= b*c1");
  WeightModel m;
  m.cls_ = WeightClass::GammaFraction;
  m.p1_ = b;
  m.p2_ = c1;
  m.p3_ = w_star;
  m.z_ = std::pow(1.0 - w_star, b) * std::exp(w_star / (c1 * (1.0 - w_star)));
  return m;
}

WeightModel WeightModel::pareto_weibull(double alpha) {
  if (!(alpha > 1.0)) throw InvalidParameter("pareto_weibull: need alpha > 1");
  WeightModel m;
  m.cls_ = WeightClass::ParetoWeibull;
  m.p1_ = alpha;
  m.mean_cache_ = 1.0 / alpha;
  return m;
}

WeightModel WeightModel::rav_canonical(double c, double tau) {
  if (!(c > 0.0)) throw InvalidParameter("rav_canonical: need c > 0");
  if (!(tau > 1.0)) throw InvalidParameter("rav_canonical: need tau > 1");
  WeightModel m;
  m.cls_ = WeightClass::RaVCanonical;
  m.p1_ = c;
  m.p2_ = tau;
  return m;
}

double WeightModel::mean_w() const {
  if (mean_cache_ >= 0.0) return mean_cache_;
  mean_cache_ = expect([](double w) { return w; });
  return mean_cache_;
}

double WeightModel::theta(int m) const {
  if (m < 1) throw InvalidParameter("theta: need m >= 1");
  return 1.0 + mean_w() / m;
}

double WeightModel::tail_probability(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter("tail_probability: need x in [0,1]");
  switch (cls_) {
    case WeightClass::Degenerate:
      return 1.0;  // W = 1 >= x for all x <= 1
    case WeightClass::AtomMixture: {
      double base_tail;
      if (base_.kind == AtomBase::Kind::Uniform) {
        if (x <= base_.a)
          base_tail = 1.0;
        else if (x >= base_.b)
          base_tail = 0.0;
        else
          base_tail = (base_.b - x) / (base_.b - base_.a);
      } else {
        base_tail = x <= base_.point ? 1.0 : 0.0;
      }
      return p1_ + (1.0 - p1_) * base_tail;
    }
    case WeightClass::BetaConditioned:
      if (x <= p3_) return 1.0;
      return z_ * (1.0 - reg_beta_inc(p1_, p2_, x));
    case WeightClass::GammaFraction:
      if (x <= p3_) return 1.0;
      if (x >= 1.0) return 0.0;
      return z_ * std::pow(1.0 - x, -p1_) * std::exp(-x / (p2_ * (1.0 - x)));
    case WeightClass::ParetoWeibull:
      if (x >= 1.0) return 0.0;
      return std::pow(1.0 - x, p1_ - 1.0);
    case WeightClass::RaVCanonical:
      if (x <= 0.0) return 1.0;
      if (x >= 1.0) return 0.0;
      return std::exp(-std::pow(-std::log1p(-x) / p1_, p2_));
  }
  return 0.0;
}

namespace {

// Marsaglia-Tsang for shape >= 1; boosted for shape < 1.
double sample_gamma(RngStream& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_unit_open();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Solve tail(x) = u for the GammaFraction class: safeguarded Newton on
// g(x) = -log tail(x), increasing on [w_star, 1) by the monotonicity guard.
double invert_gamma_fraction(double b, double c1, double w_star, double z, double u) {
  const double target = -std::log(u);
  auto g = [&](double x) {
    return -std::log(z) + b * std::log1p(-x) + x / (c1 * (1.0 - x));
  };
  auto gp = [&](double x) {
    const double om = 1.0 - x;
    return 1.0 / (c1 * om * om) - b / om;
  };
  double lo = w_star, hi = 1.0 - 1e-15;
  // initial guess: ignore the polynomial factor, x/(c1(1-x)) = target + log z
  const double s = std::max(target + std::log(z), 0.0);
  double x = std::min(std::max(c1 * s / (1.0 + c1 * s), lo), hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx > target)
      hi = x;
    else
      lo = x;
    const double step = (target - gx) / gp(x);
    double xn = x + step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(xn - x) < 1e-13) return xn;
    x = xn;
  }
  return x;
}

}  // namespace

double WeightModel::sample(RngStream& rng) const {
  switch (cls_) {
    case WeightClass::Degenerate:
      return 1.0;
    case WeightClass::AtomMixture: {
      if (rng.next_unit() < p1_) return 1.0;
      if (base_.kind == AtomBase::Kind::Uniform)
        return base_.a + (base_.b - base_.a) * rng.next_unit();
      return base_.point;
    }
    case WeightClass::BetaConditioned: {
      for (;;) {
        const double g1 = sample_gamma(rng, p1_);
        const double g2 = sample_gamma(rng, p2_);
        const double w = g1 / (g1 + g2);
        if (w >= p3_ && w > 0.0) return w;
      }
    }
    case WeightClass::GammaFraction:
      return invert_gamma_fraction(p1_, p2_, p3_, z_, rng.next_unit_open());
    case WeightClass::ParetoWeibull:
      return 1.0 - std::pow(rng.next_unit_open(), 1.0 / (p1_ - 1.0));
    case WeightClass::RaVCanonical:
      return 1.0 - std::exp(-p1_ * std::pow(-std::log(rng.next_unit_open()), 1.0 / p2_));
  }
  return 1.0;
}

double WeightModel::expect(const std::function<double(double)>& h) const {
  switch (cls_) {
    case WeightClass::Degenerate:
      return h(1.0);
    case WeightClass::AtomMixture: {
      double base_mean;
      if (base_.kind == AtomBase::Kind::Uniform) {
        if (base_.a == base_.b)
          base_mean = h(base_.a);
        else
          base_mean = integrate(h, base_.a, base_.b) / (base_.b - base_.a);
      } else {
        base_mean = h(base_.point);
      }
      return p1_ * h(1.0) + (1.0 - p1_) * base_mean;
    }
    case WeightClass::BetaConditioned: {
      // substitute u = (1-x)^beta to absorb the (1-x)^{beta-1} factor
      const double a = p1_, b = p2_;
      const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      const double front = z_ / (b * std::exp(ln_beta));
      auto g = [&](double u) {
        const double x = 1.0 - std::pow(u, 1.0 / b);
        return h(x) * std::pow(x, a - 1.0);
      };
      const double hi = std::pow(1.0 - p3_, b);
      return front * integrate(g, 0.0, hi);
    }
    case WeightClass::GammaFraction: {
      // explicit density = tail * ((c1 (1-x)^2)^{-1} - b/(1-x)); truncate
      // where the tail drops below 1e-18
      auto f = [&](double x) {
        const double om = 1.0 - x;
        const double dens = tail_probability(x) * (1.0 / (p2_ * om * om) - p1_ / om);
        return h(x) * dens;
      };
      const double x_hi = invert_gamma_fraction(p1_, p2_, p3_, z_, 1e-18);
      return integrate(f, p3_, x_hi);
    }
    case WeightClass::ParetoWeibull: {
      // u = (1-x)^{alpha-1}, W = 1 - u^{1/(alpha-1)} with u uniform
      auto g = [&](double u) { return h(1.0 - std::pow(u, 1.0 / (p1_ - 1.0))); };
      return integrate(g, 0.0, 1.0);
    }
    case WeightClass::RaVCanonical: {
      // quantile substitution, clipped away from the singular endpoints
      auto g = [&](double u) {
        return h(1.0 - std::exp(-p1_ * std::pow(-std::log(u), 1.0 / p2_)));
      };
      return integrate(g, 1e-16, 1.0 - 1e-16);
    }
  }
  return 0.0;
}

double WeightModel::param(const std::string& name) const {
  switch (cls_) {
    case WeightClass::Degenerate:
      break;
    case WeightClass::AtomMixture:
      if (name == "q0") return p1_;
      break;
    case WeightClass::BetaConditioned:
      if (name == "alpha") return p1_;
      if (name == "beta") return p2_;
      if (name == "w_star") return p3_;
      break;
    case WeightClass::GammaFraction:
      if (name == "b") return p1_;
      if (name == "c1") return p2_;
      if (name == "w_star") return p3_;
      break;
    case WeightClass::ParetoWeibull:
      if (name == "alpha") return p1_;
      break;
    case WeightClass::RaVCanonical:
      if (name == "c") return p1_;
      if (name == "tau") return p2_;
      break;
  }
  throw InvalidParameter("param: no parameter '" + name + "' for this class");
}

const AtomBase& WeightModel::atom_base() const {
  if (cls_ != WeightClass::AtomMixture)
    throw InvalidParameter("atom_base: model is not an AtomMixture");
  return base_;
}

namespace {

const char* class_name(WeightClass c) {
  switch (c) {
    case WeightClass::Degenerate: return "degenerate";
    case WeightClass::AtomMixture: return "atom_mixture";
    case WeightClass::BetaConditioned: return "beta_conditioned";
    case WeightClass::GammaFraction: return "gamma_fraction";
    case WeightClass::ParetoWeibull: return "pareto_weibull";
    case WeightClass::RaVCanonical: return "rav_canonical";
  }
  return "?";
}

void require_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
  for (const char* k : keys)
    if (!obj.contains(k))
      throw InvalidParameter(std::string(where) + ": missing key '" + k + "'");
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    bool known = false;
    for (const char* want : keys) known = known || k == want;
    if (!known) throw InvalidParameter(std::string(where) + ": unknown key '" + k + "'");
  }
}

double num(const json& obj, const char* key, const char* where) {
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw InvalidParameter(std::string(where) + ": '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

WeightModel WeightModel::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("model JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidParameter("model JSON must be an object");
  require_keys(doc, {"class", "params"}, "model");
  const std::string cls = doc.at("class").get<std::string>();
  const json& p = doc.at("params");
  if (!p.is_object()) throw InvalidParameter("model params must be an object");
  if (cls == "degenerate") {
    require_keys(p, {}, "degenerate params");
    return degenerate();
  }
  if (cls == "atom_mixture") {
    require_keys(p, {"q0", "base"}, "atom_mixture params");
    const json& b = p.at("base");
    if (!b.is_object()) throw InvalidParameter("atom_mixture base must be an object");
    const std::string kind = b.value("kind", "");
    AtomBase base;
    if (kind == "uniform") {
      require_keys(b, {"kind", "a", "b"}, "atom base");
      base = AtomBase::uniform(num(b, "a", "atom base"), num(b, "b", "atom base"));
    } else if (kind == "point") {
      require_keys(b, {"kind", "value"}, "atom base");
      base = AtomBase::point_mass(num(b, "value", "atom base"));
    } else {
      throw InvalidParameter("atom base kind must be 'uniform' or 'point'");
    }
    return atom_mixture(num(p, "q0", "atom_mixture"), base);
  }
  if (cls == "beta_conditioned") {
    require_keys(p, {"alpha", "beta", "w_star"}, "beta_conditioned params");
    return beta_conditioned(num(p, "alpha", "beta_conditioned"), num(p, "beta", "beta_conditioned"),
                            num(p, "w_star", "beta_conditioned"));
  }
  if (cls == "gamma_fraction") {
    require_keys(p, {"b", "c1", "w_star"}, "gamma_fraction params");
    return gamma_fraction(num(p, "b", "gamma_fraction"), num(p, "c1", "gamma_fraction"),
                          num(p, "w_star", "gamma_fraction"));
  }
  if (cls == "pareto_weibull") {
    require_keys(p, {"alpha"}, "pareto_weibull params");
    return pareto_weibull(num(p, "alpha", "pareto_weibull"));
  }
  if (cls == "rav_canonical") {
    require_keys(p, {"c", "tau"}, "rav_canonical params");
    return rav_canonical(num(p, "c", "rav_canonical"), num(p, "tau", "rav_canonical"));
  }
  throw InvalidParameter("unknown model class '" + cls + "'");
}

std::string WeightModel::to_json() const {
  json p = json::object();
  switch (cls_) {
    case WeightClass::Degenerate:
      break;
    case WeightClass::AtomMixture: {
      p["q0"] = p1_;
      json b;
      if (base_.kind == AtomBase::Kind::Uniform)
        b = {{"kind", "uniform"}, {"a", base_.a}, {"b", base_.b}};
      else
        b = {{"kind", "point"}, {"value", base_.point}};
      p["base"] = b;
      break;
    }
    case WeightClass::BetaConditioned:
      p = {{"alpha", p1_}, {"beta", p2_}, {"w_star", p3_}};
      break;
    case WeightClass::GammaFraction:
      p = {{"b", p1_}, {"c1", p2_}, {"w_star", p3_}};
      break;
    case WeightClass::ParetoWeibull:
      p = {{"alpha", p1_}};
      break;
    case WeightClass::RaVCanonical:
      p = {{"c", p1_}, {"tau", p2_}};
      break;
  }
  return json{{"class", class_name(cls_)}, {"params", p}}.dump();
}

}  // namespace wrg
