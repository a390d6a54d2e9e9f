#include "rinorm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rinorm/quadrature.hpp"
#include "rinorm/random.hpp"

namespace rinorm {

namespace {

double recip(double p) { return p == kInf ? 0.0 : 1.0 / p; }

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // shortest form that still round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
    if (std::stod(tmp) == v) return tmp;
  }
  return buf;
}

}  // namespace

bool weight_nonincreasing(const WeightSpec& w) {
  // d/dx log w(e^{-x}) = -a + b/(1+x) must be >= 0 for all x > 0
  const double a = w.power, b = w.logpow;
  if (b >= 0) return a <= 0;
  return a <= b;
}

SpaceSpec SpaceSpec::lorentz(double p, double q) {
  const bool ok = (p == 1.0 && q == 1.0) || (p == kInf && q == kInf) || (p > 1.0 && p < kInf && q >= 1.0);
  if (!ok) throw PreconditionError("Lorentz space: need p=q=1, p=q=inf, or 1<p<inf with 1<=q<=inf");
  SpaceSpec s;
  s.kind = SpaceKind::lorentz;
  s.p = p;
  s.q = q;
  s.on_maximal = !weight_nonincreasing(s.effective_weight());
  return s;
}

SpaceSpec SpaceSpec::lorentz_zygmund(double p, double q, double alpha) {
  if (!(p >= 1.0 && q >= 1.0)) throw PreconditionError("Lorentz-Zygmund space: need 1 <= p, q <= inf");
  if (!std::isfinite(alpha)) throw PreconditionError("Lorentz-Zygmund space: alpha must be finite");
  SpaceSpec s;
  s.kind = SpaceKind::lorentz_zygmund;
  s.p = p;
  s.q = q;
  s.alpha = alpha;
  s.on_maximal = !weight_nonincreasing(s.effective_weight());
  return s;
}

SpaceSpec SpaceSpec::weighted(WeightSpec v, double q, bool on_maximal) {
  v.validate();
  if (!(q >= 1.0)) throw PreconditionError("weighted space: need q >= 1");
  SpaceSpec s;
  s.kind = SpaceKind::weighted;
  s.weight = v;
  s.q = q;
  s.on_maximal = on_maximal || !weight_nonincreasing(v);
  return s;
}

SpaceSpec SpaceSpec::linf() {
  SpaceSpec s;
  s.kind = SpaceKind::linf;
  return s;
}

WeightSpec SpaceSpec::effective_weight() const {
  switch (kind) {
    case SpaceKind::lorentz: return {1.0, recip(p) - recip(q), 0.0};
    case SpaceKind::lorentz_zygmund: return {1.0, recip(p) - recip(q), alpha};
    case SpaceKind::weighted: return weight;
    case SpaceKind::linf: break;
  }
  return {1.0, 0.0, 0.0};
}

std::string SpaceSpec::to_string() const {
  switch (kind) {
    case SpaceKind::lorentz: return "L(" + fmt(p) + "," + fmt(q) + ")";
    case SpaceKind::lorentz_zygmund: return "LZ(" + fmt(p) + "," + fmt(q) + "," + fmt(alpha) + ")";
    case SpaceKind::weighted:
      return std::string(on_maximal ? "W**(" : "W(") + fmt(weight.scale) + "," + fmt(weight.power) + "," +
             fmt(weight.logpow) + "," + fmt(q) + ")";
    case SpaceKind::linf: break;
  }
  return "Linf";
}

SpaceSpec parse_space(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&]() -> SpaceSpec { throw PreconditionError("unknown space variant: '" + text + "'"); };
  if (s == "Linf" || s == "L(inf)" || s == "L(inf,inf)") return SpaceSpec::linf();
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') return fail();
  const std::string name = s.substr(0, open);
  std::vector<double> args;
  std::stringstream body(s.substr(open + 1, s.size() - open - 2));
  std::string tok;
  while (std::getline(body, tok, ',')) {
    if (tok == "inf" || tok == "+inf") {
      args.push_back(kInf);
      continue;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) return fail();
      args.push_back(v);
    } catch (const std::exception&) {
      return fail();
    }
  }
  if (name == "L" && args.size() == 1) return SpaceSpec::lebesgue(args[0]);
  if (name == "L" && args.size() == 2) return SpaceSpec::lorentz(args[0], args[1]);
  if (name == "LZ" && args.size() == 3) return SpaceSpec::lorentz_zygmund(args[0], args[1], args[2]);
  if ((name == "W" || name == "W**") && args.size() == 4)
    return SpaceSpec::weighted({args[0], args[1], args[2]}, args[3], name == "W**");
  return fail();
}

// ---- norms ----

namespace {

double curve_norm(const SpaceSpec& X, const Curve& h, const WeightSpec& w) {
  const double q = X.kind == SpaceKind::linf ? kInf : X.q;
  if (q == kInf) return sup_weighted(h, w);
  const double I = integrate_weighted(h, w, q);
  if (I == kInf) return kInf;
  return std::pow(I, 1.0 / q);
}

}  // namespace

double norm(const SpaceSpec& X, const PWDecreasing& f) {
  if (X.kind == SpaceKind::linf) return f.values().front();
  if (X.on_maximal) return curve_norm(X, maximal(f), X.effective_weight());
  return curve_norm(X, Curve::from_step(f), X.effective_weight());
}

double norm(const SpaceSpec& X, const Curve& g) {
  if (X.kind == SpaceKind::linf) return sup_weighted(g, WeightSpec{});
  return curve_norm(X, X.on_maximal ? maximal(g) : g, X.effective_weight());
}

double norm_with_extra_power(const SpaceSpec& X, const Curve& h, double extra) {
  WeightSpec w = X.effective_weight();
  w.power += extra;
  return curve_norm(X, h, w);
}

double fundamental_function(const SpaceSpec& X, double t) {
  if (!(t > 0 && t <= 1)) throw PreconditionError("fundamental_function: need 0 < t <= 1");
  return norm(X, t == 1.0 ? PWDecreasing::constant(1.0) : PWDecreasing::indicator(t));
}

double boyd_upper(const SpaceSpec& X) {
  switch (X.kind) {
    case SpaceKind::lorentz:
    case SpaceKind::lorentz_zygmund: return recip(X.p);
    case SpaceKind::linf: return 0.0;
    case SpaceKind::weighted: break;
  }
  throw PreconditionError("boyd_upper: unsupported space variant " + X.to_string());
}

// ---- associate weight ----

AssociateWeight::AssociateWeight(WeightSpec v, double p) : v_(v), p_(p) {
  v.validate();
  if (!(p > 1.0 && p < kInf)) throw PreconditionError("associate weight: need 1 < p < inf");
  pp_ = p / (p - 1.0);
  // s^{-p} v(s)^p = C^p s^{s0} (1+log 1/s)^{r}
  s0_ = p * (v.power - 1.0);
  r_ = p * v.logpow;
  const double lam = s0_ + 1.0;
  rate_ = lam < 0 ? -lam : 0.0;

  const auto one = PWDecreasing::constant(1.0);
  report_.integral_v = integrate_weighted(one, v, 1.0);
  if (!std::isfinite(report_.integral_v))
    throw PreconditionError("associate weight: hypothesis (i) fails, integral of v over (0,1) is infinite");
  report_.integral_tp_vp = integrate_weighted(one, WeightSpec{v.scale, v.power - 1.0, v.logpow}, p);
  if (std::isfinite(report_.integral_tp_vp))
    throw PreconditionError("associate weight: hypothesis (ii) fails, integral of t^-p v^p is finite");

  // (iii): ∫_0^r v^p <= C r^p V(r), ratio tracked on a log grid
  double prev = 0.0, first_tail = 0.0;
  int rising = 0;
  const int K = 48;
  for (int k = 0; k <= K; ++k) {
    const double x = 0.05 * std::pow(1.25, k);
    const double r = std::exp(-x);
    const double lhs = integrate_weighted(one, v, p, 0.0, r);
    if (!std::isfinite(lhs))
      throw PreconditionError("associate weight: hypothesis (iii) fails, integral of v^p near 0 is infinite");
    // compare in log space: r^p V(r) can underflow
    const double log_ratio = std::log(lhs) + p * x - (log_V_reduced(x) + rate_ * x);
    const double ratio = std::exp(log_ratio);
    report_.sup_ratio = std::max(report_.sup_ratio, ratio);
    if (k == K / 2) first_tail = ratio;
    if (k > 0 && ratio > prev * (1 + 1e-9)) ++rising;
    prev = ratio;
  }
  report_.ratio_growing = rising == K && prev > 10.0 * first_tail;
  if (report_.ratio_growing || !std::isfinite(report_.sup_ratio))
    throw PreconditionError("associate weight: hypothesis (iii) fails, ratio grows without bound");
}

double AssociateWeight::log_V_reduced(double x) const {
  const double Cp = std::pow(v_.scale, p_);
  const double lam = s0_ + 1.0;
  // J(x) = ∫_0^x e^{-lam ξ} (1+ξ)^r dξ, so V = 1 + C^p J
  if (lam == 0.0) {
    double J;
    if (r_ == 0.0)
      J = x;
    else if (r_ == -1.0)
      J = std::log1p(x);
    else
      J = std::expm1((r_ + 1.0) * std::log1p(x)) / (r_ + 1.0);
    return std::log1p(Cp * J);
  }
  if (lam > 0) {
    // convergent case; only reachable from V() on weights the constructor rejects
    auto f = [&](double xi) { return std::exp(-lam * xi + r_ * std::log1p(xi)); };
    return std::log1p(Cp * integrate_adaptive(f, 0.0, x, 1e-13).value);
  }
  const double mu = -lam;
  // e^{-mu x} J(x) = ∫_0^x e^{-mu η} (1 + x - η)^r dη
  double Jred;
  if (r_ == 0.0) {
    Jred = -std::expm1(-mu * x) / mu;
  } else {
    auto f = [&](double eta) { return std::exp(-mu * eta + r_ * std::log1p(x - eta)); };
    const double top = std::min(x, 800.0 / mu);
    Jred = integrate_adaptive(f, 0.0, top, 1e-13).value;
  }
  return std::log(std::exp(-mu * x) + Cp * Jred);
}

double AssociateWeight::V(double t) const {
  if (!(t > 0 && t <= 1)) throw PreconditionError("associate weight: t outside (0,1]");
  const double x = -std::log(t);
  return std::exp(log_V_reduced(x) + rate_ * x);
}

LogWeight AssociateWeight::log_weight() const {
  const double p = p_, pp = pp_, a = v_.power, b = v_.logpow, C = v_.scale;
  const double power = rate_ - p * (1.0 - a) / pp;
  auto self = *this;
  return {power, [self, p, pp, b, C](double x) {
            const double logpart = b == 0.0 ? 0.0 : b * p * std::log1p(x);
            return (std::log(pp - 1.0) - pp * self.log_V_reduced(x) + p * std::log(C) + logpart) / pp;
          }};
}

double AssociateWeight::operator()(double t) const {
  if (!(t > 0 && t < 1)) throw PreconditionError("associate weight: t outside (0,1)");
  const auto lw = log_weight();
  const double x = -std::log(t);
  return std::exp(-lw.power * x + lw.rest(x));
}

double AssociateWeight::norm(const Curve& g) const {
  const double I = integrate_weighted(g, log_weight(), pp_);
  return I == kInf ? kInf : std::pow(I, 1.0 / pp_);
}

double AssociateWeight::norm(const PWDecreasing& g) const { return norm(Curve::from_step(g)); }

// ---- duality ----

DualityReport duality_pairing_check(const NormEvaluator& primal, const NormEvaluator& dual_norm, int trials,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DualityReport rep;
  for (int i = 0; i < trials; ++i) {
    const auto f = random_step(rng);
    const auto g = random_step(rng);
    const double pair = integrate_product(f, g);
    const double den = primal(f) * dual_norm(g);
    const double ratio = den > 0 ? pair / den : 0.0;
    ++rep.trials;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > 1.0 + 1e-9) ++rep.violations;
  }
  return rep;
}

DualityReport duality_pairing_check(const SpaceSpec& X, const NormEvaluator& dual_norm, int trials,
                                    std::uint64_t seed) {
  return duality_pairing_check([&X](const PWDecreasing& f) { return norm(X, f); }, dual_norm, trials, seed);
}

}  // namespace rinorm
