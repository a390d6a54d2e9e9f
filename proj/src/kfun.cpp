#include "rinorm/kfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rinorm {

namespace {

double recip(double p) { return p == kInf ? 0.0 : 1.0 / p; }

void check_t(double t) {
  if (!(t > 0) || std::isnan(t)) throw PreconditionError("K-functional: t must be > 0");
}

// (∫_lo^hi [s^{1/p-1/q} g]^q ds)^{1/q}
double lorentz_piece(const PWDecreasing& g, double p, double q, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (p == 1.0 && q == 1.0) return g.primitive(hi) - g.primitive(lo);
  const double I = integrate_weighted(g, WeightSpec{1.0, recip(p) - recip(q), 0.0}, q, lo, hi);
  return I == kInf ? kInf : std::pow(I, 1.0 / q);
}

void check_lorentz_params(double p0, double q0, const char* who) {
  const bool ok = (p0 == 1.0 && q0 == 1.0) || (p0 > 1.0 && p0 < kInf && q0 >= 1.0 && q0 < kInf);
  if (!ok) throw PreconditionError(std::string(who) + ": need p0=q0=1 or 1<p0<inf, 1<=q0<inf");
}

}  // namespace

double k_exact_L1_Linf(const PWDecreasing& f, double t) {
  check_t(t);
  return f.primitive(std::min(t, 1.0));
}

double k_holmstedt(const PWDecreasing& f, double p0, double q0, double t) {
  check_t(t);
  check_lorentz_params(p0, q0, "k_holmstedt");
  if (p0 == 1.0) return k_exact_L1_Linf(f, t);
  return lorentz_piece(f, p0, q0, 0.0, std::min(std::pow(t, p0), 1.0));
}

double k_sobolev_pair(const PWDecreasing& Du, double p0, double q0, double p1, double q1, double t) {
  check_t(t);
  check_lorentz_params(p0, q0, "k_sobolev_pair");
  if (!(p1 > p0 && p1 < kInf && q1 >= 1.0 && q1 < kInf))
    throw PreconditionError("k_sobolev_pair: need p0 < p1 < inf and 1 <= q1 < inf");
  const double alpha = 1.0 / (1.0 / p0 - 1.0 / p1);
  const double cut = std::min(std::pow(t, alpha), 1.0);
  const double head = lorentz_piece(Du, p0, q0, 0.0, cut);
  const double tail = lorentz_piece(Du, p1, q1, cut, 1.0);
  if (tail == 0.0) return head;
  return head + t * tail;
}

MixedK k_mixed_Linf(const MixedNormResult& sections, const SpaceSpec& X, double t) {
  if (!(t > 0 && t < 1)) throw PreconditionError("k_mixed_Linf: need 0 < t < 1");
  MixedK r;
  r.argument = fundamental_function(X, t);
  for (const auto& s : sections.psi_rearrangements) r.value += norm(X, s.truncated(t));
  return r;
}

MixedK k_mixed_Linf(const GridFunction& f, const SpaceSpec& X, double t) {
  return k_mixed_Linf(mixed_norm(f, X), X, t);
}

PWDecreasing positive_part_above(const PWDecreasing& f, double c) {
  if (f.unbounded()) throw PreconditionError("positive part: bounded step function expected");
  std::vector<double> v = f.values();
  for (auto& x : v) x = std::max(x - c, 0.0);
  return PWDecreasing(f.breakpoints(), std::move(v));
}

double k_bruteforce(const PWDecreasing& f, double p, double q, double t) {
  check_t(t);
  if (f.pieces() > 200) throw PreconditionError("k_bruteforce: at most 200 pieces");
  if (f.unbounded()) throw PreconditionError("k_bruteforce: bounded step function expected");
  const SpaceSpec X = (p == 1.0 && q == 1.0) ? SpaceSpec::lorentz(1, 1) : SpaceSpec::lorentz(p, q);
  // the candidate set does not depend on t, so the result is a min of affine functions of t
  std::vector<double> cs = f.values();
  cs.push_back(0.0);
  const double top = f.values().front();
  for (int k = 1; k <= 64; ++k) cs.push_back(top * k / 65.0);
  double best = kInf;
  for (double c : cs) {
    const double v = norm(X, positive_part_above(f, c)) + t * c;
    best = std::min(best, v);
  }
  return best;
}

ShapeCheck check_k_shape(const std::function<double(double)>& K, double lo, double hi, int points) {
  ShapeCheck s;
  std::vector<double> ts(points), ks(points);
  for (int i = 0; i < points; ++i) {
    ts[i] = lo + (hi - lo) * i / (points - 1);
    ks[i] = K(ts[i]);
  }
  const double scale = std::max(1.0, std::fabs(ks.back()));
  for (int i = 1; i < points; ++i) {
    const double drop = ks[i - 1] - ks[i];
    if (drop > 1e-12 * scale) s.nondecreasing = false;
    s.worst_drop = std::max(s.worst_drop, drop);
  }
  for (int i = 1; i + 1 < points; ++i) {
    // uniform spacing: concave iff second difference <= 0
    const double d2 = (ks[i + 1] - ks[i]) - (ks[i] - ks[i - 1]);
    if (d2 > 1e-10 * scale) s.concave = false;
    s.worst_convexity = std::max(s.worst_convexity, d2 / scale);
  }
  return s;
}

KCurve make_kcurve(const PWDecreasing& f, KMethod method, double p0, double q0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(L(%g,%g),Linf)", p0, q0);
  KCurve k;
  k.pair = buf;
  k.method = method;
  switch (method) {
    case KMethod::exact: k.pair = "(L(1,1),Linf)"; k.eval = [f](double t) { return k_exact_L1_Linf(f, t); }; break;
    case KMethod::holmstedt: k.eval = [f, p0, q0](double t) { return k_holmstedt(f, p0, q0, t); }; break;
    case KMethod::bruteforce: k.eval = [f, p0, q0](double t) { return k_bruteforce(f, p0, q0, t); }; break;
    case KMethod::mixed: throw PreconditionError("make_kcurve: the mixed method needs a grid function");
  }
  return k;
}

}  // namespace rinorm
