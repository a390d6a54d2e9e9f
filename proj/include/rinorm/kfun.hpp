#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rinorm/mixed.hpp"
#include "rinorm/rearrange.hpp"
#include "rinorm/spaces.hpp"
#include "rinorm/stepfn.hpp"

namespace rinorm {

enum class KMethod { exact, holmstedt, mixed, bruteforce };

struct KCurve {
  std::string pair;  // e.g. "(L(1,1),Linf)"
  KMethod method = KMethod::exact;
  std::function<double(double)> eval;
};

// ∫_0^{min(t,1)} f*
double k_exact_L1_Linf(const PWDecreasing& f, double t);
// (∫_0^{t^{p0}} [s^{1/p0-1/q0} f*(s)]^{q0} ds)^{1/q0}
double k_holmstedt(const PWDecreasing& f, double p0, double q0, double t);
// truncated (p0,q0) norm over (0,t^α) plus t times the (p1,q1) tail over (t^α,1), 1/α = 1/p0 - 1/p1
double k_sobolev_pair(const PWDecreasing& Du_star, double p0, double q0, double p1, double q1, double t);

struct MixedK {
  double argument = 0.0;  // φ_X(t)
  double value = 0.0;     // Σ_k ‖ψ_k* χ_(0,t)‖_X
};
MixedK k_mixed_Linf(const GridFunction& f, const SpaceSpec& X, double t);
// reuse the section rearrangements of an earlier mixed_norm call
MixedK k_mixed_Linf(const MixedNormResult& sections, const SpaceSpec& X, double t);

// min over level cuts c of ‖(f-c)_+‖_{L^{p,q}} + t c; an upper bound for K(f,t; L^{p,q}, L^inf)
double k_bruteforce(const PWDecreasing& f, double p, double q, double t);

// (f - c)_+ for a bounded step function
PWDecreasing positive_part_above(const PWDecreasing& f, double c);

struct ShapeCheck {
  bool nondecreasing = true;
  bool concave = true;
  double worst_drop = 0.0;     // largest decrease between neighbours
  double worst_convexity = 0.0;  // largest second difference above zero, scaled
};
// sample on `points` t-values spread over [lo, hi]
ShapeCheck check_k_shape(const std::function<double(double)>& K, double lo, double hi, int points = 32);

KCurve make_kcurve(const PWDecreasing& f, KMethod method, double p0 = 1.0, double q0 = 1.0);

}  // namespace rinorm
