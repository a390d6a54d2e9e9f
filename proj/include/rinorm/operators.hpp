#pragma once

#include "rinorm/spaces.hpp"
#include "rinorm/stepfn.hpp"

namespace rinorm {

// t -> base(t^warp)
struct WarpedDecreasing {
  Curve base;
  double warp = 1.0;

  double eval(double t) const;
  Curve materialize() const { return base.warped(warp); }
  // +inf when base blows up at 0
  double at_zero() const;
};

// Hf(t) = ∫_{t^{n'}}^1 s^{-1/n'} f(s) ds
WarpedDecreasing op_H(const PWDecreasing& f, int n);
// f**(t^{1/n'})
WarpedDecreasing op_Hprime(const PWDecreasing& f, int n);
// t -> ∫_t^1 s^beta f(s) ds, beta > -1
Curve op_beta(const PWDecreasing& f, double beta);
Curve op_beta(const Curve& f, double beta);

// ‖f**(t^{1/n'})‖ in the associate space of the domain
double optimal_range_assoc_norm(const PWDecreasing& f, const SpaceSpec& Zdual, int n);
// ‖∫_{t^{n'}}^1 f**(s) s^{-1/n'} ds‖_X, or with f* in place of f** when use_star is set
double optimal_domain_norm(const PWDecreasing& f, const SpaceSpec& X, int n, bool use_star);

// t -> ∫_t^1 s^{1/n-1} f(s) ds
Curve kerman_pick_transform(const PWDecreasing& f, int n);
// ‖t^{1/n} f**(t)‖ in Zdual's weighted L^q
double kp_optimal_range_assoc_norm(const PWDecreasing& f, const SpaceSpec& Zdual, int n);

}  // namespace rinorm
