#pragma once

#include <utility>

#include "rinorm/rearrange.hpp"
#include "rinorm/spaces.hpp"
#include "rinorm/stepfn.hpp"

namespace rinorm {

// Radial u(x) = P(ω|x - c|^n) with P(m) = ∫_m^{ω r^n} s^{-1/n'} f*(s) ds, ω = ω_{n-1}^{n'}.
struct SobolevWitness {
  PWDecreasing source;
  Curve profile;               // P in the measure coordinate m = ω|x|^n
  PWDecreasing grad_profile;   // |∇u| = n ω^{1/n} f*(m) in the same coordinate
  double r = 0.0;
  int n = 2;
  double omega = 0.0;

  Curve u_star() const;
  PWDecreasing grad_star() const;
  // rearrangement of each section ψ_k(u, L^inf); equals P(m^{n'})
  Curve psi_star() const;
  // ‖u‖_{R(X,L^inf)} = n ‖ψ*‖_X
  double mixed_norm(const SpaceSpec& X) const;
  // ‖u*‖_Z + ‖|∇u|*‖_Z
  double sobolev_norm(const SpaceSpec& Z) const;
  double value_at_radius(double rho) const;
  GridFunction sample(int N) const;
};

SobolevWitness make_sobolev_witness(const PWDecreasing& fstar, double r, int n);
// the ball-measure constant ω_{n-1}^{n'}
double witness_omega(int n);

struct Split {
  PWDecreasing f1;  // (f* - c)_+
  PWDecreasing f2;  // min(f*, c)
  double level = 0.0;
};
// c = f*(m0)
Split truncation_split(const PWDecreasing& f, double m0);

struct GridSplit {
  GridFunction f1;
  GridFunction f2;
  double level = 0.0;
};
GridSplit truncation_split(const GridFunction& f, double m0);

// f(x) = g*(2|x_n - 1/2|) on a centered slab; g* must be unbounded
SlabProfile make_slab_counterexample(const PWDecreasing& gstar, double r, int n);

}  // namespace rinorm
