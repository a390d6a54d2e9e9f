#pragma once

#include <vector>

#include "rinorm/rearrange.hpp"
#include "rinorm/spaces.hpp"

namespace rinorm {

struct MixedNormResult {
  std::vector<double> per_axis;
  double total = 0.0;
  std::vector<PWDecreasing> psi_rearrangements;
};

// sup of |f| along axis k (1-based); an (n-1)-dimensional grid function
GridFunction psi_k(const GridFunction& f, int k);
// same section with an L^q(I) norm along the axis instead of the sup
GridFunction psi_k_Lq(const GridFunction& f, int k, double q);

MixedNormResult mixed_norm(const GridFunction& f, const SpaceSpec& X);
// slab functions depend on one coordinate only, so their sections are known from the layers
MixedNormResult mixed_norm(const SlabProfile& s, int N, const SpaceSpec& X,
                           CellSampling mode = CellSampling::farthest);
// the continuum slab (no sampling)
MixedNormResult mixed_norm_exact(const SlabProfile& s, const SpaceSpec& X);

// ‖f*(t^{n'})‖_X
double rango_norm(const PWDecreasing& f, const SpaceSpec& X, int n);
double rango_norm(const Curve& f, const SpaceSpec& X, int n);

}  // namespace rinorm
