#pragma once

#include <cstdint>
#include <random>

#include "rinorm/rearrange.hpp"
#include "rinorm/stepfn.hpp"

namespace rinorm {

// platform-independent uniform draw on [0,1)
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RandomStepOptions {
  int max_pieces = 12;
  double max_value = 4.0;
  // snap breakpoints to k/2^20 and values to k/2^10 so sums stay exact
  bool dyadic = false;
};

PWDecreasing random_step(std::mt19937_64& rng, const RandomStepOptions& opt = {});
GridFunction random_grid(std::mt19937_64& rng, int n, int N, double max_value = 1.0);

}  // namespace rinorm
