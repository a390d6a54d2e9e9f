#include "rinorm/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rinorm {

PWDecreasing random_step(std::mt19937_64& rng, const RandomStepOptions& opt) {
  const int m = 1 + static_cast<int>(uniform01(rng) * opt.max_pieces);
  std::vector<double> cuts;
  while (static_cast<int>(cuts.size()) < m - 1) {
    double c = uniform01(rng);
    if (opt.dyadic) c = std::round(c * 0x1.0p20) * 0x1.0p-20;
    if (c <= 0.0 || c >= 1.0) continue;
    if (std::find(cuts.begin(), cuts.end(), c) != cuts.end()) continue;
    cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> b{0.0};
  b.insert(b.end(), cuts.begin(), cuts.end());
  b.push_back(1.0);
  std::vector<double> v(m);
  for (auto& x : v) {
    x = uniform01(rng) * opt.max_value;
    if (opt.dyadic) x = std::round(x * 0x1.0p10) * 0x1.0p-10;
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  return PWDecreasing(std::move(b), std::move(v));
}

GridFunction random_grid(std::mt19937_64& rng, int n, int N, double max_value) {
  const auto M = static_cast<std::size_t>(std::pow(static_cast<double>(N), n));
  std::vector<double> v(M);
  for (auto& x : v) x = (2.0 * uniform01(rng) - 1.0) * max_value;
  return GridFunction(n, N, std::move(v));
}

}  // namespace rinorm
