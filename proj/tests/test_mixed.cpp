#include <doctest.h>

#include <cmath>
#include <random>

#include "rinorm/mixed.hpp"
#include "rinorm/random.hpp"
#include "rinorm/special.hpp"
#include "rinorm/witness.hpp"

using namespace rinorm;

namespace {
// χ of the cube (0,a)^n with a = m/N
GridFunction cube(int n, int N, int m) {
  const auto M = static_cast<std::size_t>(std::pow(N, n));
  std::vector<double> v(M, 0.0);
  for (std::size_t c = 0; c < M; ++c) {
    std::size_t r = c;
    bool in = true;
    for (int k = 0; k < n; ++k) {
      in = in && static_cast<int>(r % N) < m;
      r /= N;
    }
    v[c] = in ? 1.0 : 0.0;
  }
  return GridFunction(n, N, v);
}

std::vector<GridFunction> radial_family(int N) {
  std::vector<GridFunction> out;
  for (double a : {0.1, 0.3, 0.6})
    out.push_back(RadialProfile(PWDecreasing::indicator(a), 2, unit_ball_volume(2)).sample(N));
  // a staircase with a steep top
  out.push_back(RadialProfile(PWDecreasing({0, 0.01, 0.05, 0.2, 0.5, 1}, {8, 4, 2, 1, 0}), 2,
                              unit_ball_volume(2)).sample(N));
  return out;
}
}  // namespace

TEST_CASE("sections of simple functions") {
  for (int n : {2, 3}) {
    const auto f = cube(n, 8, 3);
    for (int k = 1; k <= n; ++k) {
      const auto s = psi_k(f, k);
      CHECK(s.dim() == n - 1);
      CHECK(rearrangement(s).support() == doctest::Approx(std::pow(3.0 / 8, n - 1)).epsilon(1e-15));
    }
    const GridFunction c(n, 4, std::vector<double>(static_cast<std::size_t>(std::pow(4, n)), -2.0));
    const auto pc = psi_k(c, 1);
    for (double v : pc.values()) CHECK(v == 2.0);
    CHECK_THROWS(psi_k(c, 0));
    CHECK_THROWS(psi_k(c, n + 1));
  }
  // L^q along the axis instead of the sup
  const GridFunction g(2, 2, {1, 3, 2, 0});
  const auto l1 = psi_k_Lq(g, 2, 1.0);
  CHECK(l1.values()[0] == doctest::Approx(2.0));
  CHECK(l1.values()[1] == doctest::Approx(1.0));
}

TEST_CASE("mixed norm examples") {
  for (int n : {2, 3}) {
    const auto r = mixed_norm(cube(n, 8, 3), SpaceSpec::lebesgue(1));
    CHECK(r.total == doctest::Approx(n * std::pow(3.0 / 8, n - 1)).epsilon(1e-14));
    double sum = 0.0;
    for (double x : r.per_axis) sum += x;
    CHECK(r.total == sum);
    CHECK(r.psi_rearrangements.size() == static_cast<std::size_t>(n));
    for (const auto& X : {SpaceSpec::lorentz(2, 1), SpaceSpec::lorentz_zygmund(kInf, 2, -1), SpaceSpec::linf()}) {
      const GridFunction one(n, 4, std::vector<double>(static_cast<std::size_t>(std::pow(4, n)), 1.0));
      CHECK(mixed_norm(one, X).total == doctest::Approx(n * fundamental_function(X, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("slab witness has an infinite mixed norm yet finite domain norm") {
  const PWDecreasing g({0.0, 1.0}, {kInf}, Head{0.0, Monomial{1.0, -0.25}});
  const auto s = make_slab_counterexample(g, 0.25, 2);
  CHECK(std::isfinite(norm(SpaceSpec::lorentz(2, 1), s.rearrangement_exact())));
  CHECK(mixed_norm_exact(s, SpaceSpec::lebesgue(1)).total == kInf);
  double prev = 0.0;
  for (int N : {16, 32, 64, 128, 256}) {
    const double t = mixed_norm(s, N, SpaceSpec::lebesgue(1)).total;
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("rango norm") {
  for (int n : {2, 3}) {
    const double np = conjugate_dim(n);
    CHECK(rango_norm(PWDecreasing::indicator(0.3), SpaceSpec::lebesgue(1), n) ==
          doctest::Approx(std::pow(0.3, 1 / np)).epsilon(1e-14));
    CHECK(rango_norm(PWDecreasing::zero(), SpaceSpec::lorentz(2, 1), n) == 0.0);
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_step(rng);
    CHECK(rango_norm(f, SpaceSpec::lebesgue(1), 2) ==
          doctest::Approx(norm(SpaceSpec::lorentz(2, 1), f) / 2).epsilon(1e-10));
  }
}

TEST_CASE("property: rango space embedding constant is refinement-stable") {
  for (const auto& X : {SpaceSpec::lebesgue(1), SpaceSpec::lorentz(2, 1), SpaceSpec::lebesgue(2)}) {
    INFO(X.to_string());
    double prev = 0.0;
    for (int N : {32, 64, 128}) {
      double worst = 0.0;
      for (const auto& f : radial_family(N)) {
        const double r = rango_norm(rearrangement(f), X, 2) / mixed_norm(f, X).total;
        worst = std::max(worst, r);
      }
      if (prev > 0) {
        CHECK(worst / prev <= 2.0);
        CHECK(worst / prev >= 0.5);
      }
      prev = worst;
    }
  }
}

TEST_CASE("property: axis lower bound and nesting of Lorentz ranges") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_grid(rng, 2 + trial % 2, 8);
    const auto X1 = SpaceSpec::lorentz(2, 1), X2 = SpaceSpec::lebesgue(2);
    const auto r1 = mixed_norm(f, X1), r2 = mixed_norm(f, X2);
    CHECK(r2.total <= r1.total);
    for (std::size_t k = 0; k < r1.per_axis.size(); ++k) {
      const auto& ps = r1.psi_rearrangements[k];
      double lo = kInf;
      for (double v : ps.values())
        if (v > 0) lo = std::min(lo, v);
      CHECK(r1.per_axis[k] >= fundamental_function(X1, ps.support()) * lo * (1 - 1e-12));
    }
  }
}
