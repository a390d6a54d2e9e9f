#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rinorm/operators.hpp"
#include "rinorm/random.hpp"
#include "rinorm/special.hpp"
#include "rinorm/witness.hpp"

using namespace rinorm;

namespace {
std::vector<PWDecreasing> steps(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<PWDecreasing> out;
  for (int i = 0; i < count; ++i) out.push_back(random_step(rng));
  return out;
}

// spread max/min of a positive ratio series
double spread(const std::vector<double>& r) {
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return *hi / *lo;
}
}  // namespace

TEST_CASE("H on indicators and constants") {
  const double a = 0.36;
  const auto h = op_H(PWDecreasing::indicator(a), 2);
  for (double t : {0.05, 0.3, 0.59})
    CHECK(h.eval(t) == doctest::Approx(2 * (std::sqrt(a) - t)).epsilon(1e-13));
  CHECK(h.eval(0.7) == 0.0);
  CHECK(h.eval(1.0) == 0.0);
  for (int n : {2, 3, 4}) {
    const auto one = op_H(PWDecreasing::constant(1.0), n);
    for (double t : {0.1, 0.5, 0.9})
      CHECK(one.eval(t) == doctest::Approx(n * (1 - std::pow(t, 1.0 / (n - 1)))).epsilon(1e-13));
    CHECK(one.eval(1.0) == 0.0);
  }
  CHECK(op_H(PWDecreasing::zero(), 3).eval(0.2) == 0.0);
}

TEST_CASE("property: H is nonincreasing and vanishes at 1") {
  for (const auto& f : steps(31, 20)) {
    const auto h = op_H(f, 3);
    CHECK(h.eval(1.0) == 0.0);
    double prev = kInf;
    for (int i = 1; i < 50; ++i) {
      const double v = h.eval(i / 50.0);
      CHECK(v <= prev * (1 + 1e-14));
      prev = v;
    }
  }
}

TEST_CASE("H' composes the maximal function") {
  const double a = 0.4;
  const auto hp = op_Hprime(PWDecreasing::indicator(a), 2);
  CHECK(hp.eval(0.1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hp.eval(0.5) == doctest::Approx(a / std::sqrt(0.5)).epsilon(1e-14));
  CHECK(op_Hprime(PWDecreasing::constant(3.0), 3).eval(0.2) == doctest::Approx(3.0).epsilon(1e-15));
  std::mt19937_64 rng(2);
  for (const auto& f : steps(32, 10)) {
    const auto hp3 = op_Hprime(f, 3);
    const auto m = maximal(f);
    for (int k = 0; k < 100; ++k) {
      const double t = 1e-3 + 0.998 * uniform01(rng);
      CHECK(hp3.eval(t) == doctest::Approx(m.eval(std::pow(t, 1 / conjugate_dim(3)))).epsilon(1e-12));
    }
  }
}

TEST_CASE("power-weighted tail integrals") {
  const auto one = PWDecreasing::constant(1.0);
  CHECK(op_beta(one, 0.0).eval(0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(op_beta(one, -0.5).eval(0.3) == doctest::Approx(2 * (1 - std::sqrt(0.3))).epsilon(1e-14));
  CHECK(op_beta(PWDecreasing::zero(), 0.5).eval(0.3) == 0.0);
  CHECK_THROWS_AS(op_beta(one, -1.0), PreconditionError);
  CHECK(kerman_pick_transform(one, 2).eval(0.3) == doctest::Approx(2 * (1 - std::sqrt(0.3))).epsilon(1e-14));
  CHECK(kerman_pick_transform(PWDecreasing::zero(), 2).eval(0.3) == 0.0);
  const double a = 0.6;
  for (int n : {2, 3})
    for (double t : {0.1, 0.4, 0.7}) {
      const double want = t < a ? n * (std::pow(a, 1.0 / n) - std::pow(t, 1.0 / n)) : 0.0;
      CHECK(kerman_pick_transform(PWDecreasing::indicator(a), n).eval(t) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("optimal range functional") {
  CHECK(optimal_range_assoc_norm(PWDecreasing::indicator(0.3), SpaceSpec::linf(), 2) == doctest::Approx(1.0));
  CHECK(optimal_range_assoc_norm(PWDecreasing::zero(), SpaceSpec::lebesgue(2), 2) == 0.0);
  // Z = L^p: equivalent to the L^{p'(n-1)/n, p'} norm on the family
  for (auto [p, n] : {std::pair{1.5, 2}, {2.0, 3}, {1.5, 3}}) {
    const double pp = p / (p - 1);
    const auto Zd = SpaceSpec::lebesgue(pp);
    const auto Xd = SpaceSpec::lorentz(pp * (n - 1) / n, pp);
    std::vector<double> r;
    for (const auto& f : steps(40, 100)) r.push_back(optimal_range_assoc_norm(f, Zd, n) / norm(Xd, f));
    for (double a : {1e-4, 1e-2, 0.5}) {
      const auto chi = PWDecreasing::indicator(a);
      r.push_back(optimal_range_assoc_norm(chi, Zd, n) / norm(Xd, chi));
    }
    CHECK(spread(r) < 4.0);
  }
}

TEST_CASE("optimal domain functional") {
  CHECK(optimal_domain_norm(PWDecreasing::zero(), SpaceSpec::lorentz(2, 1), 2, false) == 0.0);
  CHECK_THROWS_AS(optimal_domain_norm(PWDecreasing::constant(1.0), SpaceSpec::lebesgue(1), 2, true),
                  PreconditionError);
  const auto lz = SpaceSpec::lorentz_zygmund(kInf, 2, -1);
  const double star = optimal_domain_norm(PWDecreasing::constant(1.0), lz, 2, true);
  const double maxi = optimal_domain_norm(PWDecreasing::constant(1.0), lz, 2, false);
  CHECK(std::isfinite(star));
  CHECK(maxi / star <= 4.0);
  CHECK(maxi / star >= 0.25);
  // X = L^{p(n-1)/(n-p), p}: equivalent to L^p
  for (auto [p, n] : {std::pair{1.5, 2}, {2.0, 3}}) {
    const auto X = SpaceSpec::lorentz(p * (n - 1) / (n - p), p);
    std::vector<double> r;
    for (const auto& f : steps(41, 60)) r.push_back(optimal_domain_norm(f, X, n, false) / norm(SpaceSpec::lebesgue(p), f));
    CHECK(spread(r) < 4.0);
  }
}

TEST_CASE("Kerman-Pick range functional") {
  for (int n : {2, 3}) {
    const double a = 0.2;
    CHECK(kp_optimal_range_assoc_norm(PWDecreasing::indicator(a), SpaceSpec::linf(), n) ==
          doctest::Approx(std::pow(a, 1.0 / n)).epsilon(1e-12));
    CHECK(kp_optimal_range_assoc_norm(PWDecreasing::zero(), SpaceSpec::lebesgue(2), n) == 0.0);
  }
  // Z = L^p: the associate of L^{np/(n-p), p} is L^{(np/(n-p))', p'}
  for (auto [p, n] : {std::pair{1.5, 2}, {2.0, 3}}) {
    const double pp = p / (p - 1), ps = n * p / (n - p), pss = ps / (ps - 1);
    std::vector<double> r;
    for (const auto& f : steps(42, 80))
      r.push_back(kp_optimal_range_assoc_norm(f, SpaceSpec::lebesgue(pp), n) / norm(SpaceSpec::lorentz(pss, pp), f));
    CHECK(spread(r) < 4.0);
  }
}

TEST_CASE("H is additive over the truncation split") {
  std::mt19937_64 rng(12);
  RandomStepOptions opt;
  opt.dyadic = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(rng, opt);
    const auto s = truncation_split(f, 0.375);
    for (int n : {2, 3}) {
      const auto h = op_H(f, n), h1 = op_H(s.f1, n), h2 = op_H(s.f2, n);
      for (double t : {0.125, 0.25, 0.5, 0.75}) CHECK(h.eval(t) == doctest::Approx(h1.eval(t) + h2.eval(t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: power-weighted tail integral is bounded on Y with a refinement-stable constant") {
  for (const auto& Y : {SpaceSpec::lebesgue(2), SpaceSpec::lorentz(2, 1), SpaceSpec::lorentz_zygmund(kInf, 2, -1)}) {
    INFO(Y.to_string());
    std::vector<double> best;
    for (int N : {16, 32}) {
      std::mt19937_64 rng(77);
      double worst = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const auto f = rearrangement(random_grid(rng, 2, N));
        worst = std::max(worst, norm(Y, op_beta(f, -0.5)) / norm(Y, f));
      }
      best.push_back(worst);
    }
    CHECK(std::isfinite(best[0]));
    CHECK(std::fabs(best[1] / best[0] - 1) < 0.10);
  }
}
