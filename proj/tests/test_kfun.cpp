#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rinorm/kfun.hpp"
#include "rinorm/mixed.hpp"
#include "rinorm/random.hpp"

using namespace rinorm;

TEST_CASE("exact K for (L1, Linf)") {
  for (double t : {0.1, 0.3, 0.8, 2.0}) {
    CHECK(k_exact_L1_Linf(PWDecreasing::indicator(0.4), t) == doctest::Approx(std::min(t, 0.4)).epsilon(1e-15));
    CHECK(k_exact_L1_Linf(PWDecreasing::constant(2.5), t) == doctest::Approx(2.5 * std::min(t, 1.0)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(k_exact_L1_Linf(PWDecreasing::constant(1.0), 0.0), PreconditionError);
}

TEST_CASE("brute-force oracle reproduces the exact formula") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_step(rng);
    for (int k = 1; k <= 10; ++k) {
      const double t = k / 10.0 - 0.05;
      CHECK(k_bruteforce(f, 1, 1, t) == doctest::Approx(k_exact_L1_Linf(f, t)).epsilon(1e-12));
    }
  }
  const auto chi = PWDecreasing::indicator(0.3);
  CHECK(k_bruteforce(chi, 1, 1, 0.2) == doctest::Approx(0.2));
  // large t: the c = 0 branch gives the full norm
  const auto f = PWDecreasing({0, 0.1, 0.5, 1}, {3, 1, 0.5});
  CHECK(k_bruteforce(f, 2, 1, 50.0) == doctest::Approx(norm(SpaceSpec::lorentz(2, 1), f)).epsilon(1e-10));
  std::vector<double> b{0.0}, v;
  for (int i = 1; i <= 201; ++i) {
    b.push_back(i / 201.0);
    v.push_back(202.0 - i);
  }
  CHECK_THROWS_AS(k_bruteforce(PWDecreasing(b, v), 2, 2, 0.5), PreconditionError);
}

TEST_CASE("Holmstedt formula") {
  std::mt19937_64 rng(4);
  const auto f = random_step(rng);
  for (double t : {0.05, 0.4, 0.9}) CHECK(k_holmstedt(f, 1, 1, t) == k_exact_L1_Linf(f, t));
  for (double t : {0.1, 0.5, 0.95})
    CHECK(k_holmstedt(PWDecreasing::constant(1.0), 2, 2, t) == doctest::Approx(t).epsilon(1e-12));
  CHECK_THROWS_AS(k_holmstedt(f, 0.5, 1, 0.5), PreconditionError);
  CHECK_THROWS_AS(k_holmstedt(f, 2, kInf, 0.5), PreconditionError);
  // comparator band against the truncation oracle for (L2, Linf)
  double lo = kInf, hi = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_step(rng);
    for (double t = 0.05; t <= 0.9; t += 0.05) {
      const double r = k_holmstedt(g, 2, 2, t) / k_bruteforce(g, 2, 2, t);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  CHECK(lo > 0.3);
  CHECK(hi < 3.0);
}

TEST_CASE("Sobolev pair") {
  CHECK(k_sobolev_pair(PWDecreasing::zero(), 1, 1, 2, 1, 0.4) == 0.0);
  const double a = 0.3;
  for (double t : {0.1, 0.4, 0.6, 0.9}) {
    const double want = std::min(t * t, a) + t * 2 * (std::sqrt(a) - std::min(t, std::sqrt(a)));
    CHECK(k_sobolev_pair(PWDecreasing::indicator(a), 1, 1, 2, 1, t) == doctest::Approx(want).epsilon(1e-12));
  }
  // p0 = q0 = 1, p1 = n, q1 = 1 is the expression in the reduction proof with C = 1
  std::mt19937_64 rng(5);
  const auto f = random_step(rng);
  const double np = 1.5, t = 0.37;
  const double cut = std::pow(t, np);
  const double tail = tail_integral(f, -1 / np).eval(cut);
  CHECK(k_sobolev_pair(f, 1, 1, 3, 1, t) == doctest::Approx(f.primitive(cut) + t * tail).epsilon(1e-12));
  CHECK_THROWS_AS(k_sobolev_pair(f, 2, 1, 1.5, 1, t), PreconditionError);
}

TEST_CASE("mixed K against the argument phi_X(t)") {
  const GridFunction c(2, 4, std::vector<double>(16, 1.5));
  for (const auto& X : {SpaceSpec::lebesgue(1), SpaceSpec::lorentz(2, 1)}) {
    for (double t : {0.1, 0.5}) {
      const auto k = k_mixed_Linf(c, X, t);
      CHECK(k.argument == doctest::Approx(fundamental_function(X, t)));
      CHECK(k.value == doctest::Approx(2 * 1.5 * fundamental_function(X, t)).epsilon(1e-12));
    }
    std::mt19937_64 rng(6);
    const auto g = random_grid(rng, 2, 8);
    CHECK(k_mixed_Linf(g, X, 1 - 1e-12).value == doctest::Approx(mixed_norm(g, X).total).epsilon(1e-9));
  }
}

TEST_CASE("property: K-curves are nondecreasing and concave") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_step(rng);
    for (auto [m, p, q] : {std::tuple{KMethod::exact, 1.0, 1.0}, {KMethod::bruteforce, 1.0, 1.0},
                           {KMethod::bruteforce, 2.0, 2.0}, {KMethod::bruteforce, 2.0, 1.0}}) {
      const auto k = make_kcurve(f, m, p, q);
      const auto s = check_k_shape(k.eval, 0.01, 1.5, 32);
      CHECK(s.nondecreasing);
      CHECK(s.concave);
    }
    // Holmstedt's formula is an equivalent expression, not the K-functional itself: monotone only
    CHECK(check_k_shape(make_kcurve(f, KMethod::holmstedt, 2, 2).eval, 0.01, 1.5, 32).nondecreasing);
    const auto g = random_grid(rng, 2, 8);
    const auto sec = mixed_norm(g, SpaceSpec::lebesgue(1));
    const auto sm = check_k_shape([&](double t) { return k_mixed_Linf(sec, SpaceSpec::lebesgue(1), t).value; },
                                  0.01, 0.99, 32);
    CHECK(sm.nondecreasing);
    CHECK(sm.concave);
  }
}

TEST_CASE("Holmstedt expression can be slightly convex") {
  // f = 1 on (0,1/4), 0.1 after; (L2, Linf): the t^2 cut makes a kink that bends upward
  const PWDecreasing f({0, 0.25, 1}, {1.0, 0.1});
  const auto s = check_k_shape([&](double t) { return k_holmstedt(f, 2, 2, t); }, 0.3, 0.9, 32);
  CHECK(s.nondecreasing);
  CHECK_FALSE(s.concave);
}

TEST_CASE("property: dilation by 1/2 does not increase K on (L1, Linf)") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(rng);
    const auto e = f.dilated(0.5);
    for (double t = 0.02; t < 2; t += 0.07) CHECK(k_exact_L1_Linf(e, t) <= k_exact_L1_Linf(f, t));
  }
}
