#include "rinorm/witness.hpp"

#include <algorithm>
#include <cmath>

#include "rinorm/special.hpp"

namespace rinorm {

double witness_omega(int n) {
  if (n < 2) throw PreconditionError("witness: n must be >= 2");
  return std::pow(unit_ball_volume(n - 1), conjugate_dim(n));
}

SobolevWitness make_sobolev_witness(const PWDecreasing& fstar, double r, int n) {
  if (!(r > 0 && r < 0.5)) throw PreconditionError("witness: need 0 < r < 1/2");
  const double omega = witness_omega(n);
  const double cap = omega * std::pow(r, n);
  if (fstar.support() > cap * (1 + 1e-12))
    throw PreconditionError("witness: support of f* exceeds the ball measure; apply truncation_split first");
  if (fstar.head() && fstar.head()->term.has_log())
    throw PreconditionError("witness: log-type heads are not supported");
  SobolevWitness w{fstar, tail_integral(fstar, -1.0 / conjugate_dim(n)),
                   fstar.scaled(n * std::pow(omega, 1.0 / n)), r, n, omega};
  return w;
}

Curve SobolevWitness::u_star() const {
  // |{ω|x|^n < m}| = ω_n m / ω
  return profile.rescaled(omega / unit_ball_volume(n));
}

PWDecreasing SobolevWitness::grad_star() const { return grad_profile.dilated(unit_ball_volume(n) / omega); }

Curve SobolevWitness::psi_star() const {
  // sections peak on the axis through the centre: ψ(x̂) = P(ω|x̂|^n), and
  // |{x̂ : ω|x̂|^n < m^{n'}}| in R^{n-1} equals m exactly for this ω
  return profile.rescaled(omega / witness_omega(n)).warped(conjugate_dim(n));
}

double SobolevWitness::mixed_norm(const SpaceSpec& X) const { return n * norm(X, psi_star()); }

double SobolevWitness::sobolev_norm(const SpaceSpec& Z) const {
  return norm(Z, u_star()) + norm(Z, grad_star());
}

double SobolevWitness::value_at_radius(double rho) const {
  const double m = omega * std::pow(rho, n);
  if (m >= 1.0) return 0.0;
  if (m <= 0.0) {
    const auto& p = profile.pieces().front();
    if (p.is_infinite() || !p.terms.empty()) {
      for (const auto& t : p.terms)
        if (t.power < 0 && t.coef > 0) return kInf;
    }
    double v = p.constant;
    for (const auto& t : p.terms)
      if (t.power == 0 && !t.has_log()) v += t.coef;
    return v;
  }
  return profile.eval(m);
}

GridFunction SobolevWitness::sample(int N) const {
  if (N < 1) throw PreconditionError("sample: N must be >= 1");
  const std::size_t M = static_cast<std::size_t>(std::pow(static_cast<double>(N), n));
  std::vector<double> vals(M);
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < M; ++c) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = (idx[k] + 0.5) / N - 0.5;
      r2 += d * d;
    }
    const double v = value_at_radius(std::sqrt(r2));
    if (!std::isfinite(v)) throw PreconditionError("sample: witness is infinite at a cell centre");
    vals[c] = v;
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < N) break;
      idx[k] = 0;
    }
  }
  return GridFunction(n, N, std::move(vals));
}

// ---- truncation split ----

Split truncation_split(const PWDecreasing& f, double m0) {
  if (!(m0 > 0 && m0 < 1)) throw PreconditionError("truncation_split: need 0 < m0 < 1");
  const bool in_head = f.head() && m0 < f.breakpoints()[1];
  const double c = in_head ? f.head()->eval(m0) : f.eval(m0);
  std::vector<double> b = f.breakpoints();
  std::vector<double> v = f.values();
  // a head reaching past m0 is cut there so the shifted head stays nonnegative
  if (in_head) {
    b.insert(b.begin() + 1, m0);
    v.insert(v.begin() + 1, c);
  }
  std::vector<double> v1(v.size()), v2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v1[i] = v[i] > c ? v[i] - c : 0.0;
    v2[i] = std::min(v[i], c);
  }
  Split s{PWDecreasing::zero(), PWDecreasing::zero(), c};
  if (f.head()) {
    Head h = *f.head();
    h.shift -= c;
    s.f1 = PWDecreasing(b, v1, h);
  } else {
    s.f1 = PWDecreasing(b, v1);
  }
  s.f2 = PWDecreasing(b, v2);
  return s;
}

GridSplit truncation_split(const GridFunction& f, double m0) {
  if (!(m0 > 0 && m0 < 1)) throw PreconditionError("truncation_split: need 0 < m0 < 1");
  const double c = rearrangement(f).eval(m0);
  std::vector<double> a(f.size()), d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.at(i), ax = std::fabs(x);
    a[i] = std::copysign(ax > c ? ax - c : 0.0, x);
    d[i] = std::copysign(std::min(ax, c), x);
  }
  return {GridFunction(f.dim(), f.cells_per_axis(), std::move(a)),
          GridFunction(f.dim(), f.cells_per_axis(), std::move(d)), c};
}

SlabProfile make_slab_counterexample(const PWDecreasing& gstar, double r, int n) {
  if (!gstar.unbounded())
    throw PreconditionError("slab counterexample: g* must be unbounded (a bounded g gives no counterexample)");
  return SlabProfile(gstar, r, n, n);
}

}  // namespace rinorm
