#include "rinorm/mixed.hpp"

#include <cmath>
#include <future>

#include "rinorm/special.hpp"

namespace rinorm {

namespace {

template <class Reduce>
GridFunction section(const GridFunction& f, int k, Reduce&& reduce) {
  const int n = f.dim();
  if (n < 2) throw PreconditionError("psi_k: need dimension >= 2");
  if (k < 1 || k > n) throw PreconditionError("psi_k: axis out of range");
  const std::size_t N = static_cast<std::size_t>(f.cells_per_axis());
  std::size_t inner = 1;  // stride of axis k
  for (int j = n; j > k; --j) inner *= N;
  const std::size_t outer = f.size() / (inner * N);
  std::vector<double> out(outer * inner);
  std::vector<double> line(N);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * inner * N + i;
      for (std::size_t j = 0; j < N; ++j) line[j] = f.at(base + j * inner);
      out[o * inner + i] = reduce(line);
    }
  return GridFunction(n - 1, f.cells_per_axis(), std::move(out));
}

MixedNormResult finish(std::vector<PWDecreasing> rs, const SpaceSpec& X) {
  MixedNormResult r;
  for (const auto& p : rs) r.per_axis.push_back(norm(X, p));
  for (double v : r.per_axis) r.total += v;
  r.psi_rearrangements = std::move(rs);
  return r;
}

}  // namespace

GridFunction psi_k(const GridFunction& f, int k) {
  return section(f, k, [](const std::vector<double>& line) {
    double m = 0.0;
    for (double v : line) m = std::max(m, std::fabs(v));
    return m;
  });
}

GridFunction psi_k_Lq(const GridFunction& f, int k, double q) {
  if (!(q >= 1.0)) throw PreconditionError("psi_k_Lq: need q >= 1");
  if (q == kInf) return psi_k(f, k);
  const double h = 1.0 / f.cells_per_axis();
  return section(f, k, [q, h](const std::vector<double>& line) {
    double s = 0.0;
    for (double v : line) s += std::pow(std::fabs(v), q);
    return std::pow(s * h, 1.0 / q);
  });
}

MixedNormResult mixed_norm(const GridFunction& f, const SpaceSpec& X) {
  const int n = f.dim();
  // axes are independent; results are collected in axis order
  std::vector<std::future<PWDecreasing>> jobs;
  for (int k = 1; k <= n; ++k)
    jobs.push_back(std::async(std::launch::async, [&f, k] { return rearrangement(psi_k(f, k)); }));
  std::vector<PWDecreasing> rs;
  for (auto& j : jobs) rs.push_back(j.get());
  return finish(std::move(rs), X);
}

MixedNormResult mixed_norm(const SlabProfile& s, int N, const SpaceSpec& X, CellSampling mode) {
  const auto layers = s.sample_layers(N, mode);
  double top = 0.0;
  for (double v : layers) top = std::max(top, std::fabs(v));
  const auto across = rearrange_cells(layers);
  std::vector<PWDecreasing> rs;
  for (int k = 1; k <= s.n; ++k) rs.push_back(k == s.axis ? PWDecreasing::constant(top) : across);
  return finish(std::move(rs), X);
}

MixedNormResult mixed_norm_exact(const SlabProfile& s, const SpaceSpec& X) {
  const auto across = s.rearrangement_exact();
  const double top = across.values().front();
  std::vector<PWDecreasing> rs;
  for (int k = 1; k <= s.n; ++k) rs.push_back(k == s.axis ? PWDecreasing::constant(top) : across);
  return finish(std::move(rs), X);
}

double rango_norm(const PWDecreasing& f, const SpaceSpec& X, int n) {
  if (n < 2) throw PreconditionError("rango_norm: need n >= 2");
  return norm(X, f.warped(conjugate_dim(n)));
}

double rango_norm(const Curve& f, const SpaceSpec& X, int n) {
  if (n < 2) throw PreconditionError("rango_norm: need n >= 2");
  return norm(X, f.warped(conjugate_dim(n)));
}

}  // namespace rinorm
