#include "rinorm/rearrange.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rinorm/special.hpp"
#include "rinorm/summation.hpp"

namespace rinorm {

GridFunction::GridFunction(int n, int N, std::vector<double> values)
    : n_(n), N_(N), values_(std::move(values)) {
  if (n < 1) throw PreconditionError("GridFunction: dimension n must be >= 1");
  if (N < 1) throw PreconditionError("GridFunction: N must be >= 1");
  const double cells = std::pow(static_cast<double>(N), n);
  if (cells > 1e9) throw PreconditionError("GridFunction: too many cells");
  if (values_.size() != static_cast<std::size_t>(cells))
    throw PreconditionError("GridFunction: expected N^n values");
  for (double v : values_)
    if (!std::isfinite(v)) throw PreconditionError("GridFunction: values must be finite");
  cell_measure_ = 1.0 / cells;
}

double distribution(const GridFunction& f, double level) {
  if (level < 0) throw PreconditionError("distribution: level must be >= 0");
  std::size_t count = 0;
  for (double v : f.values())
    if (std::fabs(v) > level) ++count;
  return static_cast<double>(count) / static_cast<double>(f.size());
}

PWDecreasing rearrange_cells(const std::vector<double>& values) {
  const std::size_t M = values.size();
  if (M == 0) throw PreconditionError("rearrange_cells: empty input");
  std::vector<double> a(M);
  std::transform(values.begin(), values.end(), a.begin(), [](double v) { return std::fabs(v); });
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<double> b{0.0}, v;
  const double Md = static_cast<double>(M);
  for (std::size_t i = 0; i < M;) {
    std::size_t j = i;
    while (j < M && a[j] == a[i]) ++j;
    v.push_back(a[i]);
    b.push_back(j == M ? 1.0 : static_cast<double>(j) / Md);
    i = j;
  }
  return PWDecreasing(std::move(b), std::move(v));
}

PWDecreasing rearrangement(const GridFunction& f) { return rearrange_cells(f.values()); }

double l1_norm(const GridFunction& f) {
  ExactSum s;
  for (double v : f.values()) s.add(std::fabs(v));
  return s.value() * f.cell_measure();
}

Pairing hardy_littlewood_pairing(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim() || f.cells_per_axis() != g.cells_per_axis())
    throw PreconditionError("hardy_littlewood_pairing: grid mismatch");
  ExactSum lhs;
  for (std::size_t i = 0; i < f.size(); ++i) lhs.add(std::fabs(f.at(i) * g.at(i)));
  // ∫ f* g* for two rearrangements on the same cell lattice: pair the sorted values
  std::vector<double> a(f.size()), c(g.size());
  std::transform(f.values().begin(), f.values().end(), a.begin(), [](double v) { return std::fabs(v); });
  std::transform(g.values().begin(), g.values().end(), c.begin(), [](double v) { return std::fabs(v); });
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(c.begin(), c.end(), std::greater<>());
  ExactSum rhs;
  for (std::size_t i = 0; i < a.size(); ++i) rhs.add(a[i] * c[i]);
  return {lhs.value() * f.cell_measure(), rhs.value() * f.cell_measure()};
}

// ---- radial ----

namespace {

// value of a step function at measure coordinate s >= 0 (0 beyond 1)
double step_at(const PWDecreasing& h, double s) {
  if (s >= 1.0) return 0.0;
  if (s <= 0.0) return h.unbounded() ? kInf : h.values().front();
  return h.eval(s);
}

// distance range from c=1/2 to the cell [j/N, (j+1)/N] along one axis
std::pair<double, double> axis_distance(int j, int N) {
  const double lo = static_cast<double>(j) / N - 0.5;
  const double hi = static_cast<double>(j + 1) / N - 0.5;
  const double far = std::max(std::fabs(lo), std::fabs(hi));
  const double near = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
  return {near, far};
}

double pick(std::pair<double, double> nf, double center, CellSampling mode) {
  switch (mode) {
    case CellSampling::nearest: return nf.first;
    case CellSampling::farthest: return nf.second;
    default: return center;
  }
}

}  // namespace

RadialProfile::RadialProfile(PWDecreasing h_, int n_, double omega_)
    : h(std::move(h_)), n(n_), omega(omega_) {
  if (n < 1) throw PreconditionError("RadialProfile: n must be >= 1");
  if (!(omega > 0) || !std::isfinite(omega)) throw PreconditionError("RadialProfile: omega must be > 0");
  if (support_radius() > 0.5 * (1 + 1e-12))
    throw PreconditionError("RadialProfile: support ball must stay inside the cube (radius <= 1/2)");
}

double RadialProfile::support_radius() const { return std::pow(h.support() / omega, 1.0 / n); }

double RadialProfile::value_at_radius(double rho) const { return step_at(h, omega * std::pow(rho, n)); }

PWDecreasing RadialProfile::rearrangement_exact() const {
  // |{ω|x|^n < s}| = ω_n (s/ω): so g*(μ) = h(ω μ / ω_n)
  return h.dilated(unit_ball_volume(n) / omega);
}

GridFunction RadialProfile::sample(int N, CellSampling mode) const {
  if (N < 1) throw PreconditionError("sample: N must be >= 1");
  std::vector<std::pair<double, double>> nf(N);
  std::vector<double> center(N);
  for (int j = 0; j < N; ++j) {
    nf[j] = axis_distance(j, N);
    center[j] = (j + 0.5) / N - 0.5;
  }
  const std::size_t M = static_cast<std::size_t>(std::pow(static_cast<double>(N), n));
  std::vector<double> vals(M);
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < M; ++c) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = pick(nf[idx[k]], std::fabs(center[idx[k]]), mode);
      r2 += d * d;
    }
    const double v = value_at_radius(std::sqrt(r2));
    if (!std::isfinite(v)) throw PreconditionError("sample: profile is infinite on a cell; use another mode");
    vals[c] = v;
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < N) break;
      idx[k] = 0;
    }
  }
  return GridFunction(n, N, std::move(vals));
}

// ---- slab ----

SlabProfile::SlabProfile(PWDecreasing g_, double r_, int axis_, int n_)
    : g(std::move(g_)), r(r_), axis(axis_), n(n_) {
  if (!(r > 0 && r < 0.5)) throw PreconditionError("SlabProfile: need 0 < r < 1/2");
  if (n < 1 || axis < 1 || axis > n) throw PreconditionError("SlabProfile: axis out of range");
}

double SlabProfile::value_at_distance(double d) const {
  if (d >= r) return 0.0;
  return step_at(g, 2.0 * d);
}

PWDecreasing SlabProfile::rearrangement_exact() const {
  return g.truncated(std::min(2.0 * r, g.support()));
}

std::vector<double> SlabProfile::sample_layers(int N, CellSampling mode) const {
  if (N < 1) throw PreconditionError("sample: N must be >= 1");
  std::vector<double> out(N);
  for (int j = 0; j < N; ++j) {
    const double v = value_at_distance(pick(axis_distance(j, N), std::fabs((j + 0.5) / N - 0.5), mode));
    if (!std::isfinite(v)) throw PreconditionError("sample: profile is infinite on a cell; use another mode");
    out[j] = v;
  }
  return out;
}

GridFunction SlabProfile::sample(int N, CellSampling mode) const {
  const auto layers = sample_layers(N, mode);
  const std::size_t M = static_cast<std::size_t>(std::pow(static_cast<double>(N), n));
  // stride of the slab axis in row-major order
  std::size_t stride = 1;
  for (int k = n; k > axis; --k) stride *= static_cast<std::size_t>(N);
  std::vector<double> vals(M);
  for (std::size_t c = 0; c < M; ++c) vals[c] = layers[(c / stride) % static_cast<std::size_t>(N)];
  return GridFunction(n, N, std::move(vals));
}

PWDecreasing rearrangement_exact(const RadialProfile& p) { return p.rearrangement_exact(); }
PWDecreasing rearrangement_exact(const SlabProfile& p) { return p.rearrangement_exact(); }

// ---- IO ----

GridFunction read_grid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw PreconditionError("grid file: missing JSON header line");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const std::exception&) {
    throw PreconditionError("grid file: header is not valid JSON");
  }
  if (!h.contains("n") || !h["n"].is_number_integer()) throw PreconditionError("grid file: field 'n' missing");
  if (!h.contains("N") || !h["N"].is_number_integer()) throw PreconditionError("grid file: field 'N' missing");
  const int n = h["n"].get<int>();
  const int N = h["N"].get<int>();
  if (n < 1 || N < 1) throw PreconditionError("grid file: field 'n'/'N' out of range");
  const std::string format = h.value("format", std::string("csv"));
  const std::size_t M = static_cast<std::size_t>(std::pow(static_cast<double>(N), n));
  std::vector<double> vals;
  vals.reserve(M);
  if (format == "f64le") {
    std::vector<unsigned char> buf(M * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) throw PreconditionError("grid file: truncated data");
    for (std::size_t i = 0; i < M; ++i) {
      std::uint64_t bits = 0;
      for (int b = 7; b >= 0; --b) bits = (bits << 8) | buf[i * 8 + b];
      vals.push_back(std::bit_cast<double>(bits));
    }
  } else if (format == "csv") {
    std::string tok;
    while (vals.size() < M && in >> std::ws && std::getline(in, tok, ',')) {
      std::istringstream ls(tok);
      std::string piece;
      while (ls >> piece) {
        try {
          std::size_t used = 0;
          vals.push_back(std::stod(piece, &used));
        } catch (const std::exception&) {
          throw PreconditionError("grid file: bad number '" + piece + "'");
        }
      }
    }
    if (vals.size() != M) throw PreconditionError("grid file: expected N^n values");
  } else {
    throw PreconditionError("grid file: unknown format '" + format + "'");
  }
  return GridFunction(n, N, std::move(vals));
}

void write_grid(std::ostream& out, const GridFunction& f, bool binary) {
  nlohmann::json h{{"n", f.dim()}, {"N", f.cells_per_axis()}, {"format", binary ? "f64le" : "csv"}};
  out << h.dump() << '\n';
  if (binary) {
    for (double v : f.values()) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      char bytes[8];
      for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      out.write(bytes, 8);
    }
  } else {
    char buf[32];
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", f.at(i));
      out << buf << ((i + 1) % static_cast<std::size_t>(f.cells_per_axis()) == 0 ? "\n" : ",");
    }
  }
}

}  // namespace rinorm
