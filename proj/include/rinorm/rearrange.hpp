#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rinorm/stepfn.hpp"

namespace rinorm {

// Cell-constant function on (0,1)^n, N cells per axis, row-major (last axis fastest).
class GridFunction {
 public:
  GridFunction(int n, int N, std::vector<double> values);

  int dim() const { return n_; }
  int cells_per_axis() const { return N_; }
  std::size_t size() const { return values_.size(); }
  double cell_measure() const { return cell_measure_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t i) const { return values_[i]; }

 private:
  int n_;
  int N_;
  double cell_measure_;
  std::vector<double> values_;
};

double distribution(const GridFunction& f, double level);
PWDecreasing rearrangement(const GridFunction& f);
// rearrangement of |values| on cells of equal measure 1/values.size()
PWDecreasing rearrange_cells(const std::vector<double>& values);
double l1_norm(const GridFunction& f);

struct Pairing {
  double lhs = 0.0;
  double rhs = 0.0;
};
Pairing hardy_littlewood_pairing(const GridFunction& f, const GridFunction& g);

enum class CellSampling { center, nearest, farthest };

// f(x) = h(omega |x - c|^n), c the cube center
struct RadialProfile {
  PWDecreasing h;
  int n;
  double omega;

  RadialProfile(PWDecreasing h, int n, double omega);
  double support_radius() const;
  double value_at_radius(double rho) const;
  PWDecreasing rearrangement_exact() const;
  GridFunction sample(int N, CellSampling mode = CellSampling::center) const;
};

// f(x) = g(2|x_k - 1/2|) on |x_k - 1/2| < r, zero elsewhere (axis k is 1-based)
struct SlabProfile {
  PWDecreasing g;
  double r;
  int axis;
  int n;

  SlabProfile(PWDecreasing g, double r, int axis, int n);
  double value_at_distance(double d) const;
  PWDecreasing rearrangement_exact() const;
  // one value per layer along the slab axis
  std::vector<double> sample_layers(int N, CellSampling mode = CellSampling::farthest) const;
  GridFunction sample(int N, CellSampling mode = CellSampling::farthest) const;
};

PWDecreasing rearrangement_exact(const RadialProfile& p);
PWDecreasing rearrangement_exact(const SlabProfile& p);

// header line {"n":..,"N":..,"format":"f64le"|"csv"} then the values
GridFunction read_grid(std::istream& in);
void write_grid(std::ostream& out, const GridFunction& f, bool binary);

}  // namespace rinorm
