#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace rinorm {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  return {rk * h, std::fabs((rk - rg) * h)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7-15 on [a,b], global bisection of the worst interval.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                              double abs_tol = 0.0, int max_intervals = 4000) {
  if (!(b > a)) return {};
  struct Seg {
    double a, b;
    QuadResult r;
    bool operator<(const Seg& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Seg> heap;
  auto first = detail::gk15(f, a, b);
  heap.push({a, b, first});
  double total = first.value, err = first.error;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::fabs(total)) && count < max_intervals) {
    Seg s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      heap.push(s);
      break;
    }
    auto l = detail::gk15(f, s.a, m);
    auto r = detail::gk15(f, m, s.b);
    total += l.value + r.value - s.r.value;
    err += l.error + r.error - s.r.error;
    heap.push({s.a, m, l});
    heap.push({m, s.b, r});
    count += 1;
  }
  // recompute sums to shed accumulated rounding
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().r.value;
    e += heap.top().r.error;
    heap.pop();
  }
  return {v, e};
}

}  // namespace rinorm
