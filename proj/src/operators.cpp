#include "rinorm/operators.hpp"

#include <cmath>

#include "rinorm/special.hpp"

namespace rinorm {

namespace {

void check_n(int n) {
  if (n < 2) throw PreconditionError("operators: dimension n must be >= 2");
}

// closed-form kernels only cover power heads
void check_head(const PWDecreasing& f) {
  if (f.head() && f.head()->term.has_log())
    throw PreconditionError("operators: log-type heads have no closed-form kernel integral");
}

}  // namespace

double WarpedDecreasing::eval(double t) const {
  if (!(t > 0 && t <= 1)) throw std::domain_error("eval: t must lie in (0,1]");
  if (t == 1.0) return base.pieces().back().eval(1.0);
  const double s = std::pow(t, warp);
  if (!(s > 0)) return at_zero();
  return base.eval(s);
}

double WarpedDecreasing::at_zero() const {
  const auto& p = base.pieces().front();
  if (p.is_infinite()) return kInf;
  double v = p.constant;
  for (const auto& m : p.terms) {
    if (m.coef == 0.0 || m.power > 0) continue;
    if (m.power < 0 || (m.has_log() && m.logpow > 0)) return std::copysign(kInf, m.coef);
    if (!m.has_log()) v += m.coef;
  }
  return v;
}

WarpedDecreasing op_H(const PWDecreasing& f, int n) {
  check_n(n);
  check_head(f);
  const double np = conjugate_dim(n);
  return {tail_integral(f, -1.0 / np), np};
}

WarpedDecreasing op_Hprime(const PWDecreasing& f, int n) {
  check_n(n);
  return {maximal(f), 1.0 / conjugate_dim(n)};
}

Curve op_beta(const Curve& f, double beta) {
  if (!(beta > -1.0)) throw PreconditionError("op_beta: need beta > -1");
  return tail_integral(f, beta);
}

Curve op_beta(const PWDecreasing& f, double beta) {
  check_head(f);
  return op_beta(Curve::from_step(f), beta);
}

double optimal_range_assoc_norm(const PWDecreasing& f, const SpaceSpec& Zdual, int n) {
  return norm(Zdual, op_Hprime(f, n).materialize());
}

double optimal_domain_norm(const PWDecreasing& f, const SpaceSpec& X, int n, bool use_star) {
  check_n(n);
  const double np = conjugate_dim(n);
  if (use_star) {
    if (!(boyd_upper(X) < 1.0))
      throw PreconditionError("optimal_domain_norm: the f* form needs upper Boyd index < 1");
    return norm(X, op_H(f, n).materialize());
  }
  check_head(f);
  return norm(X, tail_integral(maximal(f), -1.0 / np).warped(np));
}

Curve kerman_pick_transform(const PWDecreasing& f, int n) {
  check_n(n);
  return op_beta(f, 1.0 / n - 1.0);
}

double kp_optimal_range_assoc_norm(const PWDecreasing& f, const SpaceSpec& Zdual, int n) {
  check_n(n);
  if (Zdual.on_maximal)
    throw PreconditionError("kp_optimal_range_assoc_norm: the weight is folded in; Zdual must act on f* directly");
  return norm_with_extra_power(Zdual, maximal(f), 1.0 / n);
}

}  // namespace rinorm
