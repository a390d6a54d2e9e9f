#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rinorm/stepfn.hpp"

namespace rinorm {

enum class SpaceKind { lorentz, lorentz_zygmund, weighted, linf };

struct SpaceSpec {
  SpaceKind kind = SpaceKind::linf;
  double p = kInf;
  double q = kInf;
  double alpha = 0.0;
  WeightSpec weight;  // WeightedLq only
  bool on_maximal = false;

  static SpaceSpec lorentz(double p, double q);
  static SpaceSpec lebesgue(double p) { return lorentz(p, p); }
  static SpaceSpec lorentz_zygmund(double p, double q, double alpha);
  static SpaceSpec weighted(WeightSpec v, double q, bool on_maximal);
  static SpaceSpec linf();

  // weight applied to f* (or f**) inside the L^q norm; for q = inf the sup weight
  WeightSpec effective_weight() const;
  std::string to_string() const;
};

// "L(p)", "L(p,q)", "LZ(p,q,a)", "Linf"; "inf" allowed for p and q
SpaceSpec parse_space(const std::string& text);

// true when t^power (1+log 1/t)^logpow is nonincreasing on (0,1)
bool weight_nonincreasing(const WeightSpec& w);

double norm(const SpaceSpec& X, const PWDecreasing& f);
double norm(const SpaceSpec& X, const Curve& g);
// ‖t^{extra} h‖ in X's L^q with X's weight, h evaluated as given (no maximal step)
double norm_with_extra_power(const SpaceSpec& X, const Curve& h, double extra);

double fundamental_function(const SpaceSpec& X, double t);
double boyd_upper(const SpaceSpec& X);

struct HypothesisReport {
  double integral_v = 0.0;            // (i) ∫_0^1 v
  double integral_tp_vp = 0.0;        // (ii) ∫_0^1 t^{-p} v^p
  double sup_ratio = 0.0;             // (iii) max over the log grid
  bool ratio_growing = false;
};

// w(t) = [(p'-1) V^{-p'} t^{-p} v^p]^{1/p'}, V(t) = 1 + ∫_t^1 s^{-p} v^p
class AssociateWeight {
 public:
  AssociateWeight(WeightSpec v, double p);

  double p() const { return p_; }
  double pprime() const { return pp_; }
  const WeightSpec& v() const { return v_; }
  const HypothesisReport& hypotheses() const { return report_; }

  double V(double t) const;
  double operator()(double t) const;
  LogWeight log_weight() const;
  // ‖w g*‖_{L^{p'}}
  double norm(const PWDecreasing& g) const;
  double norm(const Curve& g) const;

 private:
  // log V(e^{-x}) - rate_ * x
  double log_V_reduced(double x) const;
  WeightSpec v_;
  double p_, pp_;
  double s0_, r_;     // exponents of s^{-p} v^p = C^p s^{s0} L^{r}
  double rate_ = 0.0; // exponential growth rate of V in x
  HypothesisReport report_;
};

struct DualityReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;
};

using NormEvaluator = std::function<double(const PWDecreasing&)>;
DualityReport duality_pairing_check(const SpaceSpec& X, const NormEvaluator& dual_norm, int trials,
                                    std::uint64_t seed);
// same check with an arbitrary primal evaluator
DualityReport duality_pairing_check(const NormEvaluator& primal, const NormEvaluator& dual_norm,
                                    int trials, std::uint64_t seed);

}  // namespace rinorm
