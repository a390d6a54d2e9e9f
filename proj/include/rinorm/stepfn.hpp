#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rinorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// w(t) = scale * t^power * (1 + log(1/t))^logpow
struct WeightSpec {
  double scale = 1.0;
  double power = 0.0;
  double logpow = 0.0;

  double operator()(double t) const;
  double log_at(double x) const;  // log w(e^{-x})
  void validate() const;
};

// coef * t^power * (offset + slope*log(1/t))^logpow
struct Monomial {
  double coef = 0.0;
  double power = 0.0;
  double logpow = 0.0;
  double offset = 1.0;
  double slope = 1.0;

  double eval(double t) const;
  double eval_at(double x) const;  // at t = e^{-x}
  // log|value| at t = e^{-x}; sign written to *sign (0 for a zero value)
  double log_abs_at(double x, int* sign) const;
  bool has_log() const { return logpow != 0.0 && slope != 0.0; }
};

// Closed-form first piece of an unbounded profile: shift + term(t), term -> inf at 0+.
struct Head {
  double shift = 0.0;
  Monomial term;

  double eval(double t) const { return shift + term.eval(t); }
};

// ∫_0^t term(s) ds; +inf when not integrable at 0.
double monomial_integral_to(const Monomial& m, double t);
// log ∫_0^{e^{-x}} term, for coef > 0
double log_monomial_integral_to(const Monomial& m, double x);
// log of the running mean t^{-1}∫_0^t term at t = e^{-x}, plus power*x
double log_mean_peeled(const Monomial& m, double x);

// Nonnegative nonincreasing step function on (0,1), right-continuous.
// values()[0] == +inf marks an unbounded first piece; it may carry a Head.
class PWDecreasing {
 public:
  PWDecreasing(std::vector<double> breakpoints, std::vector<double> values);
  PWDecreasing(std::vector<double> breakpoints, std::vector<double> values, Head head);

  static PWDecreasing constant(double c);
  static PWDecreasing indicator(double a, double height = 1.0);
  static PWDecreasing zero() { return constant(0.0); }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  bool unbounded() const { return values_.front() == kInf; }
  const std::optional<Head>& head() const { return head_; }

  double eval(double t) const;
  double primitive(double t) const;
  // measure of {f > 0}
  double support() const;

  PWDecreasing scaled(double c) const;
  // E_tau f(t) = f(t/tau); mass beyond 1 dropped
  PWDecreasing dilated(double tau) const;
  // t -> f(t^gamma)
  PWDecreasing warped(double gamma) const;
  // f on (0,m), zero after
  PWDecreasing truncated(double m) const;

  std::size_t piece_index(double t) const;
  // ∫_a^b over piece i (a, b inside the piece)
  double piece_integral(std::size_t i, double a, double b) const;

 private:
  void validate();
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[i] = ∫_0^{t_i}; may be inf
  std::optional<Head> head_;
};

// ∫_0^1 f g (at most one of the two first pieces may be unbounded)
double integrate_product(const PWDecreasing& f, const PWDecreasing& g);
// ∫_0^1 |f - g| for bounded step functions
double l1_distance(const PWDecreasing& f, const PWDecreasing& g);

// One piece of a Curve: constant + Σ terms + mean_scale * M(xs*x + xo), where M is
// the running mean t^{-1}∫_0^t head of a head profile (only when mean_of is set).
struct CurvePiece {
  double constant = 0.0;
  std::vector<Monomial> terms;
  std::optional<Head> mean_of;
  double mean_scale = 1.0;
  double mean_xs = 1.0;
  double mean_xo = 0.0;

  double eval(double t) const;
  double eval_at(double x) const;
  // log(value * t^{-shift}) at t = e^{-x}; -inf for a nonpositive value.
  // Shifting by the leading power keeps the linear part out of the rounding.
  double log_value_at(double x, double shift = 0.0) const;
  // most singular power at 0 (0 for a constant piece)
  double leading_power() const;
  bool is_infinite() const { return constant == kInf; }
  bool is_zero() const { return constant == 0.0 && terms.empty() && !mean_of; }
};

// Piecewise closed-form function on (0,1).
class Curve {
 public:
  Curve(std::vector<double> breakpoints, std::vector<CurvePiece> pieces);
  static Curve from_step(const PWDecreasing& f);

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<CurvePiece>& pieces() const { return pieces_; }
  double eval(double t) const;
  std::size_t piece_index(double t) const;
  bool has_infinite_piece() const;

  Curve scaled(double c) const;
  // t -> g(t^gamma)
  Curve warped(double gamma) const;
  // t -> g(c t), zero where c t >= 1
  Curve rescaled(double c) const;
  // g on (0,m), zero after
  Curve truncated(double m) const;
  // pointwise sum on the union of breakpoints; mean pieces not supported
  Curve plus(const Curve& other) const;

 private:
  std::vector<double> breaks_;
  std::vector<CurvePiece> pieces_;
};

// f**(t) = t^{-1} ∫_0^t f
Curve maximal(const PWDecreasing& f);
Curve maximal(const Curve& g);
// t -> ∫_t^1 s^beta g(s) ds
Curve tail_integral(const PWDecreasing& f, double beta);
Curve tail_integral(const Curve& g, double beta);

struct QuadOptions {
  double rel_tol = 1e-10;
  int divergence_chunks = 60;
};

// log w(e^{-x}) = -power*x + rest(x)
struct LogWeight {
  double power = 0.0;
  std::function<double(double)> rest;
};

// ∫_lo^hi [w g]^q dt; +inf signals divergence
double integrate_weighted(const Curve& g, const WeightSpec& w, double q, double lo = 0.0,
                          double hi = 1.0, const QuadOptions& opt = {});
double integrate_weighted(const PWDecreasing& g, const WeightSpec& w, double q, double lo = 0.0,
                          double hi = 1.0, const QuadOptions& opt = {});
double integrate_weighted(const Curve& g, const LogWeight& w, double q, double lo = 0.0,
                          double hi = 1.0, const QuadOptions& opt = {});
// sup of w g over (lo, hi)
double sup_weighted(const Curve& g, const WeightSpec& w, double lo = 0.0, double hi = 1.0);

}  // namespace rinorm
