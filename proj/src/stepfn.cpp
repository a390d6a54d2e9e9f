#include "rinorm/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rinorm/quadrature.hpp"
#include "rinorm/special.hpp"
#include "rinorm/summation.hpp"

namespace rinorm {

// ---- weights and monomials ----

double WeightSpec::operator()(double t) const {
  return scale * std::pow(t, power) * std::pow(1.0 - std::log(t), logpow);
}

double WeightSpec::log_at(double x) const {
  return std::log(scale) - power * x + (logpow == 0.0 ? 0.0 : logpow * std::log1p(x));
}

void WeightSpec::validate() const {
  if (!(scale > 0) || !std::isfinite(scale)) throw PreconditionError("weight scale must be > 0");
  if (!std::isfinite(power) || !std::isfinite(logpow))
    throw PreconditionError("weight exponents must be finite");
}

namespace {

double log_base_power(double base, double logpow, int* sign) {
  if (logpow == 0.0) return 0.0;
  if (base > 0) return logpow * std::log(base);
  if (base == 0) {
    if (logpow > 0) {
      *sign = 0;
      return -kInf;
    }
    return kInf;
  }
  if (std::floor(logpow) != logpow)
    throw std::domain_error("negative log base with fractional exponent");
  if (std::fmod(std::fabs(logpow), 2.0) == 1.0) *sign = -*sign;
  return logpow * std::log(-base);
}

}  // namespace

double Monomial::eval(double t) const {
  if (coef == 0.0) return 0.0;
  double v = coef * std::pow(t, power);
  if (has_log()) v *= std::pow(offset - slope * std::log(t), logpow);
  return v;
}

double Monomial::eval_at(double x) const {
  if (coef == 0.0) return 0.0;
  double v = coef * std::exp(-power * x);
  if (has_log()) v *= std::pow(offset + slope * x, logpow);
  return v;
}

double Monomial::log_abs_at(double x, int* sign) const {
  if (coef == 0.0) {
    *sign = 0;
    return -kInf;
  }
  *sign = coef > 0 ? 1 : -1;
  double lb = has_log() ? log_base_power(offset + slope * x, logpow, sign) : 0.0;
  if (*sign == 0) return -kInf;
  return std::log(std::fabs(coef)) - power * x + lb;
}

double log_monomial_integral_to(const Monomial& m, double x) {
  if (!(m.coef > 0)) throw std::domain_error("log_monomial_integral_to: coef must be positive");
  const double lam = m.power + 1.0;
  if (!m.has_log()) {
    if (lam <= 0) return kInf;
    return std::log(m.coef) - lam * x - std::log(lam);
  }
  if (m.slope < 0) throw std::domain_error("log head with negative slope");
  const double base = m.offset + m.slope * x;
  if (lam > 0) {
    const double mu = lam / m.slope;
    return std::log(m.coef) - std::log(m.slope) + mu * m.offset - (m.logpow + 1.0) * std::log(mu) +
           log_upper_gamma(m.logpow + 1.0, mu * base);
  }
  if (lam == 0 && m.logpow < -1.0)
    return std::log(m.coef) + (m.logpow + 1.0) * std::log(base) - std::log(m.slope * (-m.logpow - 1.0));
  return kInf;
}

double log_mean_peeled(const Monomial& m, double x) {
  const double lam = m.power + 1.0;
  if (!(lam > 0)) return kInf;
  if (!m.has_log()) return std::log(m.coef / lam);
  const double mu = lam / m.slope;
  return std::log(m.coef) - std::log(m.slope) - (m.logpow + 1.0) * std::log(mu) +
         log_upper_gamma_scaled(m.logpow + 1.0, mu * (m.offset + m.slope * x));
}

double monomial_integral_to(const Monomial& m, double t) {
  if (m.coef == 0.0 || t <= 0) return 0.0;
  const double lam = m.power + 1.0;
  if (!m.has_log()) {
    if (lam <= 0) return std::copysign(kInf, m.coef);
    return m.coef * std::pow(t, lam) / lam;
  }
  Monomial pos = m;
  pos.coef = std::fabs(m.coef);
  const double l = log_monomial_integral_to(pos, -std::log(t));
  return std::copysign(std::exp(l), m.coef);
}

// ---- PWDecreasing ----

namespace {

Head normalize_head(Head h) {
  auto& m = h.term;
  if (m.logpow != 0.0 && m.slope == 0.0) {
    m.coef *= std::pow(m.offset, m.logpow);
    m.logpow = 0.0;
  }
  if (m.logpow == 0.0) {
    m.offset = 1.0;
    m.slope = 1.0;
  }
  return h;
}

}  // namespace

PWDecreasing::PWDecreasing(std::vector<double> breakpoints, std::vector<double> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  validate();
}

PWDecreasing::PWDecreasing(std::vector<double> breakpoints, std::vector<double> values, Head head)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), head_(normalize_head(head)) {
  if (!values_.empty()) values_[0] = kInf;
  validate();
}

void PWDecreasing::validate() {
  const std::size_t m = values_.size();
  if (m == 0 || breaks_.size() != m + 1)
    throw PreconditionError("PWDecreasing: need m values and m+1 breakpoints");
  if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
    throw PreconditionError("PWDecreasing: breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw PreconditionError("PWDecreasing: breakpoints must be strictly increasing (index " +
                              std::to_string(i + 1) + ")");
  for (std::size_t i = 0; i < m; ++i) {
    const double v = values_[i];
    if (std::isnan(v) || v < 0) throw PreconditionError("PWDecreasing: values must be >= 0");
    if (v == kInf && i > 0) throw PreconditionError("PWDecreasing: only the first value may be inf");
    if (i > 0 && v > values_[i - 1])
      throw PreconditionError("PWDecreasing: values must be nonincreasing (index " +
                              std::to_string(i) + ")");
  }
  if (head_) {
    const auto& h = *head_;
    const auto& t = h.term;
    if (!(t.coef > 0)) throw PreconditionError("head: coefficient must be positive");
    if (t.slope < 0) throw PreconditionError("head: log slope must be >= 0");
    const double x1 = -std::log(breaks_[1]);
    const bool blows_up = t.power < 0 || (t.power == 0 && t.has_log() && t.logpow > 0);
    if (!blows_up) throw PreconditionError("head: term must be unbounded at 0");
    if (t.has_log() && !(t.offset + t.slope * x1 > 0))
      throw PreconditionError("head: log base must stay positive");
    double slope_x = -t.power;  // d/dx log term at x1 (worst case)
    if (t.has_log() && t.logpow * t.slope < 0) slope_x += t.logpow * t.slope / (t.offset + t.slope * x1);
    if (slope_x < -1e-12) throw PreconditionError("head: profile must be nonincreasing");
    const double at_end = h.eval(breaks_[1]);
    if (at_end < 0) throw PreconditionError("head: profile must be nonnegative");
    if (m > 1 && at_end < values_[1] * (1 - 1e-12))
      throw PreconditionError("head: profile must dominate the next piece");
  }
  prefix_.assign(m + 1, 0.0);
  ExactSum acc;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0 && unbounded())
      acc.add(piece_integral(0, 0.0, breaks_[1]));
    else if (values_[i] != 0.0)
      acc.add_product(values_[i], breaks_[i + 1] - breaks_[i]);
    prefix_[i + 1] = acc.value();
  }
}

PWDecreasing PWDecreasing::constant(double c) { return PWDecreasing({0.0, 1.0}, {c}); }

PWDecreasing PWDecreasing::indicator(double a, double height) {
  if (a >= 1.0) return constant(height);
  if (a <= 0.0) return constant(0.0);
  return PWDecreasing({0.0, a, 1.0}, {height, 0.0});
}

std::size_t PWDecreasing::piece_index(double t) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::ptrdiff_t i = (it - breaks_.begin()) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(values_.size()) - 1);
  return static_cast<std::size_t>(i);
}

double PWDecreasing::piece_integral(std::size_t i, double a, double b) const {
  if (!(b > a)) return 0.0;
  if (i == 0 && head_) {
    const auto& t = head_->term;
    return head_->shift * (b - a) + (monomial_integral_to(t, b) - monomial_integral_to(t, a));
  }
  const double v = values_[i];
  if (v == 0.0) return 0.0;
  return v * (b - a);
}

double PWDecreasing::eval(double t) const {
  if (!(t > 0 && t < 1)) throw std::domain_error("eval: t must lie in (0,1)");
  const std::size_t i = piece_index(t);
  if (i == 0 && head_) return head_->eval(t);
  return values_[i];
}

double PWDecreasing::primitive(double t) const {
  if (t <= 0) return 0.0;
  if (t >= 1) return prefix_.back();
  const std::size_t i = piece_index(t);
  if (i == 0) return piece_integral(0, 0.0, t);
  return prefix_[i] + values_[i] * (t - breaks_[i]);
}

double PWDecreasing::support() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == 0.0) return breaks_[i];
  return 1.0;
}

PWDecreasing PWDecreasing::scaled(double c) const {
  if (!(c >= 0) || !std::isfinite(c)) throw PreconditionError("scaled: factor must be finite and >= 0");
  if (c == 0.0) return zero();
  std::vector<double> v = values_;
  for (auto& x : v) x *= c;
  if (head_) {
    Head h = *head_;
    h.shift *= c;
    h.term.coef *= c;
    return PWDecreasing(breaks_, std::move(v), h);
  }
  return PWDecreasing(breaks_, std::move(v));
}

namespace {

// drop pieces that collapsed to zero width (keeps the first piece)
void compact(std::vector<double>& b, std::vector<double>& v) {
  std::vector<double> nb{b.front()}, nv;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (b[i + 1] > nb.back()) {
      nb.push_back(b[i + 1]);
      nv.push_back(v[i]);
    } else if (i == 0) {
      throw std::domain_error("first piece collapsed under transformation");
    }
  }
  nb.back() = 1.0;
  b = std::move(nb);
  v = std::move(nv);
}

}  // namespace

PWDecreasing PWDecreasing::dilated(double tau) const {
  if (!(tau > 0) || !std::isfinite(tau)) throw PreconditionError("dilated: tau must be > 0");
  std::vector<double> b{0.0}, v;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double hi = breaks_[i + 1] * tau;
    v.push_back(values_[i]);
    if (hi >= 1.0) {
      b.push_back(1.0);
      break;
    }
    b.push_back(hi);
  }
  if (b.back() < 1.0) {
    if (v.back() == 0.0) {
      b.back() = 1.0;
    } else {
      b.push_back(1.0);
      v.push_back(0.0);
    }
  }
  compact(b, v);
  if (head_) {
    Head h = *head_;
    auto& t = h.term;
    t.coef *= std::pow(tau, -t.power);
    if (t.has_log()) t.offset += t.slope * std::log(tau);
    // same end value as before, up to the rounding in coef
    if (b.size() > 2) h.shift = head_->eval(breaks_[1]) - t.eval(b[1]);
    return PWDecreasing(std::move(b), std::move(v), h);
  }
  return PWDecreasing(std::move(b), std::move(v));
}

PWDecreasing PWDecreasing::warped(double gamma) const {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw PreconditionError("warped: gamma must be > 0");
  std::vector<double> b = breaks_, v = values_;
  for (auto& x : b) x = std::pow(x, 1.0 / gamma);
  b.front() = 0.0;
  b.back() = 1.0;
  compact(b, v);
  if (head_) {
    Head h = *head_;
    h.term.power *= gamma;
    h.term.slope *= gamma;
    if (b.size() > 2) h.shift = head_->eval(breaks_[1]) - h.term.eval(b[1]);
    return PWDecreasing(std::move(b), std::move(v), h);
  }
  return PWDecreasing(std::move(b), std::move(v));
}

PWDecreasing PWDecreasing::truncated(double m) const {
  if (m >= 1.0) return *this;
  if (m <= 0.0) return zero();
  std::vector<double> b{0.0}, v;
  for (std::size_t i = 0; i < values_.size() && breaks_[i] < m; ++i) {
    v.push_back(values_[i]);
    b.push_back(std::min(breaks_[i + 1], m));
  }
  if (v.back() == 0.0) {
    b.back() = 1.0;
  } else {
    b.push_back(1.0);
    v.push_back(0.0);
  }
  if (head_) return PWDecreasing(std::move(b), std::move(v), *head_);
  return PWDecreasing(std::move(b), std::move(v));
}

namespace {

template <class Fn>
void merged_walk(const PWDecreasing& f, const PWDecreasing& g, Fn&& fn) {
  const auto& bf = f.breakpoints();
  const auto& bg = g.breakpoints();
  std::size_t i = 0, j = 0;
  double a = 0.0;
  while (i < f.pieces() && j < g.pieces()) {
    const double b = std::min(bf[i + 1], bg[j + 1]);
    fn(i, j, a, b);
    a = b;
    if (bf[i + 1] == b) ++i;
    if (bg[j + 1] == b) ++j;
  }
}

bool special_piece(const PWDecreasing& f, std::size_t i) { return i == 0 && f.unbounded(); }

}  // namespace

double integrate_product(const PWDecreasing& f, const PWDecreasing& g) {
  double total = 0.0;
  merged_walk(f, g, [&](std::size_t i, std::size_t j, double a, double b) {
    const bool sf = special_piece(f, i), sg = special_piece(g, j);
    if (sf && sg) throw std::domain_error("integrate_product: both factors unbounded on a piece");
    if (sf) {
      const double c = g.values()[j];
      if (c != 0.0) total += c * f.piece_integral(i, a, b);
    } else if (sg) {
      const double c = f.values()[i];
      if (c != 0.0) total += c * g.piece_integral(j, a, b);
    } else {
      total += f.values()[i] * g.values()[j] * (b - a);
    }
  });
  return total;
}

double l1_distance(const PWDecreasing& f, const PWDecreasing& g) {
  if (f.unbounded() || g.unbounded()) throw std::domain_error("l1_distance: bounded inputs only");
  double total = 0.0;
  merged_walk(f, g, [&](std::size_t i, std::size_t j, double a, double b) {
    total += std::fabs(f.values()[i] - g.values()[j]) * (b - a);
  });
  return total;
}

// ---- Curve ----

double CurvePiece::eval_at(double x) const {
  double v = constant;
  for (const auto& m : terms) v += m.eval_at(x);
  if (mean_of) {
    const double xx = mean_xs * x + mean_xo;
    v += mean_scale * (mean_of->shift + std::exp(log_mean_peeled(mean_of->term, xx) -
                                                  mean_of->term.power * xx));
  }
  return v;
}

double CurvePiece::eval(double t) const {
  if (mean_of) return eval_at(-std::log(t));
  double v = constant;
  for (const auto& m : terms) v += m.eval(t);
  return v;
}

double CurvePiece::leading_power() const {
  double e = 0.0;
  for (const auto& m : terms) e = std::min(e, m.power);
  if (mean_of) e = std::min(e, mean_of->term.power * mean_xs);
  return e;
}

double CurvePiece::log_value_at(double x, double shift) const {
  if (constant == kInf) return kInf;
  // signed log-sum-exp
  double logs[64];
  int signs[64];
  std::size_t k = 0;
  auto push = [&](double l, int s) {
    if (s == 0 || l == -kInf) return;
    if (k == 64) throw std::length_error("CurvePiece: too many terms");
    logs[k] = l;
    signs[k] = s;
    ++k;
  };
  if (constant != 0.0) push(std::log(std::fabs(constant)) + shift * x, constant > 0 ? 1 : -1);
  for (auto m : terms) {
    int s = 0;
    m.power -= shift;
    const double l = m.log_abs_at(x, &s);
    push(l, s);
  }
  if (mean_of) {
    const double xx = mean_xs * x + mean_xo;
    const double ms = std::log(mean_scale);
    if (mean_of->shift != 0.0)
      push(ms + std::log(std::fabs(mean_of->shift)) + shift * x, mean_of->shift > 0 ? 1 : -1);
    const double e = mean_of->term.power;
    push(ms + log_mean_peeled(mean_of->term, xx) + (shift - e * mean_xs) * x - e * mean_xo, 1);
  }
  if (k == 0) return -kInf;
  double mx = -kInf;
  for (std::size_t i = 0; i < k; ++i) mx = std::max(mx, logs[i]);
  if (mx == kInf) {
    int s = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (logs[i] == kInf) s += signs[i];
    return s > 0 ? kInf : -kInf;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += signs[i] * std::exp(logs[i] - mx);
  if (!(sum > 0)) return -kInf;
  return mx + std::log(sum);
}

Curve::Curve(std::vector<double> breakpoints, std::vector<CurvePiece> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (pieces_.empty() || breaks_.size() != pieces_.size() + 1)
    throw PreconditionError("Curve: need m pieces and m+1 breakpoints");
  if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
    throw PreconditionError("Curve: breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1])) throw PreconditionError("Curve: breakpoints must increase");
}

Curve Curve::from_step(const PWDecreasing& f) {
  std::vector<CurvePiece> p(f.pieces());
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (i == 0 && f.head()) {
      p[0].constant = f.head()->shift;
      p[0].terms.push_back(f.head()->term);
    } else {
      p[i].constant = f.values()[i];
    }
  }
  return Curve(f.breakpoints(), std::move(p));
}

std::size_t Curve::piece_index(double t) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::ptrdiff_t i = (it - breaks_.begin()) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(pieces_.size()) - 1);
  return static_cast<std::size_t>(i);
}

double Curve::eval(double t) const {
  if (!(t > 0 && t < 1)) throw std::domain_error("Curve::eval: t must lie in (0,1)");
  return pieces_[piece_index(t)].eval(t);
}

bool Curve::has_infinite_piece() const {
  return std::any_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.is_infinite(); });
}

Curve Curve::scaled(double c) const {
  if (!(c >= 0) || !std::isfinite(c)) throw PreconditionError("scaled: factor must be finite and >= 0");
  std::vector<CurvePiece> p = pieces_;
  for (auto& q : p) {
    if (c == 0.0) {
      q = CurvePiece{};
      continue;
    }
    q.constant *= c;
    for (auto& m : q.terms) m.coef *= c;
    q.mean_scale *= c;
  }
  return Curve(breaks_, std::move(p));
}

Curve Curve::warped(double gamma) const {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw PreconditionError("warped: gamma must be > 0");
  std::vector<double> b{0.0};
  std::vector<CurvePiece> p;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double hi = (i + 1 == pieces_.size()) ? 1.0 : std::pow(breaks_[i + 1], 1.0 / gamma);
    if (!(hi > b.back())) {
      if (i == 0) throw std::domain_error("warped: first piece collapsed");
      continue;
    }
    CurvePiece q = pieces_[i];
    for (auto& m : q.terms) {
      m.power *= gamma;
      m.slope *= gamma;
    }
    q.mean_xs *= gamma;
    b.push_back(hi);
    p.push_back(std::move(q));
  }
  return Curve(std::move(b), std::move(p));
}

Curve Curve::rescaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) throw PreconditionError("rescaled: factor must be > 0");
  std::vector<double> b{0.0};
  std::vector<CurvePiece> p;
  const double lc = std::log(c);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    CurvePiece q = pieces_[i];
    for (auto& m : q.terms) {
      m.coef *= std::pow(c, m.power);
      if (m.has_log()) m.offset -= m.slope * lc;
    }
    q.mean_xo -= q.mean_xs * lc;
    const double hi = breaks_[i + 1] / c;
    p.push_back(std::move(q));
    if (hi >= 1.0) {
      b.push_back(1.0);
      break;
    }
    b.push_back(hi);
  }
  if (b.back() < 1.0) {
    b.push_back(1.0);
    p.emplace_back();
  }
  return Curve(std::move(b), std::move(p));
}

Curve Curve::truncated(double m) const {
  if (m >= 1.0) return *this;
  if (m <= 0.0) return Curve({0.0, 1.0}, {CurvePiece{}});
  std::vector<double> b{0.0};
  std::vector<CurvePiece> p;
  for (std::size_t i = 0; i < pieces_.size() && breaks_[i] < m; ++i) {
    p.push_back(pieces_[i]);
    b.push_back(std::min(breaks_[i + 1], m));
  }
  if (b.back() < 1.0) {
    b.push_back(1.0);
    p.emplace_back();
  }
  return Curve(std::move(b), std::move(p));
}

Curve Curve::plus(const Curve& other) const {
  std::vector<double> b{0.0};
  std::vector<CurvePiece> p;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const auto& x = pieces_[i];
    const auto& y = other.pieces_[j];
    if (x.mean_of || y.mean_of) throw std::domain_error("Curve::plus: mean pieces unsupported");
    CurvePiece s;
    s.constant = x.constant + y.constant;
    s.terms = x.terms;
    s.terms.insert(s.terms.end(), y.terms.begin(), y.terms.end());
    const double hi = std::min(breaks_[i + 1], other.breaks_[j + 1]);
    b.push_back(hi);
    p.push_back(std::move(s));
    if (breaks_[i + 1] == hi) ++i;
    if (other.breaks_[j + 1] == hi) ++j;
  }
  return Curve(std::move(b), std::move(p));
}

// ---- antiderivatives ----

namespace {

bool is_constant_term(const Monomial& m) { return m.power == 0.0 && !m.has_log(); }

// closed-form antiderivative as a list of monomials (constant terms allowed)
std::vector<Monomial> antiderivative(const Monomial& m) {
  if (m.coef == 0.0) return {};
  const double lam = m.power + 1.0;
  if (!m.has_log()) {
    if (lam != 0.0) return {Monomial{m.coef / lam, lam, 0.0, 1.0, 1.0}};
    // log s = 1 - (1 + log(1/s))
    return {Monomial{m.coef, 0.0, 0.0, 1.0, 1.0}, Monomial{-m.coef, 0.0, 1.0, 1.0, 1.0}};
  }
  if (lam == 0.0) {
    if (m.logpow == -1.0) throw std::domain_error("antiderivative: log-log term unsupported");
    return {Monomial{-m.coef / (m.slope * (m.logpow + 1.0)), 0.0, m.logpow + 1.0, m.offset, m.slope}};
  }
  if (m.logpow == 1.0)
    return {Monomial{m.coef / lam, lam, 1.0, m.offset + m.slope / lam, m.slope}};
  throw std::domain_error("antiderivative: no closed form for this log power");
}

// limit of Σ terms as t -> 0+
double limit_at_zero(const std::vector<Monomial>& terms) {
  double total = 0.0;
  for (const auto& m : terms) {
    if (m.coef == 0.0) continue;
    if (m.power > 0) continue;
    if (m.power < 0) {
      total += std::copysign(kInf, m.coef);
      continue;
    }
    if (!m.has_log()) {
      total += m.coef;
      continue;
    }
    if (m.logpow < 0) continue;
    total += std::copysign(kInf, m.coef);
  }
  return total;
}

double sum_terms(const std::vector<Monomial>& terms, double t) {
  double s = 0.0;
  for (const auto& m : terms) s += m.eval(t);
  return s;
}

// split constant monomials into `constant`
void absorb_constants(CurvePiece& p) {
  std::vector<Monomial> kept;
  for (auto& m : p.terms) {
    if (is_constant_term(m))
      p.constant += m.coef;
    else if (m.coef != 0.0)
      kept.push_back(m);
  }
  p.terms = std::move(kept);
}

Curve infinite_curve(const std::vector<double>& b) {
  std::vector<CurvePiece> p(b.size() - 1);
  for (auto& q : p) q.constant = kInf;
  return Curve(b, std::move(p));
}

}  // namespace

Curve maximal(const PWDecreasing& f) {
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  if (!std::isfinite(f.primitive(b[1]))) return infinite_curve(b);
  std::vector<CurvePiece> p(f.pieces());
  if (f.head()) {
    const auto& h = *f.head();
    if (!h.term.has_log()) {
      p[0].constant = h.shift;
      p[0].terms.push_back(Monomial{h.term.coef / (h.term.power + 1.0), h.term.power});
    } else {
      p[0].mean_of = h;
    }
  } else {
    p[0].constant = v[0];
  }
  for (std::size_t i = 1; i < f.pieces(); ++i) {
    p[i].constant = v[i];
    const double a = f.primitive(b[i]) - v[i] * b[i];
    if (a != 0.0) p[i].terms.push_back(Monomial{a, -1.0});
  }
  return Curve(b, std::move(p));
}

Curve maximal(const Curve& g) {
  const auto& b = g.breakpoints();
  std::vector<CurvePiece> out(g.pieces().size());
  double F = 0.0;  // ∫_0^{b_i} g
  for (std::size_t i = 0; i < g.pieces().size(); ++i) {
    const auto& piece = g.pieces()[i];
    if (piece.is_infinite()) return infinite_curve(b);
    if (piece.mean_of) throw std::domain_error("maximal: mean pieces unsupported");
    std::vector<Monomial> phi;
    if (piece.constant != 0.0) phi.push_back(Monomial{piece.constant, 1.0});
    for (const auto& m : piece.terms) {
      auto a = antiderivative(m);
      phi.insert(phi.end(), a.begin(), a.end());
    }
    double phi_lo;
    if (i == 0) {
      phi_lo = limit_at_zero(phi);
      if (!std::isfinite(phi_lo)) return infinite_curve(b);
    } else {
      phi_lo = sum_terms(phi, b[i]);
    }
    // F(t) = F + Φ(t) - Φ(lo); divide by t
    CurvePiece q;
    const double c = F - phi_lo;
    if (c != 0.0) q.terms.push_back(Monomial{c, -1.0});
    for (auto m : phi) {
      m.power -= 1.0;
      q.terms.push_back(m);
    }
    absorb_constants(q);
    out[i] = std::move(q);
    F += sum_terms(phi, b[i + 1]) - phi_lo;
  }
  return Curve(b, std::move(out));
}

Curve tail_integral(const Curve& g, double beta) {
  const auto& b = g.breakpoints();
  const std::size_t m = g.pieces().size();
  std::vector<CurvePiece> out(m);
  double G = 0.0;  // ∫_{b_{i+1}}^1
  for (std::size_t k = m; k-- > 0;) {
    const auto& piece = g.pieces()[k];
    if (piece.mean_of) throw std::domain_error("tail_integral: mean pieces unsupported");
    if (piece.is_infinite() || !std::isfinite(G)) {
      for (std::size_t j = 0; j <= k; ++j) out[j].constant = kInf;
      break;
    }
    std::vector<Monomial> phi;
    if (piece.constant != 0.0) {
      auto a = antiderivative(Monomial{piece.constant, beta});
      phi.insert(phi.end(), a.begin(), a.end());
    }
    for (auto m2 : piece.terms) {
      m2.power += beta;
      auto a = antiderivative(m2);
      phi.insert(phi.end(), a.begin(), a.end());
    }
    CurvePiece q;
    q.constant = G + sum_terms(phi, b[k + 1]);
    for (auto t : phi) {
      t.coef = -t.coef;
      q.terms.push_back(t);
    }
    absorb_constants(q);
    out[k] = std::move(q);
    if (k > 0) G = out[k].eval(b[k]);
  }
  return Curve(b, std::move(out));
}

Curve tail_integral(const PWDecreasing& f, double beta) { return tail_integral(Curve::from_step(f), beta); }

// ---- weighted quadrature ----

namespace {

// closed form of ∫_a^b K t^s (1+log 1/t)^r dt
std::optional<double> power_log_integral(double K, double s, double r, double a, double b) {
  if (K == 0.0) return 0.0;
  const double lam = s + 1.0;
  if (r == 0.0) {
    if (lam == 0.0) return a == 0.0 ? kInf : K * std::log(b / a);
    if (a == 0.0) return lam > 0 ? std::optional<double>(K * std::pow(b, lam) / lam) : kInf;
    return -K * std::pow(b, lam) * std::expm1(lam * std::log(a / b)) / lam;
  }
  if (lam == 0.0) {
    const double Lb = 1.0 - std::log(b);
    if (a == 0.0) {
      if (r + 1.0 < 0) return K * std::pow(Lb, r + 1.0) / (-(r + 1.0));
      return kInf;
    }
    const double La = 1.0 - std::log(a);
    if (r == -1.0) return K * std::log(La / Lb);
    return K * (std::pow(La, r + 1.0) - std::pow(Lb, r + 1.0)) / (r + 1.0);
  }
  if (a == 0.0) {
    if (lam < 0) return kInf;
    const double Lb = 1.0 - std::log(b);
    return K * std::exp(lam - (r + 1.0) * std::log(lam) + log_upper_gamma(r + 1.0, lam * Lb));
  }
  return std::nullopt;
}

std::optional<double> closed_form_piece(const CurvePiece& p, const WeightSpec& w, double q, double a,
                                        double b) {
  if (p.mean_of) return std::nullopt;
  Monomial g;
  if (p.terms.empty()) {
    g = Monomial{p.constant, 0.0};
  } else if (p.terms.size() == 1 && p.constant == 0.0) {
    g = p.terms.front();
  } else {
    return std::nullopt;
  }
  if (g.coef < 0) return std::nullopt;
  double r = q * w.logpow;
  if (g.has_log()) {
    if (g.offset != 1.0 || g.slope != 1.0) return std::nullopt;
    r += q * g.logpow;
  }
  const double s = q * (w.power + g.power);
  const double K = std::pow(w.scale * g.coef, q);
  return power_log_integral(K, s, r, a, b);
}

double finite_piece_numeric(const CurvePiece& p, const LogWeight& w, double q, double a, double b,
                            const QuadOptions& opt) {
  const double xlo = -std::log(b), xhi = -std::log(a);
  const double e = p.leading_power();
  const double rate = q * (w.power + e) + 1.0;
  auto h = [&](double x) {
    const double lv = p.log_value_at(x, e);
    if (lv == -kInf) return 0.0;
    return std::exp(q * (w.rest(x) + lv) - rate * x);
  };
  return integrate_adaptive(h, xlo, xhi, opt.rel_tol).value;
}

double zero_piece_numeric(const CurvePiece& p, const LogWeight& w, double q, double b,
                          const QuadOptions& opt) {
  const double x0 = -std::log(b);
  const double y0 = std::log1p(x0);
  const double step = std::numbers::ln2;
  const double e = p.leading_power();
  const double rate = q * (w.power + e) + 1.0;
  auto h = [&](double y) {
    const double x = std::expm1(y);
    const double lv = p.log_value_at(x, e);
    if (lv == -kInf) return 0.0;
    return std::exp(q * (w.rest(x) + lv) - rate * x + y);
  };
  double total = 0.0, prev = 0.0;
  int fails = 0, zeros = 0;
  for (int k = 0; k < 4000; ++k) {
    const double lo = y0 + k * step;
    const double c = integrate_adaptive(h, lo, lo + step, opt.rel_tol * 0.1, 1e-3 * opt.rel_tol * total).value;
    if (!std::isfinite(c)) return kInf;
    total += c;
    if (c == 0.0) {
      if (++zeros >= 3) return total;
      prev = c;
      continue;
    }
    zeros = 0;
    if (k > 0 && prev > 0) {
      const double ratio = c / prev;
      if (ratio <= 0.9) {
        fails = 0;
        const double tail = c * ratio / (1.0 - ratio);
        if (tail <= opt.rel_tol * total) return total + tail;
      } else if (++fails >= opt.divergence_chunks) {
        return kInf;
      }
    }
    prev = c;
    if (!std::isfinite(total)) return kInf;
  }
  return kInf;
}

void check_q(double q) {
  if (std::isnan(q) || q < 1.0) throw PreconditionError("exponent q must be >= 1");
  if (q == kInf) throw PreconditionError("q = inf: use sup_weighted");
}

template <class Closed>
double integrate_pieces(const Curve& g, const LogWeight& lw, double q, double lo, double hi,
                        const QuadOptions& opt, Closed&& closed) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw PreconditionError("interval must lie in [0,1]");
  if (lo == hi) return 0.0;
  const auto& b = g.breakpoints();
  double total = 0.0;
  for (std::size_t i = 0; i < g.pieces().size(); ++i) {
    const double a = std::max(lo, b[i]), c = std::min(hi, b[i + 1]);
    if (!(c > a)) continue;
    const auto& p = g.pieces()[i];
    if (p.is_zero()) continue;
    if (p.is_infinite()) return kInf;
    double v;
    if (auto cf = closed(p, a, c))
      v = *cf;
    else if (a == 0.0)
      v = zero_piece_numeric(p, lw, q, c, opt);
    else
      v = finite_piece_numeric(p, lw, q, a, c, opt);
    if (!std::isfinite(v)) return kInf;
    total += v;
  }
  return total;
}

}  // namespace

double integrate_weighted(const Curve& g, const WeightSpec& w, double q, double lo, double hi,
                          const QuadOptions& opt) {
  check_q(q);
  w.validate();
  LogWeight lw{w.power, [w](double x) { return std::log(w.scale) + (w.logpow == 0.0 ? 0.0 : w.logpow * std::log1p(x)); }};
  return integrate_pieces(g, lw, q, lo, hi, opt, [&](const CurvePiece& p, double a, double c) {
    return closed_form_piece(p, w, q, a, c);
  });
}

double integrate_weighted(const PWDecreasing& g, const WeightSpec& w, double q, double lo, double hi,
                          const QuadOptions& opt) {
  return integrate_weighted(Curve::from_step(g), w, q, lo, hi, opt);
}

double integrate_weighted(const Curve& g, const LogWeight& w, double q, double lo, double hi,
                          const QuadOptions& opt) {
  check_q(q);
  return integrate_pieces(g, w, q, lo, hi, opt,
                          [](const CurvePiece&, double, double) { return std::optional<double>{}; });
}

// ---- sup ----

namespace {

// behaviour of w g as t -> 0+ on a piece touching 0
double limit_weighted_at_zero(const CurvePiece& p, const WeightSpec& w) {
  struct Lead {
    double power, logpow, coef;
  };
  std::vector<Lead> leads;
  if (p.constant != 0.0) leads.push_back({0.0, 0.0, p.constant});
  for (const auto& m : p.terms)
    leads.push_back({m.power, m.has_log() ? m.logpow : 0.0,
                     m.coef * (m.has_log() ? std::pow(m.slope, m.logpow) : 1.0)});
  if (p.mean_of) {
    const auto& t = p.mean_of->term;
    const double lam = t.power + 1.0;
    leads.push_back({t.power * p.mean_xs, t.has_log() ? t.logpow : 0.0,
                     p.mean_scale * t.coef * (t.has_log() ? std::pow(t.slope * p.mean_xs, t.logpow) : 1.0) /
                         lam});
  }
  if (leads.empty()) return 0.0;
  auto best = leads.front();
  for (const auto& l : leads) {
    if (l.power < best.power - 1e-14 ||
        (std::fabs(l.power - best.power) <= 1e-14 && l.logpow > best.logpow))
      best = l;
  }
  if (best.coef <= 0) return 0.0;
  const double E = w.power + best.power;
  const double L = w.logpow + best.logpow;
  if (E < -1e-14) return kInf;
  if (E > 1e-14) return 0.0;
  if (L > 1e-14) return kInf;
  if (L < -1e-14) return 0.0;
  return w.scale * best.coef;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double sup_weighted(const Curve& g, const WeightSpec& w, double lo, double hi) {
  w.validate();
  const auto& b = g.breakpoints();
  double best = -kInf;  // log scale
  bool any = false;
  for (std::size_t i = 0; i < g.pieces().size(); ++i) {
    const double a = std::max(lo, b[i]), c = std::min(hi, b[i + 1]);
    if (!(c > a)) continue;
    const auto& p = g.pieces()[i];
    any = true;
    if (p.is_zero()) continue;
    if (p.is_infinite()) return kInf;
    const double e = p.leading_power();
    auto L = [&](double x) {
      return -(w.power + e) * x + std::log(w.scale) + (w.logpow == 0.0 ? 0.0 : w.logpow * std::log1p(x)) +
             p.log_value_at(x, e);
    };
    std::vector<double> xs;
    const double xlo = -std::log(c);
    if (a == 0.0) {
      for (int j = 0; j <= 300; ++j) xs.push_back(xlo + std::expm1(j * 0.1));
      const double lim = limit_weighted_at_zero(p, w);
      if (lim == kInf) return kInf;
      if (lim > 0) best = std::max(best, std::log(lim));
    } else {
      const double xhi = -std::log(a);
      for (int j = 0; j <= 64; ++j) xs.push_back(xlo + (xhi - xlo) * j / 64.0);
    }
    std::size_t arg = 0;
    double mval = -kInf;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double v = L(xs[j]);
      if (v > mval) {
        mval = v;
        arg = j;
      }
    }
    if (mval == kInf) return kInf;
    best = std::max(best, mval);
    if (mval > -kInf) {
      const double l = xs[arg == 0 ? 0 : arg - 1];
      const double r = xs[std::min(arg + 1, xs.size() - 1)];
      if (r > l) best = std::max(best, golden_max(L, l, r));
    }
  }
  if (!any || best == -kInf) return 0.0;
  return std::exp(best);
}

}  // namespace rinorm
