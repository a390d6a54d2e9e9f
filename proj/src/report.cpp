#include "rinorm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rinorm/stepfn.hpp"

namespace rinorm {

std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (v == kInf) return "\"inf\"";
  if (v == -kInf) return "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool is_divergent_role(const MemberRecord& m) { return m.role == "control_divergent"; }

// drift between consecutive levels; inf when a value is not finite
std::vector<double> drift_of(const std::vector<double>& xs) {
  std::vector<double> d;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(xs[i - 1]) || xs[i - 1] == 0.0)
      d.push_back(kInf);
    else
      d.push_back(std::fabs(xs[i] / xs[i - 1] - 1.0));
  }
  return d;
}

// strictly increasing over >= 4 levels, finite, and the growth does not die out
bool divergence_signature(const std::vector<double>& xs) {
  if (xs.size() < 4) return false;
  std::vector<double> inc;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !(xs[i - 1] > 0) || !(xs[i] > xs[i - 1])) return false;
    inc.push_back(std::log(xs[i] / xs[i - 1]));
  }
  return inc.back() >= 0.25 * inc.front();
}

bool bounded(const std::vector<double>& xs, double threshold) {
  for (double d : drift_of(xs))
    if (!(d < threshold)) return false;
  return true;
}

}  // namespace

void finalize(PartReport& p) {
  const bool has_stable = std::any_of(p.members.begin(), p.members.end(),
                                      [](const MemberRecord& m) { return m.role == "control_stable"; });
  if (!has_stable) throw std::invalid_argument("report '" + p.name + "': missing the known-stable control arm");
  const std::size_t L = p.levels.size();
  for (const auto& m : p.members)
    if (m.ratios.size() != L) throw std::invalid_argument("report '" + p.name + "': ratio count mismatch");
  p.pointer.clear();
  p.constants.assign(L, 0.0);

  if (p.expect == "stable") {
    if (L < 2) throw std::invalid_argument("report '" + p.name + "': need at least 2 levels");
    for (std::size_t k = 0; k < L; ++k)
      for (const auto& m : p.members) {
        if (is_divergent_role(m)) continue;
        const double r = m.ratios[k];
        if (!std::isfinite(r) && p.pointer.empty())
          p.pointer = m.label + " at level " + format_number(p.levels[k]);
        p.constants[k] = std::max(p.constants[k], r);
      }
    p.drifts = drift_of(p.constants);
    bool ok = p.pointer.empty();
    for (std::size_t k = 0; k < p.drifts.size() && ok; ++k)
      if (!(p.drifts[k] < p.threshold)) {
        ok = false;
        p.pointer = "drift between levels " + format_number(p.levels[k]) + " and " + format_number(p.levels[k + 1]);
      }
    // a divergent control arm, if present, must actually diverge
    for (const auto& m : p.members)
      if (ok && is_divergent_role(m) && !divergence_signature(m.ratios)) {
        ok = false;
        p.pointer = m.label + ": divergent control did not diverge";
      }
    p.verdict = ok ? "stable" : "unstable";
    p.passed = ok;
    return;
  }

  if (p.expect != "diverges") throw std::invalid_argument("report '" + p.name + "': unknown expectation");
  const bool has_div = std::any_of(p.members.begin(), p.members.end(),
                                   [](const MemberRecord& m) { return m.role != "control_stable"; });
  if (!has_div) throw std::invalid_argument("report '" + p.name + "': missing the known-divergent control arm");
  // the stable arm: control_stable members
  std::vector<double> stable_series(L, 0.0), div_series(L, 0.0);
  for (std::size_t k = 0; k < L; ++k)
    for (const auto& m : p.members) {
      if (m.role == "control_stable")
        stable_series[k] = std::max(stable_series[k], m.ratios[k]);
      else
        div_series[k] = std::max(div_series[k], m.ratios[k]);
    }
  p.constants = div_series;
  p.drifts = drift_of(div_series);
  bool ok = true;
  if (!bounded(stable_series, p.threshold)) {
    ok = false;
    p.pointer = "stable control drifted";
  }
  for (const auto& m : p.members) {
    if (!ok) break;
    if (m.role == "control_stable") continue;
    if (!m.domain_norms.empty() && !bounded(m.domain_norms, p.threshold)) {
      ok = false;
      p.pointer = m.label + ": domain norm not bounded";
    } else if (!divergence_signature(m.ratios)) {
      ok = false;
      p.pointer = m.label + ": no monotone divergence";
    }
  }
  if (ok) {
    p.verdict = "diverges-as-expected";
  } else {
    p.verdict = bounded(div_series, p.threshold) ? "stable" : "unstable";
  }
  p.passed = ok;
}

void finalize(Report& r) {
  r.passed = !r.parts.empty();
  for (auto& p : r.parts) {
    finalize(p);
    r.passed = r.passed && p.passed;
  }
}

namespace {

std::string quote(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      o += '\\';
      o += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      o += buf;
    } else {
      o += c;
    }
  }
  return o + "\"";
}

std::string array(const std::vector<double>& xs) {
  std::string o = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) o += (i ? ", " : "") + format_number(xs[i]);
  return o + "]";
}

}  // namespace

std::string to_json(const Report& r) {
  std::ostringstream o;
  o << "{\n  \"id\": " << quote(r.id) << ",\n  \"kind\": " << quote(r.kind) << ",\n  \"params\": {";
  bool first = true;
  for (const auto& [k, v] : r.params) {
    o << (first ? "" : ",") << "\n    " << quote(k) << ": " << quote(v);
    first = false;
  }
  o << (r.params.empty() ? "}" : "\n  }") << ",\n  \"parts\": [";
  for (std::size_t i = 0; i < r.parts.size(); ++i) {
    const auto& p = r.parts[i];
    o << (i ? "," : "") << "\n    {\n";
    o << "      \"name\": " << quote(p.name) << ",\n";
    o << "      \"domain\": " << quote(p.domain) << ",\n";
    o << "      \"range\": " << quote(p.range) << ",\n";
    o << "      \"expect\": " << quote(p.expect) << ",\n";
    o << "      \"level_kind\": " << quote(p.level_kind) << ",\n";
    o << "      \"levels\": " << array(p.levels) << ",\n";
    o << "      \"threshold\": " << format_number(p.threshold) << ",\n";
    o << "      \"members\": [";
    for (std::size_t j = 0; j < p.members.size(); ++j) {
      const auto& m = p.members[j];
      o << (j ? "," : "") << "\n        {\"label\": " << quote(m.label) << ", \"role\": " << quote(m.role)
        << ", \"ratios\": " << array(m.ratios) << ", \"domain_norms\": " << array(m.domain_norms) << "}";
    }
    o << "\n      ],\n";
    o << "      \"constants\": " << array(p.constants) << ",\n";
    o << "      \"drifts\": " << array(p.drifts) << ",\n";
    o << "      \"verdict\": " << quote(p.verdict) << ",\n";
    o << "      \"pointer\": " << (p.pointer.empty() ? std::string("null") : quote(p.pointer)) << ",\n";
    o << "      \"passed\": " << (p.passed ? "true" : "false") << "\n    }";
  }
  o << "\n  ],\n  \"passed\": " << (r.passed ? "true" : "false") << "\n}\n";
  return o.str();
}

}  // namespace rinorm
