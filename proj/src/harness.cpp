#include "rinorm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>

#include <json.hpp>

#include "rinorm/mixed.hpp"
#include "rinorm/random.hpp"
#include "rinorm/rearrange.hpp"
#include "rinorm/special.hpp"
#include "rinorm/witness.hpp"

namespace rinorm {

namespace {

std::string num(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double param(const FamilySpec& m, const std::string& key, double fallback) {
  auto it = m.params.find(key);
  return it == m.params.end() ? fallback : it->second;
}

// strip "R(" ... ")" and an optional trailing ",Linf"
std::string inner_of(const std::string& s, std::size_t prefix) {
  std::string in = s.substr(prefix, s.size() - prefix - 1);
  const std::string tail = ",Linf";
  if (in.size() > tail.size() && in.compare(in.size() - tail.size(), tail.size(), tail) == 0) {
    // only strip when the remainder is itself a complete space
    const std::string head = in.substr(0, in.size() - tail.size());
    int depth = 0;
    bool balanced = true;
    for (char c : head) {
      depth += c == '(' ? 1 : c == ')' ? -1 : 0;
      if (depth < 0) balanced = false;
    }
    if (balanced && depth == 0) return head;
  }
  return in;
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  Endpoint e;
  e.text = s;
  auto starts = [&](const char* p) { return s.rfind(p, 0) == 0 && s.back() == ')'; };
  if (starts("W1(")) {
    e.kind = Endpoint::Kind::sobolev;
    e.space = parse_space(s.substr(3, s.size() - 4));
  } else if (starts("ZR(")) {
    e.kind = Endpoint::Kind::rango;
    e.space = parse_space(inner_of(s, 3));
  } else if (starts("R(")) {
    e.kind = Endpoint::Kind::mixed;
    e.space = parse_space(inner_of(s, 2));
  } else {
    e.kind = Endpoint::Kind::plain;
    e.space = parse_space(s);
  }
  return e;
}

std::string FamilySpec::label() const {
  std::string o = kind + "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    o += (first ? "" : ",") + k + "=" + short_num(v);
    first = false;
  }
  return o + ")";
}

// ---- campaign JSON ----

Campaign parse_campaign(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception&) {
    throw PreconditionError("campaign: not valid JSON");
  }
  if (!j.is_object()) throw PreconditionError("campaign: top level must be an object");
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw PreconditionError(std::string("campaign: missing field '") + key + "'");
    return j.at(key);
  };
  Campaign c;
  const auto& id = need("id");
  if (!id.is_string()) throw PreconditionError("campaign: field 'id' must be a string");
  c.id = id.get<std::string>();
  const auto& dom = need("domain");
  const auto& ran = need("range");
  if (!dom.is_string()) throw PreconditionError("campaign: field 'domain' must be a string");
  if (!ran.is_string()) throw PreconditionError("campaign: field 'range' must be a string");
  c.domain = dom.get<std::string>();
  c.range = ran.get<std::string>();
  try {
    parse_endpoint(c.domain);
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("campaign: field 'domain': ") + e.what());
  }
  try {
    parse_endpoint(c.range);
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("campaign: field 'range': ") + e.what());
  }
  const auto& n = need("n");
  if (!n.is_number_integer() || n.get<int>() < 2) throw PreconditionError("campaign: field 'n' must be an integer >= 2");
  c.n = n.get<int>();
  const auto& grids = need("grids");
  if (!grids.is_array() || grids.size() < 2)
    throw PreconditionError("campaign: field 'grids' must list at least 2 grid levels");
  for (const auto& g : grids) {
    if (!g.is_number_integer() || g.get<int>() < 1) throw PreconditionError("campaign: field 'grids' needs positive integers");
    c.grids.push_back(g.get<int>());
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0))
      throw PreconditionError("campaign: field 'tol' must be a positive number");
    c.tol = j["tol"].get<double>();
  }
  if (j.contains("expect")) {
    if (!j["expect"].is_string()) throw PreconditionError("campaign: field 'expect' must be a string");
    c.expect = j["expect"].get<std::string>();
    if (c.expect != "stable" && c.expect != "diverges")
      throw PreconditionError("campaign: field 'expect' must be 'stable' or 'diverges'");
  }
  const auto& fam = need("family");
  if (!fam.is_array() || fam.empty()) throw PreconditionError("campaign: field 'family' must be a non-empty array");
  static const std::vector<std::string> kinds{"power_log", "power_head", "indicator", "constant", "random_step", "slab"};
  for (const auto& m : fam) {
    if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string())
      throw PreconditionError("campaign: field 'family[].kind' missing");
    FamilySpec f;
    f.kind = m["kind"].get<std::string>();
    if (std::find(kinds.begin(), kinds.end(), f.kind) == kinds.end())
      throw PreconditionError("campaign: field 'family[].kind': unknown generator '" + f.kind + "'");
    if (m.contains("params")) {
      if (!m["params"].is_object()) throw PreconditionError("campaign: field 'family[].params' must be an object");
      for (const auto& [k, v] : m["params"].items()) {
        if (!v.is_number()) throw PreconditionError("campaign: field 'family[].params." + k + "' must be a number");
        f.params[k] = v.get<double>();
      }
    }
    if (m.contains("role")) {
      if (!m["role"].is_string()) throw PreconditionError("campaign: field 'family[].role' must be a string");
      f.role = m["role"].get<std::string>();
      if (f.role != "member" && f.role != "control_stable" && f.role != "control_divergent")
        throw PreconditionError("campaign: field 'family[].role' must be member, control_stable or control_divergent");
    }
    c.family.push_back(std::move(f));
  }
  const auto has_role = [&](bool stable) {
    return std::any_of(c.family.begin(), c.family.end(),
                       [&](const FamilySpec& f) { return (f.role == "control_stable") == stable; });
  };
  if (!has_role(true)) throw PreconditionError("campaign: field 'family' needs a member with role control_stable");
  if (c.expect == "diverges" && !has_role(false))
    throw PreconditionError("campaign: field 'family' needs a member that is expected to diverge");
  return c;
}

// ---- profiles ----

PWDecreasing power_log_profile(double gamma, double delta, int pieces, double t_min) {
  if (!(gamma >= 0 && gamma < 1)) throw PreconditionError("power_log: need 0 <= gamma < 1");
  if (!(delta >= 0)) throw PreconditionError("power_log: need delta >= 0");
  if (pieces < 2) throw PreconditionError("power_log: need at least 2 pieces");
  auto f = [&](double t) { return std::pow(t, -gamma) * std::pow(1.0 - std::log(t), -delta); };
  std::vector<double> b{0.0}, v;
  const double lmin = std::log(t_min);
  for (int i = 1; i < pieces; ++i) b.push_back(std::exp(lmin * (pieces - i) / (pieces - 1)));
  b.push_back(1.0);
  b[pieces - 1] = std::min(b[pieces - 1], b[pieces] * (1 - 1e-15));
  v.push_back(f(0.5 * b[1]));
  for (int i = 1; i < pieces; ++i) v.push_back(f(std::sqrt(b[i] * b[i + 1])));
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::min(v[i], v[i - 1]);
  return PWDecreasing(std::move(b), std::move(v));
}

PWDecreasing resolve_at_cell_measure(const PWDecreasing& f, double cells) {
  if (!(cells >= 1)) throw PreconditionError("resolve: need at least one cell");
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 1; i + 1 < b.size(); ++i) {
    const double j = std::floor(b[i] * cells);
    cuts.push_back(j / cells);
    cuts.push_back(std::min(1.0, (j + 1) / cells));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> nb{0.0}, nv;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const std::size_t p = f.piece_index(lo);
    double val;
    if (b[p] <= lo && hi <= b[p + 1] && !(p == 0 && f.unbounded()))
      val = v[p];
    else
      val = (f.primitive(hi) - f.primitive(lo)) / (hi - lo);
    if (!nv.empty()) val = std::min(val, nv.back());
    if (!nv.empty() && val == nv.back()) {
      nb.back() = hi;
      continue;
    }
    nv.push_back(val);
    nb.push_back(hi);
  }
  return PWDecreasing(std::move(nb), std::move(nv));
}

// ---- member evaluation ----

namespace {

bool is_slab(const FamilySpec& m) { return m.kind == "slab"; }

PWDecreasing radial_source(const FamilySpec& m, int n, int N, std::uint64_t seed) {
  const double cells = std::pow(static_cast<double>(N), n);
  if (m.kind == "power_log")
    return resolve_at_cell_measure(power_log_profile(param(m, "gamma", 0.0), param(m, "delta", 0.0)), cells);
  if (m.kind == "power_head") {
    const double g = param(m, "gamma", 0.5);
    if (!(g > 0 && g < 1)) throw PreconditionError("power_head: need 0 < gamma < 1");
    return PWDecreasing({0.0, 1.0}, {kInf}, Head{0.0, Monomial{1.0, -g}});
  }
  if (m.kind == "indicator")
    return resolve_at_cell_measure(PWDecreasing::indicator(param(m, "a", 0.5), param(m, "height", 1.0)), cells);
  if (m.kind == "constant") return PWDecreasing::constant(param(m, "c", 1.0));
  if (m.kind == "random_step") {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(param(m, "index", 0.0)));
    RandomStepOptions opt;
    opt.dyadic = true;
    return resolve_at_cell_measure(random_step(rng, opt), cells);
  }
  throw PreconditionError("unknown generator '" + m.kind + "'");
}

SlabProfile slab_of(const FamilySpec& m, int n) {
  const double gamma = param(m, "gamma", 0.0), beta = param(m, "beta", 0.0);
  const double a = param(m, "a", 1.0), r = param(m, "r", 0.25), h = param(m, "height", 1.0);
  PWDecreasing g = PWDecreasing::indicator(a, h);
  if (gamma > 0 || beta > 0) {
    Head head{0.0, Monomial{h, -gamma, beta}};
    g = a >= 1.0 ? PWDecreasing({0.0, 1.0}, {kInf}, head) : PWDecreasing({0.0, a, 1.0}, {kInf, 0.0}, head);
  }
  return SlabProfile(g, r, n, n);
}

double on_witness(const Endpoint& e, const SobolevWitness& w, int n) {
  switch (e.kind) {
    case Endpoint::Kind::sobolev: return w.sobolev_norm(e.space);
    case Endpoint::Kind::mixed: return w.mixed_norm(e.space);
    case Endpoint::Kind::rango: return rango_norm(w.u_star(), e.space, n);
    case Endpoint::Kind::plain: break;
  }
  return norm(e.space, w.u_star());
}

double on_slab(const Endpoint& e, const SlabProfile& s, int n, int N) {
  switch (e.kind) {
    case Endpoint::Kind::sobolev: throw PreconditionError("slab family has no Sobolev witness: use a plain or mixed domain");
    case Endpoint::Kind::mixed: return mixed_norm(s, N, e.space).total;
    case Endpoint::Kind::rango: return rango_norm(rearrange_cells(s.sample_layers(N)), e.space, n);
    case Endpoint::Kind::plain: break;
  }
  return norm(e.space, rearrange_cells(s.sample_layers(N)));
}

}  // namespace

MemberValue evaluate_member(const FamilySpec& m, const Endpoint& domain, const Endpoint& range, int n, int N,
                            std::uint64_t seed) {
  double d, r;
  if (is_slab(m)) {
    const auto s = slab_of(m, n);
    d = on_slab(domain, s, n, N);
    r = on_slab(range, s, n, N);
  } else {
    const double radius = param(m, "r", 0.45);
    const double m0 = witness_omega(n) * std::pow(radius, n);
    const auto f = radial_source(m, n, N, seed);
    const auto w = make_sobolev_witness(truncation_split(f, m0).f1, radius, n);
    d = on_witness(domain, w, n);
    r = on_witness(range, w, n);
  }
  MemberValue out;
  out.domain = d;
  out.ratio = d > 0 ? r / d : (r > 0 ? kInf : 0.0);
  return out;
}

namespace {

std::vector<FamilySpec> expand(const std::vector<FamilySpec>& fam) {
  std::vector<FamilySpec> out;
  for (const auto& m : fam) {
    if (m.kind == "random_step") {
      const int count = static_cast<int>(param(m, "count", 1.0));
      for (int i = 0; i < count; ++i) {
        FamilySpec e = m;
        e.params.erase("count");
        e.params["index"] = i;
        out.push_back(e);
      }
    } else {
      out.push_back(m);
    }
  }
  return out;
}

// members run concurrently; results are collected in family order
PartReport run_part(const std::string& name, const std::vector<FamilySpec>& family, const Endpoint& domain,
                    const Endpoint& range, int n, const std::vector<int>& grids, const std::string& expect,
                    double threshold, std::uint64_t seed) {
  PartReport p;
  p.name = name;
  p.domain = domain.text;
  p.range = range.text;
  p.expect = expect;
  p.threshold = threshold;
  for (int N : grids) p.levels.push_back(N);
  std::vector<std::future<MemberRecord>> jobs;
  for (const auto& m : family) {
    jobs.push_back(std::async(std::launch::async, [&, m] {
      MemberRecord rec{m.label(), m.role, {}, {}};
      for (int N : grids) {
        const auto v = evaluate_member(m, domain, range, n, N, seed);
        rec.ratios.push_back(v.ratio);
        rec.domain_norms.push_back(v.domain);
      }
      return rec;
    }));
  }
  for (auto& j : jobs) p.members.push_back(j.get());
  finalize(p);
  return p;
}

FamilySpec spec(const std::string& kind, std::map<std::string, double> params, const std::string& role = "member") {
  return FamilySpec{kind, std::move(params), role};
}

}  // namespace

Report run_embedding_campaign(const Campaign& c, std::uint64_t seed) {
  Report r;
  r.id = c.id;
  r.kind = "embedding";
  r.params["n"] = std::to_string(c.n);
  r.params["seed"] = std::to_string(seed);
  r.parts.push_back(run_part(c.id, expand(c.family), parse_endpoint(c.domain), parse_endpoint(c.range), c.n,
                             c.grids, c.expect, c.tol, seed));
  finalize(r);
  return r;
}

// ---- chain ----

SpaceSpec optimal_mixed_space(double p, int n) {
  if (!(p >= 1.0 && p <= n)) throw PreconditionError("chain: need 1 <= p <= n");
  if (p == n) return SpaceSpec::lorentz_zygmund(kInf, n, -1.0);
  if (p == 1.0) return SpaceSpec::lorentz(1.0, 1.0);
  return SpaceSpec::lorentz(p * (n - 1) / (n - p), p);
}

SpaceSpec chain_target_space(double p, int n) {
  if (!(p >= 1.0 && p <= n)) throw PreconditionError("chain: need 1 <= p <= n");
  if (p == n) return SpaceSpec::lorentz_zygmund(kInf, n, -1.0);
  return SpaceSpec::lorentz(p * n / (n - p), p);
}

Report run_chain_campaign(double p, int n, const ChainOptions& opt) {
  if (n < 2) throw PreconditionError("chain: need n >= 2");
  if (!(p >= 1.0)) throw PreconditionError("chain: need p >= 1");
  if (p > n) throw PreconditionError("chain: p > n is outside the Sobolev range");
  const SpaceSpec Z = p == 1.0 ? SpaceSpec::lorentz(1.0, 1.0) : SpaceSpec::lebesgue(p);
  const SpaceSpec X = optimal_mixed_space(p, n);
  const SpaceSpec Y = chain_target_space(p, n);
  Endpoint ez{Endpoint::Kind::sobolev, Z, "W1(" + Z.to_string() + ")"};
  Endpoint ex{Endpoint::Kind::mixed, X, "R(" + X.to_string() + ",Linf)"};
  Endpoint ey{Endpoint::Kind::plain, Y, Y.to_string()};

  std::vector<FamilySpec> radial;
  for (double g : {0.2, 0.45, 0.7})
    for (double d : {0.0, 0.6}) radial.push_back(spec("power_log", {{"gamma", g / p}, {"delta", d}}));
  radial.push_back(spec("indicator", {{"a", 0.3}}, "control_stable"));

  // slabs unbounded yet inside Y
  std::vector<FamilySpec> slabs;
  const double np = conjugate_dim(n);
  if (p == n) {
    slabs.push_back(spec("slab", {{"beta", 0.5 / np}, {"r", 0.25}}, "control_divergent"));
    slabs.push_back(spec("slab", {{"beta", 0.75 / np}, {"r", 0.125}}, "control_divergent"));
  } else {
    const double gy = (n - p) / (p * n);  // 1/p_Y
    slabs.push_back(spec("slab", {{"gamma", 0.5 * gy}, {"r", 0.25}}, "control_divergent"));
    slabs.push_back(spec("slab", {{"gamma", 0.25 * gy}, {"r", 0.125}}, "control_divergent"));
  }
  slabs.push_back(spec("slab", {{"a", 0.5}, {"r", 0.25}}, "control_stable"));

  Report r;
  r.id = "chain-p" + short_num(p) + "-n" + std::to_string(n);
  r.kind = "chain";
  r.params["p"] = num(p);
  r.params["n"] = std::to_string(n);
  r.params["Z"] = Z.to_string();
  r.params["X"] = X.to_string();
  r.params["Y"] = Y.to_string();
  r.parts.push_back(run_part("sobolev-to-mixed", radial, ez, ex, n, opt.grids, "stable", opt.threshold, 0));
  r.parts.push_back(run_part("mixed-to-ri", radial, ex, ey, n, opt.grids, "stable", opt.threshold, 0));
  r.parts.push_back(
      run_part("strictness-reverse", slabs, ey, ex, n, opt.divergence_grids, "diverges", opt.threshold, 0));
  finalize(r);
  return r;
}

// ---- optimality probe ----

Report run_optimality_probe(double p, int n, const SpaceSpec& target, const SpaceSpec& candidate,
                            const ProbeOptions& opt) {
  if (n < 2) throw PreconditionError("probe: need n >= 2");
  if (!(p > 1.0 && p < n)) throw PreconditionError("probe: need 1 < p < n");
  if (opt.levels < 4) throw PreconditionError("probe: need at least 4 refinement levels");
  const SpaceSpec Z = SpaceSpec::lebesgue(p);
  Endpoint ez{Endpoint::Kind::sobolev, Z, "W1(" + Z.to_string() + ")"};
  Endpoint et{Endpoint::Kind::mixed, target, "R(" + target.to_string() + ",Linf)"};
  Endpoint ec{Endpoint::Kind::mixed, candidate, "R(" + candidate.to_string() + ",Linf)"};

  // stage 1: coarse sweep of spike exponents, keep the one where the candidate gains most on the target
  const double edge = 1.0 / p;
  double best_gap = 0.0, best_gain = -kInf;
  std::string sweep;
  for (double frac : {0.3, 0.5, 0.7, 0.85}) {
    const auto m = spec("power_head", {{"gamma", frac * edge}});
    const double gain = evaluate_member(m, ez, ec, n, 1).ratio / evaluate_member(m, ez, et, n, 1).ratio;
    sweep += (sweep.empty() ? "" : ",") + short_num(frac * edge) + ":" + num(gain);
    if (gain > best_gain) {
      best_gain = gain;
      best_gap = edge - frac * edge;
    }
  }
  // stage 2: refine the exponent toward the integrability edge 1/p
  PartReport part;
  part.name = "probe";
  part.domain = ez.text;
  part.range = ec.text;
  part.expect = "diverges";
  part.level_kind = "exponent_gap";
  part.threshold = opt.threshold;
  MemberRecord cand{"candidate " + candidate.to_string(), "member", {}, {}};
  MemberRecord ctrl{"target " + target.to_string(), "control_stable", {}, {}};
  std::vector<std::future<std::pair<MemberValue, MemberValue>>> jobs;
  for (int k = 0; k < opt.levels; ++k) {
    const double gap = best_gap * std::ldexp(1.0, -k);
    part.levels.push_back(gap);
    jobs.push_back(std::async(std::launch::async, [=, &ez, &ec, &et] {
      const auto m = spec("power_head", {{"gamma", edge - gap}});
      return std::make_pair(evaluate_member(m, ez, ec, n, 1), evaluate_member(m, ez, et, n, 1));
    }));
  }
  for (auto& j : jobs) {
    const auto [c, t] = j.get();
    cand.ratios.push_back(c.ratio);
    cand.domain_norms.push_back(c.domain);
    ctrl.ratios.push_back(t.ratio);
    ctrl.domain_norms.push_back(t.domain);
  }
  // the domain norm of a spike grows with the refinement by design; only the ratio matters here
  cand.domain_norms.clear();
  ctrl.domain_norms.clear();
  part.members = {cand, ctrl};
  finalize(part);

  Report r;
  r.id = "probe-p" + short_num(p) + "-n" + std::to_string(n);
  r.kind = "probe";
  r.params["p"] = num(p);
  r.params["n"] = std::to_string(n);
  r.params["target"] = target.to_string();
  r.params["candidate"] = candidate.to_string();
  r.params["stage1"] = sweep;
  r.parts.push_back(part);
  finalize(r);
  return r;
}

}  // namespace rinorm
