#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rinorm/report.hpp"
#include "rinorm/spaces.hpp"
#include "rinorm/stepfn.hpp"

namespace rinorm {

// W1(Z) Sobolev, R(X) / R(X,Linf) mixed, ZR(X) rango space, or a plain r.i. space
struct Endpoint {
  enum class Kind { sobolev, mixed, rango, plain } kind = Kind::plain;
  SpaceSpec space;
  std::string text;
};
Endpoint parse_endpoint(const std::string& text);

struct FamilySpec {
  std::string kind;  // power_log | power_head | indicator | constant | random_step | slab
  std::map<std::string, double> params;
  std::string role = "member";
  std::string label() const;
};

struct Campaign {
  std::string id;
  std::vector<FamilySpec> family;
  std::string domain;
  std::string range;
  int n = 2;
  std::vector<int> grids;
  double tol = 0.15;         // drift threshold
  std::string expect = "stable";
};

// parse and validate campaign JSON text; errors name the offending field
Campaign parse_campaign(const std::string& json_text);

// t^{-γ}(1+log 1/t)^{-δ} clipped to a step function on log-spaced breakpoints
PWDecreasing power_log_profile(double gamma, double delta, int pieces = 512, double t_min = 0x1.0p-40);
// rearrangement of the same profile seen through cells of measure 1/cells
PWDecreasing resolve_at_cell_measure(const PWDecreasing& f, double cells);

struct MemberValue {
  double ratio = 0.0;
  double domain = 0.0;
};
// ratio range/domain for one family member on an N-grid
MemberValue evaluate_member(const FamilySpec& member, const Endpoint& domain, const Endpoint& range, int n, int N,
                            std::uint64_t seed = 0);

Report run_embedding_campaign(const Campaign& c, std::uint64_t seed = 0);

struct ChainOptions {
  std::vector<int> grids{64, 128, 256};
  std::vector<int> divergence_grids{64, 128, 256, 512, 1024};
  double threshold = 0.15;
};
// W1 L^p -> R(X, Linf) -> Y with the reverse of the second link on slabs
Report run_chain_campaign(double p, int n, const ChainOptions& opt = {});

struct ProbeOptions {
  int levels = 6;
  double threshold = 0.15;
};
// Z = L^p; target = the optimal X, candidate a smaller Lorentz space
Report run_optimality_probe(double p, int n, const SpaceSpec& target, const SpaceSpec& candidate,
                            const ProbeOptions& opt = {});
// optimal range space X for W1 L^p -> R(X, Linf) and the r.i. target of the chain
SpaceSpec optimal_mixed_space(double p, int n);
SpaceSpec chain_target_space(double p, int n);

}  // namespace rinorm
