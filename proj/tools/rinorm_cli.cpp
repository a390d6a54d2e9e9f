#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rinorm/harness.hpp"
#include "rinorm/kfun.hpp"
#include "rinorm/operators.hpp"
#include "rinorm/rearrange.hpp"
#include "rinorm/spaces.hpp"
#include "rinorm/stepio.hpp"

using namespace rinorm;

namespace {

// malformed input: exit 2; failed verdict: exit 1
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SpaceSpec space_flag(const std::string& text, const std::string& flag) {
  try {
    return parse_space(text);
  } catch (const PreconditionError& e) {
    throw InputError(flag + ": " + e.what());
  }
}

PWDecreasing fstar_flag(const std::string& path) {
  try {
    return read_step_csv_file(path);
  } catch (const PreconditionError& e) {
    throw InputError(std::string("--fstar: ") + e.what());
  }
}

std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(what + ": cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("--out: cannot write '" + out_path + "'");
  out << text;
}

std::string g17(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int report_exit(const Report& r, const std::string& out) {
  emit(out, to_json(r) + "\n");
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rinorm: rearrangement-invariant and mixed norms on the unit cube"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--seed", seed, "seed for randomized members (default 0)");

  // norm
  std::string space_text, fstar_path, grid_path;
  auto* norm_cmd = app.add_subcommand("norm", "norm of a function in a space");
  norm_cmd->add_option("--space", space_text, "space, e.g. \"L(2,1)\" or \"LZ(inf,2,-1)\"")->required();
  auto* fstar_opt = norm_cmd->add_option("--fstar", fstar_path, "step.csv with the decreasing rearrangement");
  norm_cmd->add_option("--gridfile", grid_path, "grid function file (rearranged first)")->excludes(fstar_opt);

  // rearrange
  std::string rearrange_in;
  auto* rearrange_cmd = app.add_subcommand("rearrange", "decreasing rearrangement of a grid function");
  rearrange_cmd->add_option("file", rearrange_in, "grid function file")->required();

  // hardy
  std::string op = "H";
  int dim = 2;
  int samples = 64;
  double beta = 0.0;
  auto* hardy_cmd = app.add_subcommand("hardy", "Hardy-type operator applied to f*, sampled as CSV");
  hardy_cmd->add_option("--fstar", fstar_path, "step.csv")->required();
  hardy_cmd->add_option("--op", op, "H | Hprime | beta | kp")->check(CLI::IsMember({"H", "Hprime", "beta", "kp"}));
  hardy_cmd->add_option("--dim", dim, "dimension n >= 2");
  hardy_cmd->add_option("--beta", beta, "exponent for op beta (> -1)");
  hardy_cmd->add_option("--grid", samples, "number of sample points");

  // kfun
  std::string method = "exact";
  double p0 = 1, q0 = 1, p1 = kInf, q1 = kInf, tmax = 1.0;
  auto* kfun_cmd = app.add_subcommand("kfun", "K-functional curve of f*");
  kfun_cmd->add_option("--fstar", fstar_path, "step.csv")->required();
  kfun_cmd->add_option("--method", method, "exact | holmstedt | bruteforce | sobolev")
      ->check(CLI::IsMember({"exact", "holmstedt", "bruteforce", "sobolev"}));
  kfun_cmd->add_option("--p0", p0, "first space exponent p0");
  kfun_cmd->add_option("--q0", q0, "first space exponent q0");
  kfun_cmd->add_option("--p1", p1, "second space exponent p1 (sobolev)");
  kfun_cmd->add_option("--q1", q1, "second space exponent q1 (sobolev)");
  kfun_cmd->add_option("--tmax", tmax, "largest t");
  kfun_cmd->add_option("--grid", samples, "number of t values");

  // verify
  std::string campaign_path;
  double tol = -1;
  auto* verify_cmd = app.add_subcommand("verify", "run an embedding campaign from JSON");
  verify_cmd->add_option("campaign", campaign_path, "campaign JSON file")->required();
  verify_cmd->add_option("--tol", tol, "override the drift threshold");

  // chain
  double p = 1.0;
  std::vector<int> grids;
  auto* chain_cmd = app.add_subcommand("chain", "both links and the strictness check of the Sobolev chain");
  chain_cmd->add_option("--p", p, "integrability exponent, 1 <= p <= n")->required();
  chain_cmd->add_option("--dim", dim, "dimension n >= 2")->required();
  chain_cmd->add_option("--grid", grids, "grid levels for the stable links")->delimiter(',');
  chain_cmd->add_option("--tol", tol, "drift threshold");

  // probe
  std::string target_text, candidate_text;
  double eps = 0.25;
  int levels = 6;
  auto* probe_cmd = app.add_subcommand("probe", "optimality probe against a smaller Lorentz candidate");
  probe_cmd->add_option("--p", p, "integrability exponent, 1 < p < n")->required();
  probe_cmd->add_option("--dim", dim, "dimension n >= 2")->required();
  probe_cmd->add_option("--target", target_text, "target space (default: the optimal one)");
  probe_cmd->add_option("--candidate", candidate_text, "candidate space (default: second index lowered by --eps)");
  probe_cmd->add_option("--eps", eps, "second-index decrement for the default candidate");
  probe_cmd->add_option("--levels", levels, "refinement levels");
  probe_cmd->add_option("--tol", tol, "drift threshold for the control");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*norm_cmd) {
      const SpaceSpec X = space_flag(space_text, "--space");
      PWDecreasing f = PWDecreasing::zero();
      if (!fstar_path.empty()) {
        f = fstar_flag(fstar_path);
      } else if (!grid_path.empty()) {
        std::ifstream in(grid_path, std::ios::binary);
        if (!in) throw InputError("--gridfile: cannot open '" + grid_path + "'");
        f = rearrangement(read_grid(in));
      } else {
        throw InputError("norm: one of --fstar or --gridfile is required");
      }
      emit(out, g17(norm(X, f)) + "\n");
      return 0;
    }
    if (*rearrange_cmd) {
      std::ifstream in(rearrange_in, std::ios::binary);
      if (!in) throw InputError("file: cannot open '" + rearrange_in + "'");
      std::ostringstream ss;
      write_step_csv(ss, rearrangement(read_grid(in)));
      emit(out, ss.str());
      return 0;
    }
    if (*hardy_cmd) {
      if (dim < 2) throw InputError("--dim: need n >= 2");
      const auto f = fstar_flag(fstar_path);
      std::function<double(double)> g;
      if (op == "H") {
        const auto w = op_H(f, dim);
        g = [w](double t) { return w.eval(t); };
      } else if (op == "Hprime") {
        const auto w = op_Hprime(f, dim);
        g = [w](double t) { return w.eval(t); };
      } else if (op == "beta") {
        if (!(beta > -1)) throw InputError("--beta: need beta > -1");
        const auto c = op_beta(f, beta);
        g = [c](double t) { return c.eval(t); };
      } else {
        const auto c = kerman_pick_transform(f, dim);
        g = [c](double t) { return c.eval(t); };
      }
      std::ostringstream ss;
      write_curve_csv(ss, "t," + op, sample_points(samples), g);
      emit(out, ss.str());
      return 0;
    }
    if (*kfun_cmd) {
      if (samples < 1) throw InputError("--grid: need at least one t value");
      if (!(tmax > 0)) throw InputError("--tmax: need tmax > 0");
      const auto f = fstar_flag(fstar_path);
      std::function<double(double)> k;
      if (method == "exact") {
        k = [f](double t) { return k_exact_L1_Linf(f, t); };
      } else if (method == "holmstedt") {
        k = [=](double t) { return k_holmstedt(f, p0, q0, t); };
      } else if (method == "bruteforce") {
        k = [=](double t) { return k_bruteforce(f, p0, q0, t); };
      } else {
        k = [=](double t) { return k_sobolev_pair(f, p0, q0, p1, q1, t); };
      }
      std::vector<double> ts;
      for (int i = 1; i <= samples; ++i) ts.push_back(tmax * i / samples);
      std::ostringstream ss;
      write_curve_csv(ss, "t,K", ts, k);
      emit(out, ss.str());
      return 0;
    }
    if (*verify_cmd) {
      Campaign c;
      try {
        c = parse_campaign(read_file(campaign_path, "campaign"));
      } catch (const PreconditionError& e) {
        throw InputError(e.what());
      }
      if (tol > 0) c.tol = tol;
      return report_exit(run_embedding_campaign(c, seed), out);
    }
    if (*chain_cmd) {
      ChainOptions opt;
      if (!grids.empty()) {
        if (grids.size() < 2) throw InputError("--grid: need at least 2 grid levels");
        opt.grids = grids;
      }
      if (tol > 0) opt.threshold = tol;
      return report_exit(run_chain_campaign(p, dim, opt), out);
    }
    if (*probe_cmd) {
      if (!(p > 1 && p < dim)) throw InputError("--p: probe needs 1 < p < n");
      const SpaceSpec target = target_text.empty() ? optimal_mixed_space(p, dim) : space_flag(target_text, "--target");
      SpaceSpec candidate;
      if (candidate_text.empty()) {
        if (target.kind != SpaceKind::lorentz) throw InputError("--candidate: required for a non-Lorentz target");
        if (!(eps > 0) || !(target.q - eps >= 1)) throw InputError("--eps: need 0 < eps <= q - 1");
        candidate = SpaceSpec::lorentz(target.p, target.q - eps);
      } else {
        candidate = space_flag(candidate_text, "--candidate");
      }
      ProbeOptions opt;
      opt.levels = levels;
      if (tol > 0) opt.threshold = tol;
      return report_exit(run_optimality_probe(p, dim, target, candidate, opt), out);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
