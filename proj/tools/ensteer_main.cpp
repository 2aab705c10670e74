// Command-line front end: check conditions, synthesize steering inputs,
// simulate and score them. Exit codes are a stable contract:
//   0 success, 1 mathematical-condition failure, 2 I/O or parse failure,
//   3 arc classification failure, 4 certified-mode cap or budget failure.

#include <iostream>
#include <optional>
#include <string>

#include "../vendor/CLI11.hpp"
#include "ensteer/ensteer.hpp"

namespace {

using namespace ensteer;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCondition = 1;
constexpr int kExitParse = 2;
constexpr int kExitArc = 3;
constexpr int kExitCaps = 4;

struct LoadedSystem {
  SystemSpecModel model;
  EnsembleSystem sys;
  std::optional<EnsembleSystem> validation;  // refined grid, when re-evaluable
};

LoadedSystem load_system(const std::string& path, int grid_override) {
  LoadedSystem out;
  out.model = parse_system_spec(read_file(path));
  ParameterGrid grid = out.model.grid(grid_override);
  out.sys = out.model.instantiate(grid);
  if (out.model.evaluable() && grid.size() >= 2)
    out.validation = out.model.instantiate(grid.refined());
  return out;
}

int cmd_check(const std::string& system_path, const std::string& out_path, int grid_override) {
  LoadedSystem ls = load_system(system_path, grid_override);
  Tolerances tol;

  auto n1 = check_N1(ls.sys, tol);
  auto n2 = check_N2(ls.sys, tol);
  auto s1 = check_S1(ls.sys, tol);
  auto s2 = check_S2(ls.sys, tol);

  json j;
  j["time"] = ls.model.continuous ? "continuous" : "discrete";
  j["N1"] = {{"pass", n1.pass}, {"min_kalman_sigma", n1.min_sigma}, {"worst_sample", n1.worst_sample}};
  j["N2"] = {{"pass", n2.pass}, {"min_cross_sample_gap", n2.min_gap}};
  j["S1"] = {{"pass", s1.pass}, {"higher_coefficient_drift", s1.max_drift}};
  j["S2"] = {{"pass", s2.pass}, {"min_eigenvalue_gap", s2.min_gap}};
  bool ok = n1.pass && n2.pass && (s1.pass || s2.pass);
  j["synthesizable"] = ok;
  std::string text = j.dump(2) + "\n";
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << text;
  return ok ? kExitOk : kExitCondition;
}

int cmd_synthesize(const std::string& system_path, const std::string& target_path, double eps,
                   std::string method, const std::string& mode_name, int grid_override,
                   const std::string& out_path) {
  if (eps == 0.0) {
    std::cerr << "eps must be positive: exact ensemble reachability is never possible, only "
                 "eps-approximate steering\n";
    return kExitCondition;
  }
  Mode mode = (mode_name == "certified") ? Mode::Certified : Mode::Adaptive;

  LoadedSystem ls = load_system(system_path, grid_override);
  TargetSpecModel tmodel = parse_target_spec(read_file(target_path), ls.sys.n);
  TargetFamily f = tmodel.instantiate(ls.sys.grid);

  std::optional<TargetFamily> f_val;
  const EnsembleSystem* vsys = nullptr;
  const TargetFamily* vf = nullptr;
  if (ls.validation && tmodel.evaluable()) {
    f_val = tmodel.instantiate(ls.validation->grid);
    vsys = &*ls.validation;
    vf = &*f_val;
  }

  Tolerances tol;
  if (method == "auto") {
    if (ls.model.continuous) {
      method = "s2ct";
    } else {
      method = check_S1(ls.sys, tol).pass ? "s1" : "s2";
    }
  }
  if (method == "s2ct" && !ls.model.continuous)
    throw ConditionError("method s2ct needs a continuous-time system (\"time\": \"continuous\")");
  if (method != "s2ct" && ls.model.continuous)
    throw ConditionError("a continuous-time system needs --method s2ct (or auto)");

  SynthesisReport report;
  std::string input_text;
  if (method == "s1") {
    SynthesisResult r = method_s1(ls.sys, f, eps, mode, vsys, vf, tol);
    report = r.report;
    input_text = emit_input_csv(r.u);
  } else if (method == "s2") {
    SynthesisResult r = method_s2(ls.sys, f, eps, mode, vsys, vf, tol);
    report = r.report;
    input_text = emit_input_csv(r.u);
  } else if (method == "s2ct") {
    ContinuousSynthesisResult r = method_s2_continuous(ls.sys, f, eps, mode, vsys, vf, tol);
    report = r.report;
    input_text = emit_input_csv(r.u);
  } else {
    std::cerr << "unknown method '" << method << "' (expected auto|s1|s2|s2ct)\n";
    return kExitParse;
  }

  write_file(out_path, input_text);
  std::string report_path = out_path + ".report.json";
  write_file(report_path, emit_report_json(report));
  std::cout << "input: " << out_path << "\nreport: " << report_path
            << "\nachieved_sup_error: " << report.achieved_sup_error
            << "\nwithin_tolerance: " << (report.within_tolerance ? "true" : "false") << "\n";
  return report.within_tolerance ? kExitOk : kExitCaps;
}

int cmd_simulate(const std::string& system_path, const std::string& input_path,
                 const std::string& target_path, const std::string& out_path,
                 std::optional<double> eps, int grid_override) {
  LoadedSystem ls = load_system(system_path, grid_override);
  TargetSpecModel tmodel = parse_target_spec(read_file(target_path), ls.sys.n);
  TargetFamily f = tmodel.instantiate(ls.sys.grid);
  ParsedInput in = parse_input_csv(read_file(input_path));

  StateFamily x;
  if (ls.model.continuous) {
    if (!in.piecewise_constant)
      throw ParseError("continuous-time system needs a piecewise-constant input file (tau= header)");
    EigenDecomposition eig = eigendecompose_simple(ls.sys);
    x = simulate_continuous_pwc(ls.sys, eig, in.pwc);
  } else {
    if (in.piecewise_constant)
      throw ParseError("discrete-time system needs a discrete input file (t,re,im header)");
    x = simulate_discrete(ls.sys, in.discrete);
  }

  std::string profile = emit_error_profile_csv(x, f);
  if (!out_path.empty()) write_file(out_path, profile);
  std::cout << profile;

  double sup = sup_error(x, f);
  if (eps && sup > *eps) return kExitCondition;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform steering-input synthesis for parameter-dependent linear systems"};
  app.require_subcommand(1);

  std::string system_path, target_path, input_path, out_path;
  double eps = -1.0;
  std::string method = "auto", mode_name = "adaptive";
  int grid_override = 0;
  std::optional<double> sim_eps;

  auto* check = app.add_subcommand("check", "Evaluate conditions (N1)(N2)(S1)(S2) on a system");
  check->add_option("system", system_path, "system spec JSON")->required();
  check->add_option("--out", out_path, "write the verdict JSON here as well");
  check->add_option("--grid", grid_override, "override interval sample count");

  auto* synth = app.add_subcommand("synthesize", "Compute a steering input for a target family");
  synth->add_option("system", system_path, "system spec JSON")->required();
  synth->add_option("target", target_path, "target spec JSON")->required();
  synth->add_option("--eps", eps, "uniform tolerance (> 0)")->required();
  synth->add_option("--method", method, "auto|s1|s2|s2ct")
      ->check(CLI::IsMember({"auto", "s1", "s2", "s2ct"}));
  synth->add_option("--mode", mode_name, "certified|adaptive")
      ->check(CLI::IsMember({"certified", "adaptive"}));
  synth->add_option("--grid", grid_override, "override interval sample count");
  synth->add_option("--out", out_path, "input CSV path (report goes to <out>.report.json)")
      ->required();

  auto* sim = app.add_subcommand("simulate", "Replay an input file and score it against a target");
  sim->add_option("system", system_path, "system spec JSON")->required();
  sim->add_option("input", input_path, "input CSV")->required();
  sim->add_option("target", target_path, "target spec JSON")->required();
  sim->add_option("--out", out_path, "error-profile CSV path");
  sim->add_option("--eps", sim_eps, "fail (exit 1) if the sup error exceeds this");
  sim->add_option("--grid", grid_override, "override interval sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (check->parsed()) return cmd_check(system_path, out_path, grid_override);
    if (synth->parsed())
      return cmd_synthesize(system_path, target_path, eps, method, mode_name, grid_override,
                            out_path);
    if (sim->parsed())
      return cmd_simulate(system_path, input_path, target_path, out_path, sim_eps, grid_override);
  } catch (const ensteer::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ensteer::ArcClassificationError& e) {
    std::cerr << "arc classification: " << e.what() << "\n";
    return kExitArc;
  } catch (const ensteer::CapError& e) {  // includes CertificationError
    std::cerr << "certified-mode failure: " << e.what() << "\n";
    return kExitCaps;
  } catch (const ensteer::ConditionError& e) {
    std::cerr << "condition failure: " << e.what() << "\n";
    return kExitCondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
