/*
 * Copyright 2026 The memfair authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "memfair/gaps.hpp"
#include "memfair/population.hpp"
#include "memfair/scenario_io.hpp"
#include "memfair/simulate.hpp"
#include "memfair/zero_bias.hpp"

namespace {

using memfair::BaseClassifier;
using memfair::LabelGroupJoint;
using memfair::MemorizedComposition;
using memfair::Scenario;
using memfair::SolveMode;
using memfair::Vec;
using memfair::Verdict;
using nlohmann::ordered_json;

// Exit codes: 0 success / feasible / verification passed; 1 infeasible or a
// failed verification (including a failed constant-ratio screen); 2 file,
// parse, or validation problems; 3 degenerate or numerically unresolvable
// inputs.
constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::GuaranteedFeasible:
      return "guaranteed_feasible";
    case Verdict::GuaranteedInfeasible:
      return "guaranteed_infeasible";
    default:
      return "indeterminate";
  }
}

struct ErrorInfo {
  std::string type;
  int exit_code = kExitDegenerate;
};

ErrorInfo classify(const std::exception& e) {
  using namespace memfair;
  if (dynamic_cast<const cli::ParseError*>(&e)) return {"parse_error", kExitBadInput};
  if (dynamic_cast<const ScenarioInvalid*>(&e))
    return {"scenario_invalid", kExitBadInput};
  if (dynamic_cast<const RatioConditionFailed*>(&e))
    return {"ratio_condition_failed", kExitInfeasible};
  if (dynamic_cast<const DegenerateSlice*>(&e))
    return {"degenerate_slice", kExitDegenerate};
  if (dynamic_cast<const InconsistentMasses*>(&e))
    return {"inconsistent_masses", kExitDegenerate};
  if (dynamic_cast<const MissingPhi*>(&e))
    return {"missing_phi", kExitDegenerate};
  if (dynamic_cast<const DegenerateClassGroup*>(&e))
    return {"degenerate_class_group", kExitDegenerate};
  if (dynamic_cast<const DegenerateGroup*>(&e))
    return {"degenerate_group", kExitDegenerate};
  if (dynamic_cast<const NumericalBreakdown*>(&e))
    return {"numerical_breakdown", kExitDegenerate};
  if (dynamic_cast<const ZeroRateDivision*>(&e))
    return {"zero_rate_division", kExitDegenerate};
  if (dynamic_cast<const PerfectClassDegenerate*>(&e))
    return {"perfect_class_degenerate", kExitDegenerate};
  if (dynamic_cast<const DenominatorVanishes*>(&e))
    return {"denominator_vanishes", kExitDegenerate};
  if (dynamic_cast<const SolutionNotProbability*>(&e))
    return {"solution_not_probability", kExitDegenerate};
  return {"error", kExitDegenerate};
}

int finish(ordered_json& report, int code, const std::string& out_path) {
  report["exit_status"] = code;
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write report to '" << out_path << "'\n";
      return kExitDegenerate;
    }
    f << memfair::cli::emit_json(report);
  }
  return code;
}

struct LoadedFile {
  std::string path;
  std::string bytes;
  std::string digest;
  memfair::cli::PartialScenario partial;
};

LoadedFile load(const std::string& path, bool normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw memfair::cli::ParseError("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  LoadedFile file;
  file.path = path;
  file.bytes = buffer.str();
  file.digest = memfair::cli::fnv1a_hex(file.bytes);
  file.partial = memfair::cli::parse_scenario(file.bytes, normalize);
  return file;
}

ordered_json composition_json(const MemorizedComposition& memo) {
  return memfair::cli::composition_to_json(memo);
}

// ---------------------------------------------------------------------------
// gaps
// ---------------------------------------------------------------------------

int run_gaps(const std::string& path, bool verify, bool normalize,
             const std::string& out_path) {
  ordered_json report;
  report["schema_version"] = "1";
  report["command"] = "gaps";
  report["input"] = path;
  std::vector<std::string> diagnostics;
  try {
    LoadedFile file = load(path, normalize);
    report["input_digest"] = file.digest;
    report["options"] = ordered_json{{"verify", verify},
                                     {"normalize", normalize}};
    Scenario scenario = file.partial.full();
    memfair::GapReport closed = memfair::closed_form_gaps(scenario);
    memfair::PhiReport phi =
        memfair::derive_phi(scenario.joint, scenario.memo, scenario.base);
    memfair::GapReport base =
        memfair::base_gaps(scenario.base, phi.derived_plus, phi.derived_minus);

    const int K = scenario.K();
    std::cout << "scenario: K=" << K << ", p_D=" << fmt(scenario.memo.p_D)
              << ", group mass P(A=1)=" << fmt(scenario.joint.p_plus_total())
              << "\n";
    std::cout << "statistical parity gap by predicted class:\n";
    for (int y = 0; y < K; ++y)
      std::cout << "  class " << (y + 1) << ": " << fmt(closed.sp[y]) << "\n";
    std::cout << "equal opportunity gap by true class:\n";
    for (int y = 0; y < K; ++y)
      std::cout << "  class " << (y + 1) << ": " << fmt(closed.eqopp[y])
                << "\n";
    std::cout << "equalized odds gap (row = true class, column = predicted "
                 "class):\n";
    for (int y = 0; y < K; ++y)
      std::cout << "  class " << (y + 1) << ": " << fmt_vec(closed.eqodds[y])
                << "\n";
    std::cout << "prediction rates (derived): A=1 "
              << fmt_vec(phi.derived_plus) << ", A=0 "
              << fmt_vec(phi.derived_minus) << "\n";
    if (phi.supplied_discrepancy) {
      diagnostics.push_back(
          "supplied prediction rates differ from derived ones by " +
          fmt(*phi.supplied_discrepancy) +
          " (derived values are used for all gaps)");
      std::cout << "supplied rates max discrepancy vs derived: "
                << fmt(*phi.supplied_discrepancy) << "\n";
    }

    ordered_json results;
    results["K"] = K;
    results["p_D"] = scenario.memo.p_D;
    results["sp"] = closed.sp;
    results["eqopp"] = closed.eqopp;
    results["eqodds"] = closed.eqodds;
    results["base"] = ordered_json{
        {"sp", base.sp}, {"eqopp", base.eqopp}, {"eqodds", base.eqodds}};
    ordered_json phi_obj;
    phi_obj["derived_plus"] = phi.derived_plus;
    phi_obj["derived_minus"] = phi.derived_minus;
    phi_obj["supplied"] = phi.supplied_discrepancy.has_value();
    if (phi.supplied_discrepancy)
      phi_obj["max_discrepancy"] = *phi.supplied_discrepancy;
    results["phi"] = std::move(phi_obj);

    int code = kExitOk;
    if (verify) {
      memfair::GapReport oracle = memfair::gaps_by_enumeration(scenario);
      double worst = 0.0;
      for (int y = 0; y < K; ++y) {
        worst = std::max(worst, std::abs(closed.sp[y] - oracle.sp[y]));
        worst = std::max(worst, std::abs(closed.eqopp[y] - oracle.eqopp[y]));
        for (int yhat = 0; yhat < K; ++yhat)
          worst = std::max(
              worst, std::abs(closed.eqodds[y][yhat] - oracle.eqodds[y][yhat]));
      }
      const bool pass = worst <= 1e-10;
      results["verification"] =
          ordered_json{{"max_discrepancy", worst}, {"pass", pass}};
      std::cout << "verification against exact enumeration: max |difference| "
                << fmt(worst) << (pass ? " (PASS)" : " (FAIL)") << "\n";
      if (!pass) code = kExitInfeasible;
    }
    report["results"] = std::move(results);
    report["diagnostics"] = diagnostics;
    return finish(report, code, out_path);
  } catch (const std::exception& e) {
    const ErrorInfo info = classify(e);
    std::cerr << "error: " << e.what() << "\n";
    report["error"] =
        ordered_json{{"type", info.type}, {"message", e.what()}};
    report["diagnostics"] = diagnostics;
    return finish(report, info.exit_code, out_path);
  }
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

double resolve_p_D(const memfair::cli::PartialScenario& partial,
                   const std::optional<double>& pd_flag) {
  if (pd_flag) return *pd_flag;
  if (partial.memo) return partial.memo->p_D;
  throw memfair::cli::ParseError(
      "no memorized mass given: pass --pd or include a memorization block");
}

int run_solve(const std::string& metric, const std::string& path,
              const std::optional<double>& pd_flag, const std::string& mode_s,
              bool normalize, const std::string& out_path) {
  ordered_json report;
  report["schema_version"] = "1";
  report["command"] = "solve";
  report["metric"] = metric;
  report["input"] = path;
  std::vector<std::string> diagnostics;
  try {
    LoadedFile file = load(path, normalize);
    report["input_digest"] = file.digest;
    const SolveMode mode =
        (mode_s == "consistent") ? SolveMode::Consistent : SolveMode::Paper;
    const LabelGroupJoint& joint = file.partial.joint;
    const BaseClassifier& base = file.partial.base;

    ordered_json options;
    options["mode"] = mode_s;
    options["normalize"] = normalize;

    if (metric == "eqodds") {
      report["options"] = std::move(options);
      if (pd_flag)
        diagnostics.push_back(
            "--pd is ignored for eqodds: the required memorized mass is part "
            "of the solution");
      memfair::EqOddsSolution sol = memfair::solve_eqodds_zero(joint, base);
      std::cout << "metric: equalized odds (closed form)\n";
      std::cout << "required p_D: " << fmt(sol.p_D_required) << "\n";
      std::cout << "q:      " << fmt_vec(sol.q) << "\n";
      std::cout << "q_plus: " << fmt_vec(sol.q_plus) << "\n";
      std::cout << "complement-mass ratios r: " << fmt_vec(sol.r) << "\n";
      std::cout << "constant-ratio max deviation: "
                << fmt(sol.ratio_max_deviation) << "\n";
      std::cout << "oracle residual |gap|: " << fmt(sol.oracle_residual)
                << "\n";
      ordered_json results;
      results["status"] = "solved";
      results["p_D_required"] = sol.p_D_required;
      results["composition"] = composition_json(
          MemorizedComposition{sol.p_D_required, sol.q, sol.q_plus});
      results["r"] = sol.r;
      results["ratio_max_deviation"] = sol.ratio_max_deviation;
      results["oracle_residual"] = sol.oracle_residual;
      report["results"] = std::move(results);
      report["diagnostics"] = diagnostics;
      return finish(report, kExitOk, out_path);
    }

    const double p_D = resolve_p_D(file.partial, pd_flag);
    options["p_D"] = p_D;
    report["options"] = std::move(options);

    if (metric == "sp") {
      memfair::SpZeroResult sol =
          memfair::solve_sp_zero(joint, base, p_D, mode);
      std::cout << "metric: statistical parity, mode: " << mode_s
                << ", p_D = " << fmt(p_D) << "\n";
      if (sol.feas.status == memfair::linfeas::FeasStatus::Feasible) {
        std::cout << "status: feasible\n";
        std::cout << "q:      " << fmt_vec(sol.composition->q) << "\n";
        std::cout << "q_plus: " << fmt_vec(sol.composition->q_plus) << "\n";
        std::cout << "residual |gap|, rates fixed: "
                  << fmt(*sol.residual_fixed_phi) << "\n";
        if (sol.residual_recomputed_phi)
          std::cout << "residual |gap|, rates re-derived at the witness: "
                    << fmt(*sol.residual_recomputed_phi) << "\n";
        ordered_json results;
        results["status"] = "feasible";
        results["composition"] = composition_json(*sol.composition);
        results["residual_fixed_phi"] = *sol.residual_fixed_phi;
        if (sol.residual_recomputed_phi)
          results["residual_recomputed_phi"] = *sol.residual_recomputed_phi;
        results["phi_plus_used"] = sol.phi_plus_used;
        results["phi_minus_used"] = sol.phi_minus_used;
        report["results"] = std::move(results);
        report["diagnostics"] = diagnostics;
        return finish(report, kExitOk, out_path);
      }
      std::cout << "status: infeasible\n";
      std::cout << "certificate multipliers (equalities first, then "
                   "inequalities): "
                << fmt_vec(sol.feas.certificate) << "\n";
      ordered_json results;
      results["status"] = "infeasible";
      results["certificate"] = sol.feas.certificate;
      report["results"] = std::move(results);
      report["diagnostics"] = diagnostics;
      return finish(report, kExitInfeasible, out_path);
    }

    if (metric != "eqopp")
      throw memfair::cli::ParseError("unknown metric '" + metric + "'");
    memfair::EqOppZeroResult sol =
        memfair::solve_eqopp_zero(joint, base, p_D, mode);
    std::cout << "metric: equal opportunity, mode: " << mode_s
              << ", p_D = " << fmt(p_D) << "\n";
    if (sol.feas.status == memfair::linfeas::FeasStatus::Feasible) {
      std::cout << "status: feasible\n";
      std::cout << "lambda: " << fmt_vec(sol.lambda) << "\n";
      std::cout << "q:      " << fmt_vec(sol.composition->q) << "\n";
      std::cout << "q_plus: " << fmt_vec(sol.composition->q_plus) << "\n";
      std::cout << "residual |gap|: " << fmt(*sol.residual) << "\n";
      ordered_json results;
      results["status"] = "feasible";
      results["lambda"] = sol.lambda;
      results["composition"] = composition_json(*sol.composition);
      results["residual"] = *sol.residual;
      report["results"] = std::move(results);
      report["diagnostics"] = diagnostics;
      return finish(report, kExitOk, out_path);
    }
    std::cout << "status: infeasible\n";
    std::cout << "certificate multipliers (equality first, then cap rows): "
              << fmt_vec(sol.feas.certificate) << "\n";
    ordered_json results;
    results["status"] = "infeasible";
    results["certificate"] = sol.feas.certificate;
    report["results"] = std::move(results);
    report["diagnostics"] = diagnostics;
    return finish(report, kExitInfeasible, out_path);
  } catch (const std::exception& e) {
    const ErrorInfo info = classify(e);
    std::cerr << "error: " << e.what() << "\n";
    report["error"] =
        ordered_json{{"type", info.type}, {"message", e.what()}};
    report["diagnostics"] = diagnostics;
    return finish(report, info.exit_code, out_path);
  }
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

int run_bounds(const std::string& metric, const std::string& path,
               const std::optional<double>& pd_flag, bool normalize,
               const std::string& out_path) {
  ordered_json report;
  report["schema_version"] = "1";
  report["command"] = "bounds";
  report["metric"] = metric;
  report["input"] = path;
  std::vector<std::string> diagnostics;
  try {
    LoadedFile file = load(path, normalize);
    report["input_digest"] = file.digest;
    const LabelGroupJoint& joint = file.partial.joint;
    const BaseClassifier& base = file.partial.base;

    std::optional<double> p_D = pd_flag;
    if (!p_D && file.partial.memo) p_D = file.partial.memo->p_D;

    ordered_json options;
    options["normalize"] = normalize;
    if (p_D) options["p_D"] = *p_D;
    report["options"] = std::move(options);

    memfair::BoundsReport bounds;
    if (metric == "sp") {
      memfair::ResolvedPhi phi = memfair::resolve_solver_phi(joint, base);
      if (!phi.supplied)
        diagnostics.push_back(
            "prediction rates derived from the confusion matrices under "
            "full-population label conditionals");
      bounds = memfair::sp_bounds(joint, phi.phi_plus, phi.phi_minus);
      std::cout << "metric: statistical parity\n";
    } else if (metric == "eqopp") {
      bounds = memfair::eqopp_bounds(joint, base);
      std::cout << "metric: equal opportunity\n";
    } else {
      throw memfair::cli::ParseError("unknown metric '" + metric + "'");
    }

    std::cout << "plus-oriented:  sufficient-side " <<
        fmt(bounds.oriented_plus.sufficient_pD) << ", necessary-side "
              << fmt(bounds.oriented_plus.necessary_pD) << "\n";
    std::cout << "minus-oriented: sufficient-side "
              << fmt(bounds.oriented_minus.sufficient_pD)
              << ", necessary-side " << fmt(bounds.oriented_minus.necessary_pD)
              << "\n";
    ordered_json results;
    results["oriented_plus"] =
        ordered_json{{"sufficient_pD", bounds.oriented_plus.sufficient_pD},
                     {"necessary_pD", bounds.oriented_plus.necessary_pD}};
    results["oriented_minus"] =
        ordered_json{{"sufficient_pD", bounds.oriented_minus.sufficient_pD},
                     {"necessary_pD", bounds.oriented_minus.necessary_pD}};
    if (bounds.exact_sum_plus) {
      results["exact_sum_plus"] = *bounds.exact_sum_plus;
      results["exact_sum_minus"] = *bounds.exact_sum_minus;
      results["exact_threshold"] = *bounds.exact_threshold;
      std::cout << "exact sums: plus-oriented " << fmt(*bounds.exact_sum_plus)
                << ", minus-oriented " << fmt(*bounds.exact_sum_minus) << "\n";
      std::cout << "exact feasibility threshold: "
                << fmt(*bounds.exact_threshold) << "\n";
    } else if (metric == "sp") {
      std::cout << "feasible whenever p_D >= "
                << fmt(std::min(bounds.oriented_plus.sufficient_pD,
                                bounds.oriented_minus.sufficient_pD))
                << " (either orientation suffices)\n";
    }
    if (p_D) {
      const Verdict v = bounds.verdict(*p_D);
      results["p_D"] = *p_D;
      results["verdict"] = verdict_name(v);
      std::cout << "verdict at p_D = " << fmt(*p_D) << ": "
                << verdict_name(v) << "\n";
    }
    report["results"] = std::move(results);
    report["diagnostics"] = diagnostics;
    return finish(report, kExitOk, out_path);
  } catch (const std::exception& e) {
    const ErrorInfo info = classify(e);
    std::cerr << "error: " << e.what() << "\n";
    report["error"] =
        ordered_json{{"type", info.type}, {"message", e.what()}};
    report["diagnostics"] = diagnostics;
    return finish(report, info.exit_code, out_path);
  }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int run_simulate(const std::string& path, std::int64_t samples,
                 std::uint64_t seed, double z, bool normalize,
                 const std::string& out_path) {
  ordered_json report;
  report["schema_version"] = "1";
  report["command"] = "simulate";
  report["input"] = path;
  std::vector<std::string> diagnostics;
  try {
    LoadedFile file = load(path, normalize);
    report["input_digest"] = file.digest;
    report["options"] = ordered_json{{"samples", samples},
                                     {"seed", seed},
                                     {"z", z},
                                     {"normalize", normalize}};
    Scenario scenario = file.partial.full();
    memfair::sim::McReport mc = memfair::sim::mc_verify(scenario, samples,
                                                        seed, z);
    std::cout << "samples: " << samples << ", seed: " << seed
              << ", z: " << fmt(z) << "\n";
    std::cout << "checked " << mc.checked << " entries, " << mc.failed
              << " failed\n";
    for (const memfair::sim::McEntry& entry : mc.entries) {
      if (entry.pass) continue;
      std::cout << "  FAIL " << entry.metric;
      if (entry.metric != "sp") std::cout << " y=" << (entry.y + 1);
      if (entry.metric != "eqopp")
        std::cout << " yhat=" << (entry.yhat + 1);
      if (entry.missing)
        std::cout << ": no samples in the conditioning event\n";
      else
        std::cout << ": closed " << fmt(entry.closed) << " vs empirical "
                  << fmt(entry.empirical) << " (se " << fmt(entry.se)
                  << ")\n";
    }
    std::cout << (mc.pass ? "PASS" : "FAIL") << "\n";

    ordered_json entries = ordered_json::array();
    for (const memfair::sim::McEntry& entry : mc.entries) {
      ordered_json e;
      e["metric"] = entry.metric;
      e["y"] = entry.y;
      e["yhat"] = entry.yhat;
      e["closed"] = entry.closed;
      e["empirical"] = entry.empirical;
      e["se"] = entry.se;
      e["missing"] = entry.missing;
      e["pass"] = entry.pass;
      entries.push_back(std::move(e));
    }
    ordered_json results;
    results["pass"] = mc.pass;
    results["checked"] = mc.checked;
    results["failed"] = mc.failed;
    results["n"] = mc.n;
    results["seed"] = mc.seed;
    results["z"] = mc.z;
    results["entries"] = std::move(entries);
    report["results"] = std::move(results);
    report["diagnostics"] = diagnostics;
    return finish(report, mc.pass ? kExitOk : kExitInfeasible, out_path);
  } catch (const std::exception& e) {
    const ErrorInfo info = classify(e);
    std::cerr << "error: " << e.what() << "\n";
    report["error"] =
        ordered_json{{"type", info.type}, {"message", e.what()}};
    report["diagnostics"] = diagnostics;
    return finish(report, info.exit_code, out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "memfair: how memorizing a subpopulation shifts the fairness gaps of a "
      "multi-class classifier"};
  app.require_subcommand(1);

  std::string file, out_path, metric, mode = "paper";
  bool verify = false, normalize = false;
  std::optional<double> pd_flag;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
  double z = 5.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "scenario JSON file")->required();
    cmd->add_flag("--normalize", normalize,
                  "rescale each distribution block to sum one before "
                  "validation");
    cmd->add_option("--out", out_path, "write the machine-readable report "
                                       "to this path");
  };

  CLI::App* gaps_cmd = app.add_subcommand(
      "gaps", "closed-form fairness gaps of a full scenario");
  add_common(gaps_cmd);
  gaps_cmd->add_flag("--verify", verify,
                     "cross-check against exact enumeration of the joint "
                     "table");

  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "find a memorized-set composition that zeroes one metric");
  solve_cmd->add_option("metric", metric, "sp | eqopp | eqodds")
      ->required()
      ->check(CLI::IsMember({"sp", "eqopp", "eqodds"}));
  add_common(solve_cmd);
  solve_cmd->add_option("--pd", pd_flag,
                        "memorized total mass (overrides the file's value)");
  solve_cmd->add_option("--mode", mode, "paper | consistent")
      ->check(CLI::IsMember({"paper", "consistent"}));

  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "feasibility thresholds on the memorized mass");
  bounds_cmd->add_option("metric", metric, "sp | eqopp")
      ->required()
      ->check(CLI::IsMember({"sp", "eqopp"}));
  add_common(bounds_cmd);
  bounds_cmd->add_option("--pd", pd_flag,
                         "memorized mass to pass a verdict on");

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo check of the closed forms");
  add_common(sim_cmd);
  sim_cmd->add_option("--samples", samples, "number of draws")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "PRNG seed");
  sim_cmd->add_option("--z", z, "acceptance band in standard errors")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadInput;
  }

  if (gaps_cmd->parsed())
    return run_gaps(file, verify, normalize, out_path);
  if (solve_cmd->parsed())
    return run_solve(metric, file, pd_flag, mode, normalize, out_path);
  if (bounds_cmd->parsed())
    return run_bounds(metric, file, pd_flag, normalize, out_path);
  if (sim_cmd->parsed())
    return run_simulate(file, samples, seed, z, normalize, out_path);
  return kExitBadInput;
}
