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
#include "memfair/scenario_io.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "memfair/errors.hpp"
#include "memfair/population.hpp"

namespace memfair {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

Scenario balanced_odds_scenario() {
  Scenario s;
  s.joint.K = 2;
  s.joint.p_plus = {0.3, 0.2};
  s.joint.p_minus = {0.2, 0.3};
  s.base.C_plus = {{0.8, 0.2}, {0.3, 0.7}};
  s.base.C_minus = {{0.9, 0.1}, {0.4, 0.6}};
  s.memo = MemorizedComposition{
      0.76,
      {0.56578947368421051, 0.43421052631578949},
      {0.35526315789473684, 0.15789473684210525}};
  return s;
}

const char* kScenarioWithoutMemo = R"json({
  "K": 2,
  "population": {"p_plus": [0.25, 0.25], "p_minus": [0.25, 0.25]},
  "base_classifier": {
    "C_plus": [[0.4, 0.6], [0.4, 0.6]],
    "C_minus": [[0.6, 0.4], [0.6, 0.4]],
    "phi_plus": [0.4, 0.6],
    "phi_minus": [0.6, 0.4]
  }
})json";

// Every distribution block scaled away from unit mass; --normalize must
// recover the symmetric worked scenario.
const char* kScaledScenario = R"json({
  "K": 2,
  "population": {"p_plus": [0.5, 0.5], "p_minus": [0.5, 0.5]},
  "base_classifier": {
    "C_plus": [[0.8, 1.2], [0.8, 1.2]],
    "C_minus": [[1.2, 0.8], [1.2, 0.8]],
    "phi_plus": [2.0, 3.0],
    "phi_minus": [3.0, 2.0]
  },
  "memorization": {"p_D": 0.3, "q": [2.0, 2.0], "q_plus": [1.0, 1.0]}
})json";

// ---------------------------------------------------------------------------
// Scenario document parsing and emission
// ---------------------------------------------------------------------------

TEST(ScenarioIo, EmitParseRoundTripIsBitwise) {
  const Scenario s = balanced_odds_scenario();
  const std::string text = cli::emit_json(cli::scenario_to_json(s));
  cli::PartialScenario back = cli::parse_scenario(text, false);
  ASSERT_TRUE(back.memo.has_value());
  EXPECT_EQ(back.joint.K, 2);
  for (int y = 0; y < 2; ++y) {
    EXPECT_EQ(back.joint.p_plus[y], s.joint.p_plus[y]);
    EXPECT_EQ(back.joint.p_minus[y], s.joint.p_minus[y]);
    EXPECT_EQ(back.memo->q[y], s.memo.q[y]);
    EXPECT_EQ(back.memo->q_plus[y], s.memo.q_plus[y]);
    for (int yhat = 0; yhat < 2; ++yhat) {
      EXPECT_EQ(back.base.C_plus[y][yhat], s.base.C_plus[y][yhat]);
      EXPECT_EQ(back.base.C_minus[y][yhat], s.base.C_minus[y][yhat]);
    }
  }
  EXPECT_EQ(back.memo->p_D, s.memo.p_D);
}

TEST(ScenarioIo, RejectsUnknownFieldsInEveryBlock) {
  const Scenario s = balanced_odds_scenario();
  for (const char* block :
       {"", "population", "base_classifier", "memorization"}) {
    ordered_json doc = cli::scenario_to_json(s);
    if (std::string(block).empty()) {
      doc["surprise"] = 1;
    } else {
      doc[block]["surprise"] = 1;
    }
    EXPECT_THROW(cli::parse_scenario(cli::emit_json(doc), false),
                 cli::ParseError)
        << "block '" << block << "'";
  }
}

TEST(ScenarioIo, ValidatesClassCount) {
  const Scenario s = balanced_odds_scenario();
  ordered_json doc = cli::scenario_to_json(s);
  doc["K"] = 2.5;
  EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  doc["K"] = 1;
  EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  doc["K"] = 600;
  EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
}

TEST(ScenarioIo, RejectsWrongDimensions) {
  const Scenario s = balanced_odds_scenario();
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc["population"]["p_plus"] = {0.1, 0.2, 0.2};
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc["base_classifier"]["C_plus"][0] = {0.5, 0.25, 0.25};
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc["memorization"]["q"] = {1.0};
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
}

TEST(ScenarioIo, RequiresMandatoryBlocks) {
  const Scenario s = balanced_odds_scenario();
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc.erase("population");
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc["base_classifier"].erase("C_minus");
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
  {
    ordered_json doc = cli::scenario_to_json(s);
    doc["memorization"].erase("q_plus");
    EXPECT_THROW(cli::parse_scenario(doc.dump(), false), cli::ParseError);
  }
  EXPECT_THROW(cli::parse_scenario("[1,2]", false), cli::ParseError);
  EXPECT_THROW(cli::parse_scenario("not json", false), cli::ParseError);
}

TEST(ScenarioIo, NormalizeRescalesEachDistributionBlock) {
  cli::PartialScenario p = cli::parse_scenario(kScaledScenario, true);
  EXPECT_NEAR(p.joint.p_plus[0], 0.25, 1e-15);
  EXPECT_NEAR(p.joint.p_minus[1], 0.25, 1e-15);
  EXPECT_NEAR(p.base.C_plus[0][0], 0.4, 1e-15);
  EXPECT_NEAR(p.base.C_plus[0][1], 0.6, 1e-15);
  EXPECT_NEAR(p.base.C_minus[1][0], 0.6, 1e-15);
  EXPECT_NEAR((*p.base.phi_plus)[0], 0.4, 1e-15);
  EXPECT_NEAR((*p.base.phi_minus)[0], 0.6, 1e-15);
  ASSERT_TRUE(p.memo.has_value());
  EXPECT_NEAR(p.memo->q[0], 0.5, 1e-15);
  // q_plus rescales by the same factor as q, keeping the shares aligned.
  EXPECT_NEAR(p.memo->q_plus[0], 0.25, 1e-15);
  EXPECT_EQ(p.memo->p_D, 0.3);
  EXPECT_TRUE(validate(p.full(), Tier::Consistent).passed);
}

TEST(ScenarioIo, WithoutNormalizeTheScaledFileFailsValidation) {
  cli::PartialScenario p = cli::parse_scenario(kScaledScenario, false);
  ValidationReport report = validate_inputs(p.joint, p.base, Tier::Basic);
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.first_failure(), "p_total_mass_one");
}

TEST(ScenarioIo, EmitterIsDeterministicWithTrailingNewline) {
  const Scenario s = balanced_odds_scenario();
  const std::string a = cli::emit_json(cli::scenario_to_json(s));
  const std::string b = cli::emit_json(cli::scenario_to_json(s));
  EXPECT_EQ(a, b);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a.back(), '\n');
}

TEST(ScenarioIo, EmitterRoundTripsDoublesExactly) {
  for (double x : {1.0 / 3.0, 0.1, 0.43 / 0.76, 2.2250738585072014e-308,
                   123456789.123456789}) {
    ordered_json doc;
    doc["v"] = x;
    const json back = json::parse(cli::emit_json(doc));
    EXPECT_EQ(back["v"].get<double>(), x);
  }
}

TEST(ScenarioIo, EmitterRejectsNonFiniteNumbers) {
  ordered_json doc;
  doc["v"] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(cli::emit_json(doc), Error);
}

TEST(ScenarioIo, DigestKnownValues) {
  EXPECT_EQ(cli::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(cli::fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(ScenarioIo, CompositionJsonRoundTrip) {
  const MemorizedComposition memo{0.76,
                                  {0.56578947368421051, 0.43421052631578949},
                                  {0.35526315789473684, 0.15789473684210525}};
  const ordered_json obj = cli::composition_to_json(memo);
  const MemorizedComposition back = cli::composition_from_json(obj, 2);
  EXPECT_EQ(back.p_D, memo.p_D);
  EXPECT_EQ(back.q, memo.q);
  EXPECT_EQ(back.q_plus, memo.q_plus);
  EXPECT_THROW(cli::composition_from_json(obj, 3), cli::ParseError);
}

TEST(ScenarioIo, FullRequiresTheMemorizationBlock) {
  cli::PartialScenario p = cli::parse_scenario(kScenarioWithoutMemo, false);
  EXPECT_FALSE(p.memo.has_value());
  try {
    p.full();
    FAIL() << "expected a named invariant failure";
  } catch (const ScenarioInvalid& e) {
    EXPECT_EQ(e.invariant(), "memorization_present");
  }
}

// ---------------------------------------------------------------------------
// Command-line binary, exercised as a subprocess
// ---------------------------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int invocation = 0;
  const std::string tag = std::to_string(++invocation);
  const std::string out_path = ::testing::TempDir() + "cli_stdout_" + tag;
  const std::string err_path = ::testing::TempDir() + "cli_stderr_" + tag;
  const std::string command = std::string(MEMFAIR_BIN) + " " + args + " >" +
                              out_path + " 2>" + err_path;
  const int raw = std::system(command.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(MEMFAIR_SCENARIO_DIR) + "/" + name;
}

// Runs the CLI with --out and parses the machine-readable report.
json run_report(const std::string& args, int expected_exit) {
  static int invocation = 0;
  const std::string report_path =
      ::testing::TempDir() + "cli_report_" + std::to_string(++invocation);
  CliResult r = run_cli(args + " --out " + report_path);
  EXPECT_EQ(r.exit_code, expected_exit) << "stderr: " << r.err;
  const std::string text = slurp(report_path);
  EXPECT_FALSE(text.empty()) << "no report written for: " << args;
  return json::parse(text);
}

TEST(Cli, GapsVerifyAgreesWithEnumeration) {
  json report = run_report("gaps " + fixture("sp_worked.json") + " --verify", 0);
  EXPECT_EQ(report["schema_version"], "1");
  EXPECT_EQ(report["command"], "gaps");
  EXPECT_EQ(report["exit_status"], 0);
  EXPECT_TRUE(report["results"]["verification"]["pass"].get<bool>());
  EXPECT_LT(report["results"]["verification"]["max_discrepancy"].get<double>(),
            1e-10);
  EXPECT_NEAR(report["results"]["sp"][0].get<double>(), -0.14, 1e-12);
  EXPECT_NEAR(report["results"]["sp"][1].get<double>(), 0.14, 1e-12);
}

TEST(Cli, GapsReportCarriesInputDigest) {
  const std::string path = fixture("eqopp_worked.json");
  json report = run_report("gaps " + path, 0);
  EXPECT_EQ(report["input"], path);
  EXPECT_EQ(report["input_digest"], cli::fnv1a_hex(slurp(path)));
  EXPECT_EQ(report["results"]["K"], 2);
  EXPECT_NEAR(report["results"]["p_D"].get<double>(), 0.2, 1e-15);
  EXPECT_NEAR(report["results"]["eqopp"][0].get<double>(), 1.0 / 30.0, 1e-12);
  EXPECT_NEAR(report["results"]["eqopp"][1].get<double>(), -0.05, 1e-12);
}

TEST(Cli, SolveEqOppReportsInfeasibilityWithCertificate) {
  json report = run_report(
      "solve eqopp " + fixture("eqodds_worked.json") + " --pd 0.2", 1);
  EXPECT_EQ(report["exit_status"], 1);
  EXPECT_EQ(report["results"]["status"], "infeasible");
  EXPECT_EQ(report["results"]["certificate"].size(), 5u);
}

TEST(Cli, SolveEqOppFindsWitnessAboveThreshold) {
  json report = run_report(
      "solve eqopp " + fixture("eqodds_worked.json") + " --pd 0.25", 0);
  EXPECT_EQ(report["results"]["status"], "feasible");
  EXPECT_LT(report["results"]["residual"].get<double>(), 1e-8);
  EXPECT_EQ(report["results"]["lambda"].size(), 2u);
  EXPECT_NEAR(report["results"]["composition"]["p_D"].get<double>(), 0.25,
              1e-15);
}

TEST(Cli, SolveSpTakesTheMassFromTheFile) {
  json report = run_report("solve sp " + fixture("sp_worked.json"), 0);
  EXPECT_EQ(report["results"]["status"], "feasible");
  EXPECT_NEAR(report["results"]["composition"]["q"][0].get<double>(),
              4.0 / 15.0, 1e-8);
  EXPECT_LT(report["results"]["residual_fixed_phi"].get<double>(), 1e-8);
}

TEST(Cli, SolveEqOddsIgnoresTheMassFlag) {
  json report = run_report(
      "solve eqodds " + fixture("eqodds_worked.json") + " --pd 0.5", 0);
  EXPECT_EQ(report["results"]["status"], "solved");
  EXPECT_NEAR(report["results"]["p_D_required"].get<double>(), 0.76, 1e-12);
  EXPECT_NEAR(report["results"]["r"][0].get<double>(), 8.0 / 9.0, 1e-12);
  EXPECT_LT(report["results"]["oracle_residual"].get<double>(), 1e-10);
  bool mentioned = false;
  for (const auto& d : report["diagnostics"])
    if (d.get<std::string>().find("--pd") != std::string::npos)
      mentioned = true;
  EXPECT_TRUE(mentioned);
}

TEST(Cli, SolveWithoutAnyMassFailsButFlagRescues) {
  const std::string path =
      write_temp("memoless_scenario.json", kScenarioWithoutMemo);
  json failed = run_report("solve sp " + path, 2);
  EXPECT_EQ(failed["error"]["type"], "parse_error");
  EXPECT_NE(failed["error"]["message"].get<std::string>().find("--pd"),
            std::string::npos);

  json ok = run_report("solve sp " + path + " --pd 0.3", 0);
  EXPECT_EQ(ok["results"]["status"], "feasible");
}

TEST(Cli, BoundsReportsThresholdsAndAlwaysExitsZero) {
  json feasible = run_report("bounds eqopp " + fixture("eqodds_worked.json"), 0);
  EXPECT_NEAR(feasible["results"]["exact_threshold"].get<double>(), 0.225,
              1e-12);
  EXPECT_NEAR(feasible["results"]["exact_sum_plus"].get<double>(), -0.125,
              1e-12);
  EXPECT_NEAR(feasible["results"]["exact_sum_minus"].get<double>(),
              1.0 / 12.0, 1e-12);
  // The file's own memorized mass 0.76 clears the threshold.
  EXPECT_EQ(feasible["results"]["verdict"], "guaranteed_feasible");

  json infeasible = run_report(
      "bounds eqopp " + fixture("eqodds_worked.json") + " --pd 0.05", 0);
  EXPECT_EQ(infeasible["results"]["verdict"], "guaranteed_infeasible");
  EXPECT_EQ(infeasible["exit_status"], 0);

  json open = run_report(
      "bounds eqopp " + fixture("eqodds_worked.json") + " --pd 0.2", 0);
  EXPECT_EQ(open["results"]["verdict"], "indeterminate");
}

TEST(Cli, BoundsSpWorkedThreshold) {
  json report = run_report("bounds sp " + fixture("sp_worked.json"), 0);
  EXPECT_NEAR(
      report["results"]["oriented_plus"]["sufficient_pD"].get<double>(),
      1.0 / 6.0, 1e-12);
  EXPECT_NEAR(
      report["results"]["oriented_minus"]["sufficient_pD"].get<double>(),
      1.0 / 6.0, 1e-12);
  EXPECT_EQ(report["results"]["verdict"], "guaranteed_feasible");
}

TEST(Cli, SimulatePassesOnTheWorkedScenario) {
  json report = run_report("simulate " + fixture("eqodds_worked.json") +
                               " --samples 200000 --seed 5 --z 5",
                           0);
  EXPECT_TRUE(report["results"]["pass"].get<bool>());
  EXPECT_EQ(report["results"]["checked"], 8);
  EXPECT_EQ(report["results"]["failed"], 0);
  EXPECT_EQ(report["results"]["entries"].size(), 8u);
}

TEST(Cli, FullyMemorizedCellGetsItsOwnExitCode) {
  json report =
      run_report("gaps " + fixture("degenerate_cell.json") + " --verify", 3);
  EXPECT_EQ(report["error"]["type"], "degenerate_slice");
  EXPECT_EQ(report["exit_status"], 3);
}

TEST(Cli, MissingFileIsAnInputError) {
  CliResult r = run_cli("gaps /does/not/exist.json");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, UnknownFieldIsAnInputError) {
  std::string doc(kScenarioWithoutMemo);
  doc.insert(doc.rfind('}'), ", \"extra\": 1\n");
  const std::string path = write_temp("unknown_field.json", doc);
  json report = run_report("gaps " + path, 2);
  EXPECT_EQ(report["error"]["type"], "parse_error");
}

TEST(Cli, GapsNeedsTheMemorizationBlock) {
  const std::string path =
      write_temp("memoless_for_gaps.json", kScenarioWithoutMemo);
  json report = run_report("gaps " + path, 2);
  EXPECT_EQ(report["error"]["type"], "scenario_invalid");
}

TEST(Cli, NormalizeFlagRescalesTheDocument) {
  const std::string path = write_temp("scaled_scenario.json", kScaledScenario);
  json rejected = run_report("gaps " + path, 2);
  EXPECT_EQ(rejected["error"]["type"], "scenario_invalid");

  json accepted = run_report("gaps " + path + " --normalize", 0);
  EXPECT_NEAR(accepted["results"]["sp"][0].get<double>(), -0.14, 1e-12);
}

TEST(Cli, ReportFilesAreByteIdenticalAcrossReruns) {
  const std::string a = ::testing::TempDir() + "rerun_a.json";
  const std::string b = ::testing::TempDir() + "rerun_b.json";
  CliResult ra =
      run_cli("gaps " + fixture("eqodds_worked.json") + " --out " + a);
  CliResult rb =
      run_cli("gaps " + fixture("eqodds_worked.json") + " --out " + b);
  EXPECT_EQ(ra.exit_code, 0);
  EXPECT_EQ(rb.exit_code, 0);
  const std::string bytes_a = slurp(a);
  EXPECT_FALSE(bytes_a.empty());
  EXPECT_EQ(bytes_a, slurp(b));
}

TEST(Cli, HelpExitsCleanly) {
  CliResult r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("gaps"), std::string::npos);
}

TEST(Cli, UnknownMetricIsAUsageError) {
  CliResult r = run_cli("solve sideways " + fixture("sp_worked.json"));
  EXPECT_EQ(r.exit_code, 2);
}

}  // namespace
}  // namespace memfair
