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
#include "memfair/population.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace memfair {

namespace {

double vec_sum(const Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Appends one check result; returns passed so call sites can chain.
bool add_check(ValidationReport& report, const std::string& name, bool passed,
               const std::string& detail) {
  report.checks.push_back({name, passed, passed ? std::string() : detail});
  if (!passed) report.passed = false;
  return passed;
}

bool dims_ok(const LabelGroupJoint& joint) {
  return joint.K >= 2 && static_cast<int>(joint.p_plus.size()) == joint.K &&
         static_cast<int>(joint.p_minus.size()) == joint.K;
}

bool matrix_dims_ok(const Mat& m, int K) {
  if (static_cast<int>(m.size()) != K) return false;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != K) return false;
  return true;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_simplex_vector(ValidationReport& report, const std::string& name,
                          const Vec& v) {
  double lowest = 0.0;
  for (double x : v) lowest = std::min(lowest, x);
  add_check(report, name + "_nonnegative", lowest >= -kValidationTol,
            "smallest entry " + fmt(lowest));
  double s = vec_sum(v);
  add_check(report, name + "_sum_one", std::abs(s - 1.0) <= kValidationTol,
            "sum " + fmt(s));
}

void check_row_stochastic(ValidationReport& report, const std::string& name,
                          const Mat& m) {
  double lowest = 0.0;
  double worst_row_err = 0.0;
  for (const auto& row : m) {
    for (double x : row) lowest = std::min(lowest, x);
    worst_row_err = std::max(worst_row_err, std::abs(vec_sum(row) - 1.0));
  }
  add_check(report, name + "_nonnegative", lowest >= -kValidationTol,
            "smallest entry " + fmt(lowest));
  add_check(report, name + "_rows_sum_one", worst_row_err <= kValidationTol,
            "worst row-sum deviation " + fmt(worst_row_err));
}

void check_population_and_base(ValidationReport& report,
                               const LabelGroupJoint& joint,
                               const BaseClassifier& base, Tier tier) {
  bool dims = dims_ok(joint) && matrix_dims_ok(base.C_plus, joint.K) &&
              matrix_dims_ok(base.C_minus, joint.K) &&
              (!base.phi_plus ||
               static_cast<int>(base.phi_plus->size()) == joint.K) &&
              (!base.phi_minus ||
               static_cast<int>(base.phi_minus->size()) == joint.K);
  if (!add_check(report, "dimensions", dims,
                 "class count and field shapes must agree (K >= 2)")) {
    return;  // further indexing would be out of bounds
  }
  bool finite = all_finite(joint.p_plus) && all_finite(joint.p_minus);
  for (const auto& row : base.C_plus) finite = finite && all_finite(row);
  for (const auto& row : base.C_minus) finite = finite && all_finite(row);
  if (base.phi_plus) finite = finite && all_finite(*base.phi_plus);
  if (base.phi_minus) finite = finite && all_finite(*base.phi_minus);
  if (!add_check(report, "finite_entries", finite,
                 "all entries must be finite")) {
    return;
  }

  double lowest = 0.0;
  for (double x : joint.p_plus) lowest = std::min(lowest, x);
  for (double x : joint.p_minus) lowest = std::min(lowest, x);
  add_check(report, "p_nonnegative", lowest >= -kValidationTol,
            "smallest entry " + fmt(lowest));
  double total = vec_sum(joint.p_plus) + vec_sum(joint.p_minus);
  add_check(report, "p_total_mass_one", std::abs(total - 1.0) <= kValidationTol,
            "total mass " + fmt(total));
  double p_plus = vec_sum(joint.p_plus);
  add_check(report, "p_group_open_interval", p_plus > 0.0 && p_plus < 1.0,
            "group total " + fmt(p_plus) + " must lie strictly in (0, 1)");

  check_row_stochastic(report, "c_plus", base.C_plus);
  check_row_stochastic(report, "c_minus", base.C_minus);
  if (base.phi_plus) check_simplex_vector(report, "phi_plus", *base.phi_plus);
  if (base.phi_minus) check_simplex_vector(report, "phi_minus", *base.phi_minus);

  if (tier == Tier::Strict || tier == Tier::Consistent) {
    int bad = -1;
    for (int y = 0; y < joint.K && bad < 0; ++y)
      if (joint.p_plus[y] <= 0.0 || joint.p_minus[y] <= 0.0) bad = y;
    add_check(report, "class_group_mass_positive", bad < 0,
              bad < 0 ? "" : "label " + std::to_string(bad) +
                                 " has a zero-mass (label, group) cell");
  }
}

}  // namespace

double LabelGroupJoint::p_plus_total() const { return vec_sum(p_plus); }

double MemorizedComposition::q_plus_total() const { return vec_sum(q_plus); }

double JointDistribution::total_mass() const { return vec_sum(table); }

std::string ValidationReport::first_failure() const {
  for (const auto& check : checks)
    if (!check.passed) return check.name;
  return {};
}

ValidationReport validate_inputs(const LabelGroupJoint& joint,
                                 const BaseClassifier& base, Tier tier) {
  ValidationReport report;
  report.passed = true;
  check_population_and_base(report, joint, base, tier);
  return report;
}

ValidationReport validate(const Scenario& scenario, Tier tier) {
  ValidationReport report;
  report.passed = true;
  const auto& joint = scenario.joint;
  const auto& memo = scenario.memo;

  bool memo_dims = static_cast<int>(memo.q.size()) == joint.K &&
                   static_cast<int>(memo.q_plus.size()) == joint.K;
  check_population_and_base(report, joint, scenario.base, tier);
  if (!report.checks.empty() && !report.checks.front().passed) return report;
  if (!add_check(report, "memo_dimensions", memo_dims,
                 "q and q_plus must have length K")) {
    return report;
  }
  if (!add_check(report, "memo_finite",
                 std::isfinite(memo.p_D) && all_finite(memo.q) &&
                     all_finite(memo.q_plus),
                 "all entries must be finite")) {
    return report;
  }

  add_check(report, "p_D_open_interval", memo.p_D > 0.0 && memo.p_D < 1.0,
            "p_D " + fmt(memo.p_D) + " must lie strictly in (0, 1)");
  check_simplex_vector(report, "q", memo.q);
  bool within = true;
  double worst = 0.0;
  for (int y = 0; y < joint.K; ++y) {
    double below = -memo.q_plus[y];
    double above = memo.q_plus[y] - memo.q[y];
    worst = std::max(worst, std::max(below, above));
    within = within && below <= kValidationTol && above <= kValidationTol;
  }
  add_check(report, "q_plus_within_q", within,
            "worst violation of 0 <= q_plus[y] <= q[y]: " + fmt(worst));

  if (tier == Tier::Consistent) {
    double worst_plus = 0.0, worst_minus = 0.0;
    for (int y = 0; y < joint.K; ++y) {
      worst_plus = std::max(worst_plus,
                            memo.p_D * memo.q_plus[y] - joint.p_plus[y]);
      worst_minus = std::max(
          worst_minus, memo.p_D * (memo.q[y] - memo.q_plus[y]) -
                           joint.p_minus[y]);
    }
    add_check(report, "memorized_mass_plus", worst_plus <= kValidationTol,
              "memorized mass exceeds population mass in a (label, A=1) cell "
              "by " +
                  fmt(worst_plus));
    add_check(report, "memorized_mass_minus", worst_minus <= kValidationTol,
              "memorized mass exceeds population mass in a (label, A=0) cell "
              "by " +
                  fmt(worst_minus));
  }
  return report;
}

void require_valid(const ValidationReport& report) {
  if (report.passed) return;
  for (const auto& check : report.checks) {
    if (!check.passed) throw ScenarioInvalid(check.name, check.detail);
  }
  throw ScenarioInvalid("unknown", "validation failed without diagnostics");
}

UnmemorizedConditionals unmemorized_conditionals(
    const LabelGroupJoint& joint, const MemorizedComposition& memo) {
  require_valid(validate({joint, memo, BaseClassifier{
                              Mat(joint.K, Vec(joint.K, 1.0 / joint.K)),
                              Mat(joint.K, Vec(joint.K, 1.0 / joint.K)),
                              std::nullopt, std::nullopt}},
                         Tier::Consistent));
  const int K = joint.K;
  double denom_plus = joint.p_plus_total() - memo.p_D * memo.q_plus_total();
  double denom_minus = joint.p_minus_total() - memo.p_D * memo.q_minus_total();
  if (denom_plus < kDegenerateMassTol)
    throw DegenerateSlice("group A=1 is entirely memorized (unmemorized mass " +
                          fmt(denom_plus) + ")");
  if (denom_minus < kDegenerateMassTol)
    throw DegenerateSlice("group A=0 is entirely memorized (unmemorized mass " +
                          fmt(denom_minus) + ")");
  UnmemorizedConditionals out;
  out.given_plus.resize(K);
  out.given_minus.resize(K);
  for (int y = 0; y < K; ++y) {
    out.given_plus[y] =
        std::max(0.0, joint.p_plus[y] - memo.p_D * memo.q_plus[y]) /
        denom_plus;
    out.given_minus[y] =
        std::max(0.0, joint.p_minus[y] - memo.p_D * memo.q_minus(y)) /
        denom_minus;
  }
  return out;
}

UnmemorizedConditionals population_conditionals(const LabelGroupJoint& joint) {
  double p_plus = joint.p_plus_total();
  double p_minus = joint.p_minus_total();
  if (p_plus < kDegenerateMassTol || p_minus < kDegenerateMassTol)
    throw DegenerateGroup("group total mass " + fmt(p_plus) +
                          " leaves one group empty");
  UnmemorizedConditionals out;
  out.given_plus.resize(joint.K);
  out.given_minus.resize(joint.K);
  for (int y = 0; y < joint.K; ++y) {
    out.given_plus[y] = joint.p_plus[y] / p_plus;
    out.given_minus[y] = joint.p_minus[y] / p_minus;
  }
  return out;
}

namespace {

Vec confusion_marginal(const Mat& C, const Vec& label_dist) {
  const int K = static_cast<int>(label_dist.size());
  Vec phi(K, 0.0);
  for (int y = 0; y < K; ++y)
    for (int yhat = 0; yhat < K; ++yhat) phi[yhat] += label_dist[y] * C[y][yhat];
  return phi;
}

}  // namespace

PhiReport derive_phi(const LabelGroupJoint& joint,
                     const MemorizedComposition& memo,
                     const BaseClassifier& base) {
  UnmemorizedConditionals cond = unmemorized_conditionals(joint, memo);
  PhiReport report;
  report.derived_plus = confusion_marginal(base.C_plus, cond.given_plus);
  report.derived_minus = confusion_marginal(base.C_minus, cond.given_minus);
  report.phi_plus = base.phi_plus ? *base.phi_plus : report.derived_plus;
  report.phi_minus = base.phi_minus ? *base.phi_minus : report.derived_minus;
  if (base.phi_plus || base.phi_minus) {
    double worst = 0.0;
    if (base.phi_plus)
      for (int y = 0; y < joint.K; ++y)
        worst = std::max(worst,
                         std::abs((*base.phi_plus)[y] - report.derived_plus[y]));
    if (base.phi_minus)
      for (int y = 0; y < joint.K; ++y)
        worst = std::max(
            worst, std::abs((*base.phi_minus)[y] - report.derived_minus[y]));
    report.supplied_discrepancy = worst;
  }
  return report;
}

JointDistribution joint_table(const Scenario& scenario) {
  require_valid(validate(scenario, Tier::Consistent));
  const int K = scenario.K();
  const auto& joint = scenario.joint;
  const auto& memo = scenario.memo;
  const auto& base = scenario.base;

  JointDistribution table;
  table.K = K;
  table.table.assign(static_cast<std::size_t>(4) * K * K, 0.0);
  for (int y = 0; y < K; ++y) {
    double memo_plus = memo.p_D * memo.q_plus[y];
    double memo_minus = memo.p_D * memo.q_minus(y);
    double rest_plus = joint.p_plus[y] - memo_plus;
    double rest_minus = joint.p_minus[y] - memo_minus;
    if (rest_plus < -1e-12 || rest_minus < -1e-12)
      throw InconsistentMasses(
          "memorized mass exceeds population mass at label " +
          std::to_string(y) + " (residuals " + fmt(rest_plus) + ", " +
          fmt(rest_minus) + ")");
    rest_plus = std::max(rest_plus, 0.0);
    rest_minus = std::max(rest_minus, 0.0);
    table.at(1, y, 1, y) = memo_plus;
    table.at(0, y, 1, y) = memo_minus;
    for (int yhat = 0; yhat < K; ++yhat) {
      table.at(1, y, 0, yhat) = rest_plus * base.C_plus[y][yhat];
      table.at(0, y, 0, yhat) = rest_minus * base.C_minus[y][yhat];
    }
  }
  return table;
}

}  // namespace memfair
