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
#include "memfair/gaps.hpp"

#include <cmath>

namespace memfair {

namespace {

// One equalized-odds entry. ind is 1 when yhat == y. Shared by eqopp_gap and
// eqodds_gap so the diagonal of the matrix and the vector are bit-identical.
double eqodds_entry(const LabelGroupJoint& joint,
                    const MemorizedComposition& memo,
                    const BaseClassifier& base, int y, int yhat) {
  const double p_y_plus = joint.p_plus[y];
  const double p_y_minus = joint.p_minus[y];
  const double p_y = joint.p_class(y);
  const double ind = (y == yhat) ? 1.0 : 0.0;
  const double base_gap = base.C_plus[y][yhat] - base.C_minus[y][yhat];
  return memo.p_D / (p_y_plus * p_y_minus) *
             (base.C_plus[y][yhat] - ind) *
             (memo.q[y] * p_y_plus - p_y * memo.q_plus[y]) +
         base_gap * (1.0 - memo.p_D * (memo.q[y] - memo.q_plus[y]) / p_y_minus);
}

void require_positive_class_cells(const LabelGroupJoint& joint) {
  for (int y = 0; y < joint.K; ++y) {
    if (joint.p_plus[y] <= 0.0 || joint.p_minus[y] <= 0.0)
      throw DegenerateClassGroup(
          y, "zero-mass cell makes the per-class conditional undefined");
  }
}

}  // namespace

GapReport base_gaps(const BaseClassifier& base, const Vec& phi_plus,
                    const Vec& phi_minus) {
  const int K = static_cast<int>(base.C_plus.size());
  if (static_cast<int>(phi_plus.size()) != K ||
      static_cast<int>(phi_minus.size()) != K ||
      static_cast<int>(base.C_minus.size()) != K)
    throw Error("base_gaps: dimension mismatch");
  GapReport report;
  report.method = GapMethod::ClosedForm;
  report.sp.resize(K);
  report.eqopp.resize(K);
  report.eqodds.assign(K, Vec(K, 0.0));
  for (int yhat = 0; yhat < K; ++yhat)
    report.sp[yhat] = phi_plus[yhat] - phi_minus[yhat];
  for (int y = 0; y < K; ++y)
    for (int yhat = 0; yhat < K; ++yhat)
      report.eqodds[y][yhat] = base.C_plus[y][yhat] - base.C_minus[y][yhat];
  for (int y = 0; y < K; ++y) report.eqopp[y] = report.eqodds[y][y];
  return report;
}

GapReport base_gaps(const BaseClassifier& base) {
  if (!base.phi_plus || !base.phi_minus)
    throw MissingPhi(
        "prediction-rate vectors are required and not derivable from the "
        "confusion matrices alone");
  return base_gaps(base, *base.phi_plus, *base.phi_minus);
}

Vec sp_gap_fixed_phi(const LabelGroupJoint& joint,
                     const MemorizedComposition& memo, const Vec& phi_plus,
                     const Vec& phi_minus) {
  const int K = joint.K;
  const double p_plus = joint.p_plus_total();
  if (p_plus <= 0.0 || p_plus >= 1.0)
    throw DegenerateGroup("group total " + std::to_string(p_plus) +
                          " leaves a group-conditional undefined");
  const double q_plus_total = memo.q_plus_total();
  Vec sp(K);
  for (int yhat = 0; yhat < K; ++yhat) {
    const double base_sp = phi_plus[yhat] - phi_minus[yhat];
    sp[yhat] = memo.p_D / (p_plus * (1.0 - p_plus)) *
                   (phi_plus[yhat] * (p_plus - q_plus_total) -
                    (memo.q[yhat] * p_plus - memo.q_plus[yhat])) +
               base_sp * (1.0 - memo.p_D * (1.0 - q_plus_total) /
                                    (1.0 - p_plus));
  }
  return sp;
}

Vec eqopp_gap_unchecked(const LabelGroupJoint& joint,
                        const MemorizedComposition& memo,
                        const BaseClassifier& base) {
  require_positive_class_cells(joint);
  Vec eqopp(joint.K);
  for (int y = 0; y < joint.K; ++y)
    eqopp[y] = eqodds_entry(joint, memo, base, y, y);
  return eqopp;
}

Vec sp_gap(const Scenario& scenario) {
  require_valid(validate(scenario, Tier::Consistent));
  PhiReport phi = derive_phi(scenario.joint, scenario.memo, scenario.base);
  return sp_gap_fixed_phi(scenario.joint, scenario.memo, phi.derived_plus,
                          phi.derived_minus);
}

Vec eqopp_gap(const Scenario& scenario) {
  require_valid(validate(scenario, Tier::Consistent));
  return eqopp_gap_unchecked(scenario.joint, scenario.memo, scenario.base);
}

Mat eqodds_gap(const Scenario& scenario) {
  require_valid(validate(scenario, Tier::Consistent));
  require_positive_class_cells(scenario.joint);
  const int K = scenario.K();
  Mat eqodds(K, Vec(K, 0.0));
  for (int y = 0; y < K; ++y)
    for (int yhat = 0; yhat < K; ++yhat)
      eqodds[y][yhat] =
          eqodds_entry(scenario.joint, scenario.memo, scenario.base, y, yhat);
  return eqodds;
}

GapReport closed_form_gaps(const Scenario& scenario) {
  GapReport report;
  report.method = GapMethod::ClosedForm;
  report.sp = sp_gap(scenario);
  report.eqodds = eqodds_gap(scenario);
  report.eqopp.resize(scenario.K());
  for (int y = 0; y < scenario.K(); ++y)
    report.eqopp[y] = report.eqodds[y][y];
  return report;
}

GapReport gaps_by_enumeration(const Scenario& scenario) {
  JointDistribution table = joint_table(scenario);
  const int K = table.K;

  // Conditioning masses. group_mass[a] backs P(. | A=a); cell_mass[a][y]
  // backs P(. | A=a, Y=y); the unmemorized slices back the confusion rows
  // themselves (their defining conditional has mass p_y^a - p_D q_y^a).
  double group_mass[2] = {0.0, 0.0};
  double group_rest[2] = {0.0, 0.0};
  Mat cell_mass(2, Vec(K, 0.0));
  Mat cell_rest(2, Vec(K, 0.0));
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < K; ++y) {
      for (int d = 0; d < 2; ++d) {
        for (int yhat = 0; yhat < K; ++yhat) {
          const double m = table.at(a, y, d, yhat);
          group_mass[a] += m;
          cell_mass[a][y] += m;
          if (d == 0) {
            group_rest[a] += m;
            cell_rest[a][y] += m;
          }
        }
      }
    }
  }
  for (int a = 0; a < 2; ++a) {
    if (group_mass[a] < kDegenerateMassTol)
      throw DegenerateSlice("group A=" + std::to_string(a) +
                            " has zero mass");
    if (group_rest[a] < kDegenerateMassTol)
      throw DegenerateSlice("group A=" + std::to_string(a) +
                            " is entirely memorized");
    for (int y = 0; y < K; ++y) {
      if (cell_mass[a][y] < kDegenerateMassTol)
        throw DegenerateSlice("cell (A=" + std::to_string(a) +
                              ", Y=" + std::to_string(y) + ") has zero mass");
      if (cell_rest[a][y] < kDegenerateMassTol)
        throw DegenerateSlice("cell (A=" + std::to_string(a) +
                              ", Y=" + std::to_string(y) +
                              ") is entirely memorized");
    }
  }

  GapReport report;
  report.method = GapMethod::Enumeration;
  report.sp.resize(K);
  report.eqopp.resize(K);
  report.eqodds.assign(K, Vec(K, 0.0));
  for (int yhat = 0; yhat < K; ++yhat) {
    double rate[2] = {0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
      double mass = 0.0;
      for (int y = 0; y < K; ++y)
        for (int d = 0; d < 2; ++d) mass += table.at(a, y, d, yhat);
      rate[a] = mass / group_mass[a];
    }
    report.sp[yhat] = rate[1] - rate[0];
  }
  for (int y = 0; y < K; ++y) {
    for (int yhat = 0; yhat < K; ++yhat) {
      double rate[2] = {0.0, 0.0};
      for (int a = 0; a < 2; ++a)
        rate[a] = (table.at(a, y, 0, yhat) + table.at(a, y, 1, yhat)) /
                  cell_mass[a][y];
      report.eqodds[y][yhat] = rate[1] - rate[0];
    }
    report.eqopp[y] = report.eqodds[y][y];
  }
  return report;
}

}  // namespace memfair
