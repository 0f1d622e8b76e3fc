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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memfair/errors.hpp"

namespace memfair {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major, square K x K

// Absolute tolerance for all simplex / row-stochasticity input checks.
inline constexpr double kValidationTol = 1e-12;

// Conditioning events with probability mass below this are treated as
// degenerate rather than divided through.
inline constexpr double kDegenerateMassTol = 1e-15;

// Joint distribution of (label, group) over the whole population.
// p_plus[y] = P(Y=y, A=1), p_minus[y] = P(Y=y, A=0). Labels are 0-based in
// code; reports print them 1-based.
struct LabelGroupJoint {
  int K = 0;
  Vec p_plus;
  Vec p_minus;

  // P(A=1), the protected-group total mass.
  double p_plus_total() const;
  double p_minus_total() const { return 1.0 - p_plus_total(); }
  // P(Y=y) = p_plus[y] + p_minus[y].
  double p_class(int y) const { return p_plus[y] + p_minus[y]; }
};

// Composition of the memorized subpopulation: total mass p_D = P(D=1),
// q[y] = P(Y=y | D=1), q_plus[y] = P(Y=y, A=1 | D=1).
struct MemorizedComposition {
  double p_D = 0.0;
  Vec q;
  Vec q_plus;

  double q_plus_total() const;
  double q_minus_total() const { return 1.0 - q_plus_total(); }
  // P(Y=y, A=0 | D=1) = q[y] - q_plus[y].
  double q_minus(int y) const { return q[y] - q_plus[y]; }
};

// Behavior of the classifier on the unmemorized subpopulation: per-group
// confusion matrices C_plus[y][yhat] = P(Yhat=yhat | Y=y, A=1, D=0) and
// optional prediction-rate vectors phi[yhat] = P(Yhat=yhat | A=a, D=0).
struct BaseClassifier {
  Mat C_plus;
  Mat C_minus;
  std::optional<Vec> phi_plus;
  std::optional<Vec> phi_minus;
};

// Aggregate input record: everything needed to pin down the full model.
struct Scenario {
  LabelGroupJoint joint;
  MemorizedComposition memo;
  BaseClassifier base;

  int K() const { return joint.K; }
};

// Exact joint distribution over (A, Y, D, Yhat), flattened. Index order:
// a (0 = group A=0, 1 = group A=1), y, d, yhat.
struct JointDistribution {
  int K = 0;
  std::vector<double> table;  // size 2 * K * 2 * K

  double at(int a, int y, int d, int yhat) const {
    return table[index(a, y, d, yhat)];
  }
  double& at(int a, int y, int d, int yhat) {
    return table[index(a, y, d, yhat)];
  }
  std::size_t index(int a, int y, int d, int yhat) const {
    return (((static_cast<std::size_t>(a) * K + y) * 2 + d) * K + yhat);
  }
  double total_mass() const;
};

// Validation tiers are cumulative: Strict includes Basic, Consistent includes
// Strict.
//  - Basic: simplex membership, row stochasticity, open-interval totals.
//  - Strict: additionally every (label, group) cell has positive mass.
//  - Consistent: additionally the memorized mass fits under the population
//    mass cell by cell: p_D*q_plus[y] <= p_plus[y] and
//    p_D*(q[y]-q_plus[y]) <= p_minus[y].
enum class Tier { Basic, Strict, Consistent };

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  bool passed = false;
  std::vector<InvariantCheck> checks;

  // Name of the first failing invariant, or empty.
  std::string first_failure() const;
};

// Validates a full scenario at the requested tier. Failures are reported,
// never thrown.
ValidationReport validate(const Scenario& scenario, Tier tier);

// Validates population + base classifier only (no memorized composition);
// used by solver entry points where the composition is the unknown. Only
// Basic and Strict apply; Consistent degrades to Strict.
ValidationReport validate_inputs(const LabelGroupJoint& joint,
                                 const BaseClassifier& base, Tier tier);

// Throws ScenarioInvalid naming the first failing invariant if the report
// fails; convenience used by operations whose precondition is a tier.
void require_valid(const ValidationReport& report);

// P(Y=y | D=0, A=a) for both groups.
struct UnmemorizedConditionals {
  Vec given_plus;   // a = 1
  Vec given_minus;  // a = 0
};

// Label distribution of the unmemorized part of each group:
//   P(Y=y | D=0, A=1) = (p_plus[y] - p_D*q_plus[y]) / (p^+ - p_D*q^+).
// Throws DegenerateSlice if a group is (numerically) fully memorized.
UnmemorizedConditionals unmemorized_conditionals(
    const LabelGroupJoint& joint, const MemorizedComposition& memo);

struct PhiReport {
  // Marginals of the confusion matrices under the unmemorized label
  // distribution; these are the values all gap computations use.
  Vec derived_plus;
  Vec derived_minus;
  // What the contract returns: the supplied vectors when the classifier
  // carries them, otherwise the derived ones.
  Vec phi_plus;
  Vec phi_minus;
  // Max absolute difference between supplied and derived vectors; present
  // only when vectors were supplied.
  std::optional<double> supplied_discrepancy;
};

// Prediction rates phi[yhat] = sum_y P(Y=y | D=0, A=a) * C^a[y][yhat]. When
// the classifier already carries phi vectors they are echoed back unchanged
// and the discrepancy against the derived values is reported; derived values
// stay authoritative for gap computation.
PhiReport derive_phi(const LabelGroupJoint& joint,
                     const MemorizedComposition& memo,
                     const BaseClassifier& base);

// Prediction rates in the no-memorization limit: the confusion marginal under
// the full-population conditionals P(Y=y | A=a). Used by solver entry points
// when no phi vectors are supplied and no composition exists yet.
UnmemorizedConditionals population_conditionals(const LabelGroupJoint& joint);

// The exact joint table of the memorizing ensemble:
//   P(a, y, 1, yhat) = p_D * q_y^a * 1{yhat = y}
//   P(a, y, 0, yhat) = (p_y^a - p_D * q_y^a) * C^a[y][yhat].
// Throws InconsistentMasses if any residual mass is below -1e-12.
JointDistribution joint_table(const Scenario& scenario);

}  // namespace memfair
