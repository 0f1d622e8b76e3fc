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

#include <optional>

#include "memfair/gaps.hpp"
#include "memfair/linfeas.hpp"
#include "memfair/population.hpp"

namespace memfair {

// Constraint regime for the zero-bias systems.
//  - Paper: exactly the characterizing constraints (the composition is only
//    required to be a probability distribution over the memorized set).
//  - Consistent: additionally requires the memorized mass to fit under the
//    population mass cell by cell, so the composition embeds into a valid
//    joint model at the given p_D.
enum class SolveMode { Paper, Consistent };

// Default tolerance for the equalized-odds constant-ratio check.
inline constexpr double kRatioTol = 1e-9;
// Guard band for threshold verdicts (strict inequalities at the boundary).
inline constexpr double kVerdictGuard = 1e-12;

// ---------------------------------------------------------------------------
// Statistical parity
// ---------------------------------------------------------------------------

// Constants of the statistical-parity zero system:
//   b[y] = p^+ (1-p^+) ((1-p_D)/p_D) (phi^+[y] - phi^-[y])
//   c[y] = (1-p^+) phi^+[y] + p^+ phi^-[y]
// They satisfy sum(c) = 1 and sum(b) = 0 (both phi vectors sum to one).
struct SpSystemParams {
  Vec b;
  Vec c;
  double p_plus_total = 0.0;
  double p_D = 0.0;
};

SpSystemParams sp_system_params(const LabelGroupJoint& joint,
                                const Vec& phi_plus, const Vec& phi_minus,
                                double p_D);

// The statistical-parity zero system over variables (q[0..K), q_plus[0..K)):
//   for every y:  p^+ q[y] - q_plus[y] - (p^+ - sum(q_plus)) c[y] - b[y] = 0
//   sum(q) = 1
//   0 <= q_plus[y] <= q[y]
// Equality rows are ordered y = 0..K-1 then the sum row; inequality rows are
// -q_plus[y] <= 0 for all y, then q_plus[y] - q[y] <= 0 for all y. Consistent
// mode appends p_D q_plus[y] <= p_plus[y] and then
// p_D (q[y]-q_plus[y]) <= p_minus[y].
linfeas::LinearSystem build_sp_system(const LabelGroupJoint& joint,
                                      const Vec& phi_plus,
                                      const Vec& phi_minus, double p_D,
                                      SolveMode mode = SolveMode::Paper);

struct SpZeroResult {
  linfeas::FeasibilityResult feas;
  // Present when feasible: the witness as a composition at the given p_D.
  std::optional<MemorizedComposition> composition;
  // Max |statistical-parity gap| of the witness with the prediction rates
  // held fixed at the values the system was built from. This is the quantity
  // the characterization controls; expected ~0.
  std::optional<double> residual_fixed_phi;
  // Max |gap| with the prediction rates re-derived from the confusion
  // matrices at the witness composition. Informational: the rates move with
  // the composition unless the confusion rows are constant. Absent when the
  // witness does not embed into a consistent joint model.
  std::optional<double> residual_recomputed_phi;
  // The prediction rates the system was built from.
  Vec phi_plus_used;
  Vec phi_minus_used;
};

// Solves the statistical-parity zero system. Prediction rates are taken from
// the classifier when supplied, otherwise derived from the confusion matrices
// under the full-population label conditionals.
SpZeroResult solve_sp_zero(const LabelGroupJoint& joint,
                           const BaseClassifier& base, double p_D,
                           SolveMode mode = SolveMode::Paper);

// Decides solvability of the statistical-parity system through its dual cone
// inclusion: with s_i the columns of the constraint matrix and d the
// right-hand side, the system has a solution iff
//   { x : s_i^T x <= 0 for all i }  is contained in  { x : d^T x <= 0 }.
// The inclusion is decided by one auxiliary feasibility run on
// { s_i^T x <= 0, d^T x >= 1 } (scaling makes the normalization exact).
// Agrees with solve_sp_zero in Paper mode on every input.
bool farkas_sp_check(const LabelGroupJoint& joint, const Vec& phi_plus,
                     const Vec& phi_minus, double p_D);

// ---------------------------------------------------------------------------
// Bounds reports
// ---------------------------------------------------------------------------

enum class BoundMetric { SP, EqOpp };

enum class Verdict { GuaranteedFeasible, GuaranteedInfeasible, Indeterminate };

// Thresholds from one group orientation's ratio family (max form and min form
// over the same family, so necessary_pD <= sufficient_pD always).
struct OrientationBounds {
  double sufficient_pD = 0.0;
  double necessary_pD = 0.0;
};

// Threshold report for one metric.
//
// Semantics by metric:
//  - SP: oriented_plus.sufficient_pD = (1-p^+) max_y (phi^-[y]-phi^+[y])/phi^-[y]
//    is a proven sufficient threshold (oriented_minus is the group-exchanged
//    mirror; either alone suffices). The necessary side
//    ((1-p^+) min_y ...) is never positive, because the ratio family always
//    has a nonpositive entry (both phi vectors sum to one) — so a
//    GuaranteedInfeasible verdict cannot occur for SP.
//  - EqOpp: the per-orientation values are the coarse max/min forms
//    (p^- max_y (C^+[y][y]-C^-[y][y])/(1-C^-[y][y]) etc.). The max forms and
//    the exact sums are NOT sufficient in general; every feasible p_D
//    satisfies p_D >= exact_sum_plus and p_D >= exact_sum_minus, making the
//    sums (and the weaker min forms) necessary-side information. The exact
//    feasibility threshold is
//      exact_threshold = sum_y max(p_y^- (C^+[y][y]-C^-[y][y])/(1-C^-[y][y]),
//                                  p_y^+ (C^-[y][y]-C^+[y][y])/(1-C^+[y][y]))
//    and feasibility holds iff p_D >= exact_threshold. Verdicts use only
//    exact_threshold (sufficient side) and the sums (necessary side).
struct BoundsReport {
  BoundMetric metric = BoundMetric::SP;
  OrientationBounds oriented_plus;
  OrientationBounds oriented_minus;
  std::optional<double> exact_sum_plus;
  std::optional<double> exact_sum_minus;
  std::optional<double> exact_threshold;

  // Sound verdict for a given p_D with a 1e-12 guard band at the boundary.
  Verdict verdict(double p_D) const;
};

// SP thresholds for both orientations. Throws ZeroRateDivision if a rate in a
// denominator is zero, DegenerateGroup if p^+ is 0 or 1.
BoundsReport sp_bounds(const LabelGroupJoint& joint, const Vec& phi_plus,
                       const Vec& phi_minus);

// ---------------------------------------------------------------------------
// Equal opportunity
// ---------------------------------------------------------------------------

// Constants of the equal-opportunity zero system over lambda in R^K:
//   alpha[y] = p_y^+/(1-C^+[y][y]) + p_y^-/(1-C^-[y][y])
//   sum_y alpha[y] lambda[y] = (1-p_D)/p_D
//   lambda[y] <= (1-C^+[y][y])/p_D    and    lambda[y] <= (1-C^-[y][y])/p_D
struct EqOppSystemParams {
  Vec alpha;
  // min of the two per-class caps, already divided by p_D.
  Vec lambda_upper;
  double budget = 0.0;  // (1-p_D)/p_D
  double p_D = 0.0;
};

EqOppSystemParams eqopp_system_params(const LabelGroupJoint& joint,
                                      const BaseClassifier& base, double p_D);

// The lambda system as a LinearSystem. Inequality rows are ordered: the K
// caps from the plus-group diagonal, then the K caps from the minus-group
// diagonal; Consistent mode appends -lambda[y] <= 0 (equivalent to
// p_D q_y^a <= p_y^a under the mapping below). Throws PerfectClassDegenerate
// when a diagonal confusion entry equals 1, DegenerateClassGroup on
// zero-mass cells.
linfeas::LinearSystem build_eqopp_system(const LabelGroupJoint& joint,
                                         const BaseClassifier& base,
                                         double p_D,
                                         SolveMode mode = SolveMode::Paper);

// Maps a lambda vector satisfying the system back to the composition:
//   q[y]      = p_y/p_D - alpha[y] lambda[y]
//   q_plus[y] = p_y^+/p_D - (p_y^+/(1-C^+[y][y])) lambda[y]
// Throws Error when lambda does not satisfy the system (within kFeasTol).
MemorizedComposition map_lambda_to_composition(const LabelGroupJoint& joint,
                                               const BaseClassifier& base,
                                               double p_D, const Vec& lambda);

struct EqOppZeroResult {
  linfeas::FeasibilityResult feas;
  std::optional<MemorizedComposition> composition;
  // Max |equal-opportunity gap| of the composition, from the enumeration
  // oracle when the composition embeds into a consistent joint model, else
  // from the closed form.
  std::optional<double> residual;
  Vec lambda;  // witness lambda when feasible
};

EqOppZeroResult solve_eqopp_zero(const LabelGroupJoint& joint,
                                 const BaseClassifier& base, double p_D,
                                 SolveMode mode = SolveMode::Paper);

// Equal-opportunity thresholds: coarse max/min forms per orientation, the two
// exact sums, and the exact feasibility threshold (see BoundsReport).
BoundsReport eqopp_bounds(const LabelGroupJoint& joint,
                          const BaseClassifier& base);

// ---------------------------------------------------------------------------
// Equalized odds
// ---------------------------------------------------------------------------

// Closed-form equalized-odds solution.
struct EqOddsSolution {
  // Per-class complement-mass ratios, computed from the diagonals:
  //   r[y] = ((K-1) - (1-C^+[y][y])) / ((K-1) - (1-C^-[y][y])).
  Vec r;
  double p_D_required = 0.0;
  Vec q;
  Vec q_plus;
  bool ratio_condition_met = false;
  // Largest spread of the per-column ratios (1-C^+[y][yhat])/(1-C^-[y][yhat])
  // over columns yhat != y, maximized over y. Zero by construction for K=2.
  double ratio_max_deviation = 0.0;
  // Max |equalized-odds gap| of the returned solution, reported from the
  // enumeration oracle. Surfaces any case where the ratio screen passes but
  // the closed form does not actually null the off-diagonal gaps.
  double oracle_residual = 0.0;
};

// The closed-form solution: checks the constant-ratio condition (throws
// RatioConditionFailed with the deviation when violated beyond ratio_tol),
// then computes
//   p_D w_y^+ = (C^-[y][y]-C^+[y][y]) / ((1-C^+[y][y]) - r[y] (1-C^-[y][y]))
//   p_D       = sum_y (p_y^+ + r[y] p_y^-) (p_D w_y^+)
//   q_plus[y] = p_y^+ (p_D w_y^+) / p_D
//   q[y]      = (p_y^+ + r[y] p_y^-) (p_D w_y^+) / p_D.
// A class with equal diagonals needs no correction and contributes zero.
// Throws DenominatorVanishes on a vanishing denominator with nonvanishing
// numerator, SolutionNotProbability when p_D or the composition leaves
// probability ranges (including the already-fair case p_D = 0).
EqOddsSolution solve_eqodds_zero(const LabelGroupJoint& joint,
                                 const BaseClassifier& base,
                                 double ratio_tol = kRatioTol);

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

// The prediction rates solver entry points use: supplied when present,
// otherwise the confusion marginal under full-population conditionals.
struct ResolvedPhi {
  Vec phi_plus;
  Vec phi_minus;
  bool supplied = false;
};
ResolvedPhi resolve_solver_phi(const LabelGroupJoint& joint,
                               const BaseClassifier& base);

}  // namespace memfair
