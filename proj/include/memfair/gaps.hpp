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

#include "memfair/population.hpp"

namespace memfair {

// How a GapReport was produced.
//  - ClosedForm: the algebraic expressions in terms of (p, q, phi, C).
//  - Enumeration: exact marginalization of the full joint table. This is the
//    oracle every closed form is tested against.
//  - Empirical: plug-in frequencies from finite samples (simulator).
enum class GapMethod { ClosedForm, Enumeration, Empirical };

// The three additive fairness gaps of the memorizing ensemble.
//   sp[yhat]        = P(Yhat=yhat | A=1) - P(Yhat=yhat | A=0)
//   eqodds[y][yhat] = P(Yhat=yhat | A=1, Y=y) - P(Yhat=yhat | A=0, Y=y)
//   eqopp[y]        = eqodds[y][y]
struct GapReport {
  Vec sp;
  Vec eqopp;
  Mat eqodds;
  GapMethod method = GapMethod::ClosedForm;
};

// Gaps of the base classifier alone (conditioned on D=0):
// sp = phi_plus - phi_minus, eqodds = C_plus - C_minus, eqopp = diagonal.
GapReport base_gaps(const BaseClassifier& base, const Vec& phi_plus,
                    const Vec& phi_minus);

// Same, using the classifier's own supplied phi vectors. Throws MissingPhi
// when they are absent (they are not derivable from the classifier alone).
GapReport base_gaps(const BaseClassifier& base);

// Statistical-parity gap of the ensemble, closed form:
//   sp[yhat] = p_D/(p^+ (1-p^+)) * (phi^+[yhat] (p^+ - q^+)
//                                   - (q[yhat] p^+ - q_plus[yhat]))
//            + base_sp[yhat] * (1 - p_D (1-q^+)/(1-p^+)).
// phi is derived from C at the scenario's composition (authoritative), so the
// result agrees with the enumeration oracle. Throws DegenerateGroup if
// p^+ is 0 or 1.
Vec sp_gap(const Scenario& scenario);

// Equal-opportunity gap, closed form:
//   eqopp[y] = p_D/(p_y^+ p_y^-) * (C^+[y][y] - 1) * (q_y p_y^+ - p_y q_y^+)
//            + base_eqopp[y] * (1 - p_D (q_y - q_y^+)/p_y^-).
// Throws DegenerateClassGroup naming the label with a zero-mass cell.
Vec eqopp_gap(const Scenario& scenario);

// Equalized-odds gap, closed form; identical structure with C^+[y][yhat] and
// the indicator 1{y=yhat} in place of the diagonal term. Rows sum to zero and
// the diagonal equals eqopp_gap.
Mat eqodds_gap(const Scenario& scenario);

// All three closed forms assembled into one report.
GapReport closed_form_gaps(const Scenario& scenario);

// The oracle: builds the exact joint table and evaluates every defining
// conditional probability by marginalization and division, with no use of the
// closed forms. Conditioning events with mass below the degeneracy threshold
// raise DegenerateSlice instead of being smoothed; that includes the
// unmemorized slice of every (group, label) cell, without which the supplied
// confusion rows describe an event of probability zero.
GapReport gaps_by_enumeration(const Scenario& scenario);

// Statistical-parity closed form against explicitly supplied prediction
// rates. Low level: no validation beyond shapes. Solver entry points use it
// to evaluate candidate compositions with the rates held fixed at the values
// their systems were built from.
Vec sp_gap_fixed_phi(const LabelGroupJoint& joint,
                     const MemorizedComposition& memo, const Vec& phi_plus,
                     const Vec& phi_minus);

// Equal-opportunity closed form evaluated directly from the pieces, without
// consistency validation (candidate compositions from Paper-mode solves need
// not embed into a joint model). Throws DegenerateClassGroup on zero-mass
// (label, group) cells.
Vec eqopp_gap_unchecked(const LabelGroupJoint& joint,
                        const MemorizedComposition& memo,
                        const BaseClassifier& base);

}  // namespace memfair
