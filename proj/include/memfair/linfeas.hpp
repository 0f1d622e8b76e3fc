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
#include <vector>

#include "memfair/errors.hpp"

namespace memfair::linfeas {

using Vec = std::vector<double>;

// Witness feasibility tolerance (per-row, after row equilibration).
inline constexpr double kFeasTol = 1e-9;
// Pivots smaller than this are refused; the solver reports NumericalBreakdown
// rather than dividing by noise.
inline constexpr double kPivotTol = 1e-13;

// A linear feasibility problem over x in R^n (variables are free unless a
// lower bound is given):
//   eq_coeffs[i]   . x  = eq_rhs[i]
//   ineq_coeffs[j] . x <= ineq_rhs[j]
//   x[k] >= lower[k]                    (only where lower[k] is set)
//
// Multiplier vectors (certificates) are indexed over the concatenated row
// list [equalities..., inequalities..., active lower bounds in variable
// order], where a lower bound x_k >= l contributes the row -x_k <= -l.
struct LinearSystem {
  int n = 0;
  std::vector<Vec> eq_coeffs;
  Vec eq_rhs;
  std::vector<Vec> ineq_coeffs;
  Vec ineq_rhs;
  std::vector<std::optional<double>> lower;  // empty or size n

  int eq_count() const { return static_cast<int>(eq_coeffs.size()); }
  int ineq_count() const { return static_cast<int>(ineq_coeffs.size()); }
  int bound_count() const;
  // Total number of certificate rows: eq_count + ineq_count + bound_count.
  int row_count() const { return eq_count() + ineq_count() + bound_count(); }
};

enum class FeasStatus { Feasible, Infeasible };

// Outcome of solve_feasibility. Exactly one of witness / certificate is
// populated. A witness x satisfies every row within kFeasTol. A certificate y
// (one multiplier per row, see LinearSystem) has nonnegative entries on
// inequality and bound rows and proves infeasibility via
//   y^T A = 0   and   y^T b < 0   (within kFeasTol, scale-relative).
struct FeasibilityResult {
  FeasStatus status = FeasStatus::Infeasible;
  Vec witness;
  Vec certificate;
};

// Decides feasibility with a phase-1 simplex over split free variables.
//
// Implementation notes (all load-bearing for reproducibility):
//  - every row is equilibrated by an exact power of two, so scaling a row by
//    any constant cannot flip the verdict through rounding alone;
//  - Bland's rule (lowest eligible column in, lowest basic variable out)
//    makes the pivot sequence, and hence the output, a pure function of the
//    input — identical inputs give bit-identical results;
//  - artificial variables are attached to every row, which makes the phase-1
//    duals readable off the final reduced costs; those duals are mapped back
//    through the row scaling to form the certificate;
//  - the result self-verifies before being returned: a Feasible answer whose
//    witness violates a row, or an Infeasible answer whose certificate fails
//    check_certificate, raises NumericalBreakdown instead of being returned.
FeasibilityResult solve_feasibility(const LinearSystem& system);

// Largest violation of x over all rows (0 for a perfectly feasible point).
// Throws Error on dimension mismatch.
double check_witness(const LinearSystem& system, const Vec& x);

// True iff y is a valid infeasibility certificate for the system, checked
// with scale-relative tolerance kFeasTol. The all-zero vector certifies
// nothing and returns false. Throws Error on dimension mismatch.
bool check_certificate(const LinearSystem& system, const Vec& y);

}  // namespace memfair::linfeas
