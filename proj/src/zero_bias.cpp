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
#include "memfair/zero_bias.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace memfair {

namespace {

void require_open_unit_interval(double p_D) {
  if (!(p_D > 0.0 && p_D < 1.0))
    throw ScenarioInvalid("p_D_open_interval",
                          "p_D " + std::to_string(p_D) +
                              " must lie strictly in (0, 1)");
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Clamps solver dust off a raw (q, q_plus) point and renormalizes the label
// marginal, preserving 0 <= q_plus <= q. The corrections are bounded by the
// witness tolerance; residual reporting happens after this step, so any
// distortion the cleanup introduces is measured, not hidden.
MemorizedComposition tidy_composition(double p_D, Vec q, Vec q_plus) {
  const int K = static_cast<int>(q.size());
  for (int y = 0; y < K; ++y) {
    q[y] = std::max(q[y], 0.0);
    q_plus[y] = std::clamp(q_plus[y], 0.0, q[y]);
  }
  double total = 0.0;
  for (double x : q) total += x;
  if (total > 0.0) {
    for (int y = 0; y < K; ++y) {
      q[y] /= total;
      q_plus[y] /= total;
    }
  }
  return MemorizedComposition{p_D, std::move(q), std::move(q_plus)};
}

}  // namespace

ResolvedPhi resolve_solver_phi(const LabelGroupJoint& joint,
                               const BaseClassifier& base) {
  ResolvedPhi out;
  out.supplied = base.phi_plus.has_value() || base.phi_minus.has_value();
  if (base.phi_plus && base.phi_minus) {
    out.phi_plus = *base.phi_plus;
    out.phi_minus = *base.phi_minus;
    return out;
  }
  UnmemorizedConditionals cond = population_conditionals(joint);
  const int K = joint.K;
  Vec derived_plus(K, 0.0), derived_minus(K, 0.0);
  for (int y = 0; y < K; ++y) {
    for (int yhat = 0; yhat < K; ++yhat) {
      derived_plus[yhat] += cond.given_plus[y] * base.C_plus[y][yhat];
      derived_minus[yhat] += cond.given_minus[y] * base.C_minus[y][yhat];
    }
  }
  out.phi_plus = base.phi_plus ? *base.phi_plus : std::move(derived_plus);
  out.phi_minus = base.phi_minus ? *base.phi_minus : std::move(derived_minus);
  return out;
}

// ---------------------------------------------------------------------------
// Statistical parity
// ---------------------------------------------------------------------------

SpSystemParams sp_system_params(const LabelGroupJoint& joint,
                                const Vec& phi_plus, const Vec& phi_minus,
                                double p_D) {
  const int K = joint.K;
  if (static_cast<int>(phi_plus.size()) != K ||
      static_cast<int>(phi_minus.size()) != K)
    throw Error("sp_system_params: prediction-rate vectors must have length K");
  require_open_unit_interval(p_D);
  const double p_plus = joint.p_plus_total();
  if (!(p_plus > 0.0 && p_plus < 1.0))
    throw DegenerateGroup("group total " + std::to_string(p_plus) +
                          " leaves a group-conditional undefined");
  SpSystemParams params;
  params.p_plus_total = p_plus;
  params.p_D = p_D;
  params.b.resize(K);
  params.c.resize(K);
  for (int y = 0; y < K; ++y) {
    params.b[y] = p_plus * (1.0 - p_plus) * ((1.0 - p_D) / p_D) *
                  (phi_plus[y] - phi_minus[y]);
    params.c[y] = (1.0 - p_plus) * phi_plus[y] + p_plus * phi_minus[y];
  }
  return params;
}

linfeas::LinearSystem build_sp_system(const LabelGroupJoint& joint,
                                      const Vec& phi_plus,
                                      const Vec& phi_minus, double p_D,
                                      SolveMode mode) {
  const SpSystemParams params = sp_system_params(joint, phi_plus, phi_minus,
                                                 p_D);
  const int K = joint.K;
  const double p_plus = params.p_plus_total;

  linfeas::LinearSystem sys;
  sys.n = 2 * K;  // variables: q[0..K) then q_plus[0..K)
  for (int y = 0; y < K; ++y) {
    Vec row(sys.n, 0.0);
    row[y] = p_plus;
    for (int yp = 0; yp < K; ++yp)
      row[K + yp] = params.c[y] - (yp == y ? 1.0 : 0.0);
    sys.eq_coeffs.push_back(std::move(row));
    sys.eq_rhs.push_back(p_plus * params.c[y] + params.b[y]);
  }
  {
    Vec row(sys.n, 0.0);
    for (int y = 0; y < K; ++y) row[y] = 1.0;
    sys.eq_coeffs.push_back(std::move(row));
    sys.eq_rhs.push_back(1.0);
  }
  for (int y = 0; y < K; ++y) {
    Vec row(sys.n, 0.0);
    row[K + y] = -1.0;
    sys.ineq_coeffs.push_back(std::move(row));
    sys.ineq_rhs.push_back(0.0);
  }
  for (int y = 0; y < K; ++y) {
    Vec row(sys.n, 0.0);
    row[K + y] = 1.0;
    row[y] = -1.0;
    sys.ineq_coeffs.push_back(std::move(row));
    sys.ineq_rhs.push_back(0.0);
  }
  if (mode == SolveMode::Consistent) {
    for (int y = 0; y < K; ++y) {
      Vec row(sys.n, 0.0);
      row[K + y] = p_D;
      sys.ineq_coeffs.push_back(std::move(row));
      sys.ineq_rhs.push_back(joint.p_plus[y]);
    }
    for (int y = 0; y < K; ++y) {
      Vec row(sys.n, 0.0);
      row[y] = p_D;
      row[K + y] = -p_D;
      sys.ineq_coeffs.push_back(std::move(row));
      sys.ineq_rhs.push_back(joint.p_minus[y]);
    }
  }
  return sys;
}

SpZeroResult solve_sp_zero(const LabelGroupJoint& joint,
                           const BaseClassifier& base, double p_D,
                           SolveMode mode) {
  require_valid(validate_inputs(joint, base, Tier::Basic));
  const ResolvedPhi phi = resolve_solver_phi(joint, base);
  const linfeas::LinearSystem sys =
      build_sp_system(joint, phi.phi_plus, phi.phi_minus, p_D, mode);

  SpZeroResult result;
  result.phi_plus_used = phi.phi_plus;
  result.phi_minus_used = phi.phi_minus;
  result.feas = linfeas::solve_feasibility(sys);
  if (result.feas.status != linfeas::FeasStatus::Feasible) return result;

  const int K = joint.K;
  Vec q(result.feas.witness.begin(), result.feas.witness.begin() + K);
  Vec q_plus(result.feas.witness.begin() + K, result.feas.witness.end());
  MemorizedComposition comp = tidy_composition(p_D, std::move(q),
                                               std::move(q_plus));
  result.residual_fixed_phi =
      max_abs(sp_gap_fixed_phi(joint, comp, phi.phi_plus, phi.phi_minus));
  Scenario embedded{joint, comp, base};
  if (validate(embedded, Tier::Consistent).passed) {
    try {
      PhiReport derived = derive_phi(joint, comp, base);
      result.residual_recomputed_phi = max_abs(sp_gap_fixed_phi(
          joint, comp, derived.derived_plus, derived.derived_minus));
    } catch (const DegenerateSlice&) {
      // A fully-memorized group leaves no unmemorized slice to re-derive
      // rates from; the informational residual is simply absent.
    }
  }
  result.composition = std::move(comp);
  return result;
}

bool farkas_sp_check(const LabelGroupJoint& joint, const Vec& phi_plus,
                     const Vec& phi_minus, double p_D) {
  const SpSystemParams params = sp_system_params(joint, phi_plus, phi_minus,
                                                 p_D);
  const int K = joint.K;
  const double p_plus = params.p_plus_total;

  // Columns of the primal constraint matrix, written against the variables
  // (q_plus[y], q[y]-q_plus[y]) which are exactly the nonnegative ones; the
  // primal system has a solution iff the cone spanned by these columns
  // contains the right-hand side d. The inclusion fails iff some x satisfies
  // every column constraint s_i^T x <= 0 while d^T x >= 1.
  linfeas::LinearSystem aux;
  aux.n = K + 1;
  for (int i = 0; i < K; ++i) {
    Vec row(aux.n, 0.0);
    for (int y = 0; y < K; ++y) row[y] = params.c[y];
    row[i] -= 1.0 - p_plus;
    row[K] = 1.0;
    aux.ineq_coeffs.push_back(std::move(row));
    aux.ineq_rhs.push_back(0.0);
  }
  for (int i = 0; i < K; ++i) {
    Vec row(aux.n, 0.0);
    row[i] = p_plus;
    row[K] = 1.0;
    aux.ineq_coeffs.push_back(std::move(row));
    aux.ineq_rhs.push_back(0.0);
  }
  {
    Vec row(aux.n, 0.0);
    for (int y = 0; y < K; ++y)
      row[y] = -(p_plus * params.c[y] + params.b[y]);
    row[K] = -1.0;
    aux.ineq_coeffs.push_back(std::move(row));
    aux.ineq_rhs.push_back(-1.0);
  }
  const linfeas::FeasibilityResult aux_result = linfeas::solve_feasibility(aux);
  return aux_result.status == linfeas::FeasStatus::Infeasible;
}

BoundsReport sp_bounds(const LabelGroupJoint& joint, const Vec& phi_plus,
                       const Vec& phi_minus) {
  const int K = joint.K;
  if (static_cast<int>(phi_plus.size()) != K ||
      static_cast<int>(phi_minus.size()) != K)
    throw Error("sp_bounds: prediction-rate vectors must have length K");
  const double p_plus = joint.p_plus_total();
  if (!(p_plus > 0.0 && p_plus < 1.0))
    throw DegenerateGroup("group total " + std::to_string(p_plus) +
                          " leaves a group-conditional undefined");

  BoundsReport report;
  report.metric = BoundMetric::SP;
  double max_plus = -std::numeric_limits<double>::infinity();
  double min_plus = std::numeric_limits<double>::infinity();
  double max_minus = max_plus, min_minus = min_plus;
  for (int y = 0; y < K; ++y) {
    if (phi_minus[y] == 0.0)
      throw ZeroRateDivision(y, "phi_minus[y] divides the plus-oriented "
                                "threshold family");
    if (phi_plus[y] == 0.0)
      throw ZeroRateDivision(y, "phi_plus[y] divides the minus-oriented "
                                "threshold family");
    const double f = (phi_minus[y] - phi_plus[y]) / phi_minus[y];
    const double g = (phi_plus[y] - phi_minus[y]) / phi_plus[y];
    max_plus = std::max(max_plus, f);
    min_plus = std::min(min_plus, f);
    max_minus = std::max(max_minus, g);
    min_minus = std::min(min_minus, g);
  }
  report.oriented_plus = {(1.0 - p_plus) * max_plus, (1.0 - p_plus) * min_plus};
  report.oriented_minus = {p_plus * max_minus, p_plus * min_minus};
  return report;
}

Verdict BoundsReport::verdict(double p_D) const {
  if (metric == BoundMetric::SP) {
    const double sufficient =
        std::min(oriented_plus.sufficient_pD, oriented_minus.sufficient_pD);
    const double necessary =
        std::max(oriented_plus.necessary_pD, oriented_minus.necessary_pD);
    if (p_D >= sufficient - kVerdictGuard) return Verdict::GuaranteedFeasible;
    if (p_D < necessary - kVerdictGuard) return Verdict::GuaranteedInfeasible;
    return Verdict::Indeterminate;
  }
  // Equal opportunity: the exact threshold decides the feasible side; the
  // exact sums are necessary, so falling below either one decides the
  // infeasible side.
  if (exact_threshold && p_D >= *exact_threshold - kVerdictGuard)
    return Verdict::GuaranteedFeasible;
  double necessary = -std::numeric_limits<double>::infinity();
  if (exact_sum_plus) necessary = std::max(necessary, *exact_sum_plus);
  if (exact_sum_minus) necessary = std::max(necessary, *exact_sum_minus);
  if (std::isfinite(necessary) && p_D < necessary - kVerdictGuard)
    return Verdict::GuaranteedInfeasible;
  return Verdict::Indeterminate;
}

// ---------------------------------------------------------------------------
// Equal opportunity
// ---------------------------------------------------------------------------

EqOppSystemParams eqopp_system_params(const LabelGroupJoint& joint,
                                      const BaseClassifier& base,
                                      double p_D) {
  require_open_unit_interval(p_D);
  const int K = joint.K;
  EqOppSystemParams params;
  params.p_D = p_D;
  params.budget = (1.0 - p_D) / p_D;
  params.alpha.resize(K);
  params.lambda_upper.resize(K);
  for (int y = 0; y < K; ++y) {
    if (joint.p_plus[y] <= 0.0 || joint.p_minus[y] <= 0.0)
      throw DegenerateClassGroup(
          y, "zero-mass cell makes the per-class conditional undefined");
    const double miss_plus = 1.0 - base.C_plus[y][y];
    const double miss_minus = 1.0 - base.C_minus[y][y];
    if (miss_plus <= 0.0)
      throw PerfectClassDegenerate(
          y, "C_plus diagonal leaves no misclassification mass to rescale");
    if (miss_minus <= 0.0)
      throw PerfectClassDegenerate(
          y, "C_minus diagonal leaves no misclassification mass to rescale");
    params.alpha[y] =
        joint.p_plus[y] / miss_plus + joint.p_minus[y] / miss_minus;
    params.lambda_upper[y] = std::min(miss_plus, miss_minus) / p_D;
  }
  return params;
}

linfeas::LinearSystem build_eqopp_system(const LabelGroupJoint& joint,
                                         const BaseClassifier& base,
                                         double p_D, SolveMode mode) {
  const EqOppSystemParams params = eqopp_system_params(joint, base, p_D);
  const int K = joint.K;
  linfeas::LinearSystem sys;
  sys.n = K;
  sys.eq_coeffs.push_back(params.alpha);
  sys.eq_rhs.push_back(params.budget);
  for (int y = 0; y < K; ++y) {
    Vec row(K, 0.0);
    row[y] = 1.0;
    sys.ineq_coeffs.push_back(std::move(row));
    sys.ineq_rhs.push_back((1.0 - base.C_plus[y][y]) / p_D);
  }
  for (int y = 0; y < K; ++y) {
    Vec row(K, 0.0);
    row[y] = 1.0;
    sys.ineq_coeffs.push_back(std::move(row));
    sys.ineq_rhs.push_back((1.0 - base.C_minus[y][y]) / p_D);
  }
  if (mode == SolveMode::Consistent) {
    for (int y = 0; y < K; ++y) {
      Vec row(K, 0.0);
      row[y] = -1.0;
      sys.ineq_coeffs.push_back(std::move(row));
      sys.ineq_rhs.push_back(0.0);
    }
  }
  return sys;
}

MemorizedComposition map_lambda_to_composition(const LabelGroupJoint& joint,
                                               const BaseClassifier& base,
                                               double p_D, const Vec& lambda) {
  const EqOppSystemParams params = eqopp_system_params(joint, base, p_D);
  const int K = joint.K;
  if (static_cast<int>(lambda.size()) != K)
    throw Error("map_lambda_to_composition: lambda must have length K");
  const linfeas::LinearSystem sys =
      build_eqopp_system(joint, base, p_D, SolveMode::Paper);
  const double viol = linfeas::check_witness(sys, lambda);
  if (viol > linfeas::kFeasTol)
    throw Error("map_lambda_to_composition: lambda violates the system by " +
                std::to_string(viol));

  Vec q(K, 0.0), q_plus(K, 0.0);
  for (int y = 0; y < K; ++y) {
    q[y] = joint.p_class(y) / p_D - params.alpha[y] * lambda[y];
    // Evaluated so that lambda sitting exactly on its plus-group cap gives
    // exactly zero memorized plus-mass for the class.
    const double miss_plus = 1.0 - base.C_plus[y][y];
    const double cap_plus = miss_plus / p_D;
    q_plus[y] = joint.p_plus[y] * ((cap_plus - lambda[y]) / miss_plus);
  }
  return tidy_composition(p_D, std::move(q), std::move(q_plus));
}

EqOppZeroResult solve_eqopp_zero(const LabelGroupJoint& joint,
                                 const BaseClassifier& base, double p_D,
                                 SolveMode mode) {
  require_valid(validate_inputs(joint, base, Tier::Strict));
  const linfeas::LinearSystem sys = build_eqopp_system(joint, base, p_D, mode);
  EqOppZeroResult result;
  result.feas = linfeas::solve_feasibility(sys);
  if (result.feas.status != linfeas::FeasStatus::Feasible) return result;

  result.lambda = result.feas.witness;
  MemorizedComposition comp =
      map_lambda_to_composition(joint, base, p_D, result.lambda);
  Scenario embedded{joint, comp, base};
  if (validate(embedded, Tier::Consistent).passed) {
    try {
      result.residual = max_abs(gaps_by_enumeration(embedded).eqopp);
    } catch (const DegenerateSlice&) {
      result.residual = max_abs(eqopp_gap_unchecked(joint, comp, base));
    }
  } else {
    result.residual = max_abs(eqopp_gap_unchecked(joint, comp, base));
  }
  result.composition = std::move(comp);
  return result;
}

BoundsReport eqopp_bounds(const LabelGroupJoint& joint,
                          const BaseClassifier& base) {
  const int K = joint.K;
  BoundsReport report;
  report.metric = BoundMetric::EqOpp;
  double max_f1 = -std::numeric_limits<double>::infinity();
  double min_f1 = std::numeric_limits<double>::infinity();
  double max_f2 = max_f1, min_f2 = min_f1;
  double sum_plus = 0.0, sum_minus = 0.0, exact = 0.0;
  for (int y = 0; y < K; ++y) {
    if (joint.p_plus[y] <= 0.0 || joint.p_minus[y] <= 0.0)
      throw DegenerateClassGroup(
          y, "zero-mass cell makes the per-class conditional undefined");
    const double miss_plus = 1.0 - base.C_plus[y][y];
    const double miss_minus = 1.0 - base.C_minus[y][y];
    if (miss_plus <= 0.0)
      throw PerfectClassDegenerate(
          y, "C_plus diagonal leaves no misclassification mass to rescale");
    if (miss_minus <= 0.0)
      throw PerfectClassDegenerate(
          y, "C_minus diagonal leaves no misclassification mass to rescale");
    const double f1 = (base.C_plus[y][y] - base.C_minus[y][y]) / miss_minus;
    const double f2 = (base.C_minus[y][y] - base.C_plus[y][y]) / miss_plus;
    max_f1 = std::max(max_f1, f1);
    min_f1 = std::min(min_f1, f1);
    max_f2 = std::max(max_f2, f2);
    min_f2 = std::min(min_f2, f2);
    const double t1 = joint.p_minus[y] * f1;
    const double t2 = joint.p_plus[y] * f2;
    sum_plus += t1;
    sum_minus += t2;
    exact += std::max(t1, t2);
  }
  const double group_minus = joint.p_minus_total();
  const double group_plus = joint.p_plus_total();
  report.oriented_plus = {group_minus * max_f1, group_minus * min_f1};
  report.oriented_minus = {group_plus * max_f2, group_plus * min_f2};
  report.exact_sum_plus = sum_plus;
  report.exact_sum_minus = sum_minus;
  report.exact_threshold = exact;
  return report;
}

// ---------------------------------------------------------------------------
// Equalized odds
// ---------------------------------------------------------------------------

EqOddsSolution solve_eqodds_zero(const LabelGroupJoint& joint,
                                 const BaseClassifier& base,
                                 double ratio_tol) {
  require_valid(validate_inputs(joint, base, Tier::Strict));
  const int K = joint.K;

  // Constant-ratio screen over the off-diagonal complement masses.
  double max_deviation = 0.0;
  for (int y = 0; y < K; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int yhat = 0; yhat < K; ++yhat) {
      if (yhat == y) continue;
      const double denom = 1.0 - base.C_minus[y][yhat];
      if (denom == 0.0)
        throw DenominatorVanishes(
            "off-diagonal complement 1-C_minus[" + std::to_string(y) + "][" +
            std::to_string(yhat) + "] vanishes");
      const double ratio = (1.0 - base.C_plus[y][yhat]) / denom;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (K > 1) max_deviation = std::max(max_deviation, hi - lo);
  }
  if (max_deviation > ratio_tol) throw RatioConditionFailed(max_deviation);

  EqOddsSolution sol;
  sol.ratio_condition_met = true;
  sol.ratio_max_deviation = max_deviation;
  sol.r.resize(K);
  Vec mem_rate_plus(K, 0.0);  // p_D w_y^+ = P(D=1 | Y=y, A=1)
  for (int y = 0; y < K; ++y) {
    const double miss_plus = 1.0 - base.C_plus[y][y];
    const double miss_minus = 1.0 - base.C_minus[y][y];
    const double agg_denom = (K - 1.0) - miss_minus;
    if (std::abs(agg_denom) < 1e-12)
      throw DenominatorVanishes("aggregated ratio denominator (K-1)-(1-C_minus["
                                + std::to_string(y) + "][" +
                                std::to_string(y) + "]) vanishes");
    sol.r[y] = ((K - 1.0) - miss_plus) / agg_denom;
    const double numer = base.C_minus[y][y] - base.C_plus[y][y];
    const double denom = miss_plus - sol.r[y] * miss_minus;
    if (std::abs(denom) < 1e-12) {
      if (std::abs(numer) < 1e-10) {
        // Equal diagonals: the class already satisfies the row constraints
        // and needs no memorized mass.
        mem_rate_plus[y] = 0.0;
        continue;
      }
      throw DenominatorVanishes(
          "rescaling denominator vanishes at label " + std::to_string(y) +
          " while the diagonal difference " + std::to_string(numer) +
          " does not");
    }
    mem_rate_plus[y] = numer / denom;
  }

  double p_D = 0.0;
  for (int y = 0; y < K; ++y)
    p_D += (joint.p_plus[y] + sol.r[y] * joint.p_minus[y]) * mem_rate_plus[y];
  sol.p_D_required = p_D;
  if (!(p_D > 0.0))
    throw SolutionNotProbability(
        "required memorized mass p_D = " + std::to_string(p_D) +
        " is not positive (an already-fair classifier needs none)");
  if (!(p_D < 1.0))
    throw SolutionNotProbability("required memorized mass p_D = " +
                                 std::to_string(p_D) + " reaches 1");
  for (int y = 0; y < K; ++y) {
    const double rate_plus = mem_rate_plus[y];
    const double rate_minus = sol.r[y] * mem_rate_plus[y];
    if (rate_plus < -1e-12 || rate_plus > 1.0 + 1e-12)
      throw SolutionNotProbability(
          "memorized share of cell (Y=" + std::to_string(y) +
          ", A=1) is " + std::to_string(rate_plus));
    if (rate_minus < -1e-12 || rate_minus > 1.0 + 1e-12)
      throw SolutionNotProbability(
          "memorized share of cell (Y=" + std::to_string(y) +
          ", A=0) is " + std::to_string(rate_minus));
  }

  sol.q.resize(K);
  sol.q_plus.resize(K);
  for (int y = 0; y < K; ++y) {
    const double rate = std::clamp(mem_rate_plus[y], 0.0, 1.0);
    sol.q_plus[y] = joint.p_plus[y] * rate / p_D;
    sol.q[y] =
        (joint.p_plus[y] + sol.r[y] * joint.p_minus[y]) * rate / p_D;
    if (sol.q_plus[y] > sol.q[y]) sol.q_plus[y] = sol.q[y];
  }

  MemorizedComposition comp{p_D, sol.q, sol.q_plus};
  Scenario embedded{joint, comp, base};
  try {
    double worst = 0.0;
    for (const Vec& row : gaps_by_enumeration(embedded).eqodds)
      worst = std::max(worst, max_abs(row));
    sol.oracle_residual = worst;
  } catch (const DegenerateSlice&) {
    // A class memorized in full leaves the oracle without an unmemorized
    // slice; fall back to the closed-form gap of the embedded scenario.
    double worst = 0.0;
    for (const Vec& row : eqodds_gap(embedded))
      worst = std::max(worst, max_abs(row));
    sol.oracle_residual = worst;
  }
  return sol;
}

}  // namespace memfair
