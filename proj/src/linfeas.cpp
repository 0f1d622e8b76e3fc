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
#include "memfair/linfeas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace memfair::linfeas {

namespace {

// Reduced costs this close to zero are treated as zero when choosing an
// entering column; pivots below kPivotEnter are refused in the ratio test.
constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotEnter = 1e-11;

struct NormRow {
  Vec a;
  double b = 0.0;
  bool is_eq = false;
};

std::vector<NormRow> normalized_rows(const LinearSystem& s) {
  if (s.n < 0) throw Error("linfeas: negative variable count");
  if (static_cast<int>(s.eq_rhs.size()) != s.eq_count() ||
      static_cast<int>(s.ineq_rhs.size()) != s.ineq_count())
    throw Error("linfeas: right-hand-side length mismatch");
  if (!s.lower.empty() && static_cast<int>(s.lower.size()) != s.n)
    throw Error("linfeas: lower-bound vector must be empty or length n");

  auto check_row = [&](const Vec& a, double b) {
    if (static_cast<int>(a.size()) != s.n)
      throw Error("linfeas: coefficient row length mismatch");
    for (double v : a)
      if (!std::isfinite(v)) throw Error("linfeas: non-finite coefficient");
    if (!std::isfinite(b)) throw Error("linfeas: non-finite right-hand side");
  };

  std::vector<NormRow> rows;
  rows.reserve(s.row_count());
  for (int i = 0; i < s.eq_count(); ++i) {
    check_row(s.eq_coeffs[i], s.eq_rhs[i]);
    rows.push_back({s.eq_coeffs[i], s.eq_rhs[i], true});
  }
  for (int j = 0; j < s.ineq_count(); ++j) {
    check_row(s.ineq_coeffs[j], s.ineq_rhs[j]);
    rows.push_back({s.ineq_coeffs[j], s.ineq_rhs[j], false});
  }
  if (!s.lower.empty()) {
    for (int k = 0; k < s.n; ++k) {
      if (!s.lower[k]) continue;
      if (!std::isfinite(*s.lower[k]))
        throw Error("linfeas: non-finite lower bound");
      Vec a(s.n, 0.0);
      a[k] = -1.0;
      rows.push_back({std::move(a), -*s.lower[k], false});
    }
  }
  return rows;
}

double row_scale_power_of_two(const NormRow& row) {
  double maxabs = std::abs(row.b);
  for (double v : row.a) maxabs = std::max(maxabs, std::abs(v));
  if (maxabs == 0.0) return 1.0;
  int exponent = 0;
  std::frexp(maxabs, &exponent);  // maxabs = mantissa * 2^exponent
  return std::ldexp(1.0, -exponent);
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

int LinearSystem::bound_count() const {
  int c = 0;
  for (const auto& l : lower)
    if (l) ++c;
  return c;
}

double check_witness(const LinearSystem& system, const Vec& x) {
  if (static_cast<int>(x.size()) != system.n)
    throw Error("check_witness: point has wrong dimension");
  double worst = 0.0;
  for (const NormRow& row : normalized_rows(system)) {
    double ax = 0.0;
    for (int k = 0; k < system.n; ++k) ax += row.a[k] * x[k];
    const double viol = row.is_eq ? std::abs(ax - row.b) : (ax - row.b);
    worst = std::max(worst, viol);
  }
  return std::max(worst, 0.0);
}

bool check_certificate(const LinearSystem& system, const Vec& y) {
  const std::vector<NormRow> rows = normalized_rows(system);
  if (y.size() != rows.size())
    throw Error("check_certificate: multiplier count mismatch");
  const double ynorm = inf_norm(y);
  if (ynorm == 0.0) return false;

  Vec combo(system.n, 0.0);
  double combo_rhs = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(y[i])) return false;
    if (!rows[i].is_eq && y[i] < -kFeasTol * std::max(1.0, ynorm))
      return false;  // inequality multipliers must be nonnegative
    for (int k = 0; k < system.n; ++k) combo[k] += y[i] * rows[i].a[k];
    combo_rhs += y[i] * rows[i].b;
    scale += std::abs(y[i]) *
             std::max(inf_norm(rows[i].a), std::abs(rows[i].b));
  }
  scale = std::max(1.0, scale);
  if (inf_norm(combo) > kFeasTol * scale) return false;
  return combo_rhs <= -kFeasTol * scale;
}

FeasibilityResult solve_feasibility(const LinearSystem& system) {
  const std::vector<NormRow> rows = normalized_rows(system);
  const int n = system.n;
  const int m = static_cast<int>(rows.size());

  // Row equilibration (exact powers of two) and sign flips to make the
  // right-hand side nonnegative.
  Vec scale(m), sign(m);
  for (int i = 0; i < m; ++i) {
    scale[i] = row_scale_power_of_two(rows[i]);
    sign[i] = (rows[i].b * scale[i] < 0.0) ? -1.0 : 1.0;
  }

  // Columns: split variables x = x+ - x-, one slack per inequality row, one
  // artificial per row (the artificials make the phase-1 duals readable off
  // the final reduced-cost row for every row uniformly).
  std::vector<int> slack_col(m, -1);
  int n_slack = 0;
  for (int i = 0; i < m; ++i)
    if (!rows[i].is_eq) slack_col[i] = 2 * n + n_slack++;
  const int art0 = 2 * n + n_slack;
  const int ncol = art0 + m;

  std::vector<Vec> T(m, Vec(ncol, 0.0));
  Vec rhs(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double f = sign[i] * scale[i];
    for (int k = 0; k < n; ++k) {
      T[i][k] = f * rows[i].a[k];
      T[i][n + k] = -T[i][k];
    }
    if (slack_col[i] >= 0) T[i][slack_col[i]] = sign[i];
    T[i][art0 + i] = 1.0;
    rhs[i] = f * rows[i].b;  // >= 0 by the choice of sign
  }

  // Start from the slack where it is feasible (sign +1), else the artificial.
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i)
    basis[i] = (slack_col[i] >= 0 && sign[i] > 0.0) ? slack_col[i] : art0 + i;

  // Phase-1 objective: minimize the sum of artificials. obj holds reduced
  // costs for every column (artificial columns included, so the duals stay
  // readable after they leave the basis).
  Vec obj(ncol, 0.0);
  for (int j = art0; j < ncol; ++j) obj[j] = 1.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < art0) continue;
    for (int j = 0; j < ncol; ++j) obj[j] -= T[i][j];
  }

  const long max_iter = 2000 + 400L * (m + ncol);
  for (long iter = 0;; ++iter) {
    if (iter > max_iter)
      throw NumericalBreakdown(
          "feasibility engine exceeded its pivot budget (" +
          std::to_string(max_iter) + " pivots)");

    // Bland: lowest non-artificial column with a negative reduced cost.
    int enter = -1;
    for (int j = 0; j < art0; ++j) {
      if (obj[j] < -kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // phase-1 optimum reached

    // Ratio test; ties go to the lowest basic variable index (Bland).
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T[i][enter] <= kPivotEnter) continue;
      const double ratio = rhs[i] / T[i][enter];
      if (leave < 0) {
        best = ratio;
        leave = i;
        continue;
      }
      const double eps = 1e-12 * (1.0 + std::abs(best));
      if (ratio < best - eps) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + eps && basis[i] < basis[leave]) {
        leave = i;
      }
    }
    if (leave < 0)
      throw NumericalBreakdown(
          "no usable pivot in the entering column (largest entry below the "
          "pivot threshold)");

    // Gauss-Jordan pivot on (leave, enter).
    const double pivot = T[leave][enter];
    if (!(std::abs(pivot) > kPivotTol))
      throw NumericalBreakdown("pivot magnitude below threshold");
    for (int j = 0; j < ncol; ++j) T[leave][j] /= pivot;
    rhs[leave] /= pivot;
    T[leave][enter] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < ncol; ++j) T[i][j] -= f * T[leave][j];
      rhs[i] -= f * rhs[leave];
      T[i][enter] = 0.0;
      if (rhs[i] < 0.0 && rhs[i] > -1e-11) rhs[i] = 0.0;
    }
    const double fo = obj[enter];
    if (fo != 0.0) {
      for (int j = 0; j < ncol; ++j) obj[j] -= fo * T[leave][j];
      obj[enter] = 0.0;
    }
    basis[leave] = enter;
  }

  // Optimal value of phase 1: total artificial mass still in the basis.
  double art_mass = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= art0) art_mass += std::max(rhs[i], 0.0);

  FeasibilityResult result;
  if (art_mass <= kFeasTol) {
    result.status = FeasStatus::Feasible;
    Vec value(ncol, 0.0);
    for (int i = 0; i < m; ++i) value[basis[i]] = rhs[i];
    result.witness.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
      result.witness[k] = value[k] - value[n + k];

    // Self-verification, scale-relative so legitimately large witnesses and
    // large rows are not rejected for honest rounding.
    const double xnorm = std::max(1.0, inf_norm(result.witness));
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (int k = 0; k < n; ++k) ax += rows[i].a[k] * result.witness[k];
      const double viol =
          rows[i].is_eq ? std::abs(ax - rows[i].b) : (ax - rows[i].b);
      const double rel =
          std::max({1.0, inf_norm(rows[i].a) * xnorm, std::abs(rows[i].b)});
      if (viol > kFeasTol * rel)
        throw NumericalBreakdown(
            "phase-1 reported feasible but the witness violates row " +
            std::to_string(i) + " by " + std::to_string(viol));
    }
    return result;
  }

  result.status = FeasStatus::Infeasible;
  // Duals off the final reduced costs of the artificial columns, mapped back
  // through the sign flip and the row scaling.
  result.certificate.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double pi = 1.0 - obj[art0 + i];
    result.certificate[i] = -pi * sign[i] * scale[i];
  }
  // Clamp rounding dust on inequality multipliers (they are provably
  // nonnegative at a phase-1 optimum).
  for (int i = 0; i < m; ++i) {
    if (!rows[i].is_eq && result.certificate[i] < 0.0 &&
        result.certificate[i] > -1e-11)
      result.certificate[i] = 0.0;
  }
  if (!check_certificate(system, result.certificate))
    throw NumericalBreakdown(
        "phase-1 reported infeasible but the dual certificate fails "
        "verification");
  return result;
}

}  // namespace memfair::linfeas
