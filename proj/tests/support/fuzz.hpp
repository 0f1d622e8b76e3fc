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
#ifndef MEMFAIR_TESTS_SUPPORT_FUZZ_HPP_
#define MEMFAIR_TESTS_SUPPORT_FUZZ_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "memfair/linfeas.hpp"
#include "memfair/population.hpp"
#include "memfair/simulate.hpp"

namespace memfair::testsupport {

// Deterministic test RNG on top of the library's counter generator, so fuzz
// corpora are reproducible across runs and machines.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : seed_(seed) {}

  double next() { return sim::counter_uniform(seed_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  int pick(int n) {
    const int v = static_cast<int>(next() * n);
    return v >= n ? n - 1 : v;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Random probability vector with every entry bounded away from zero.
inline Vec random_stochastic_vec(TestRng& rng, int n, double floor = 0.05) {
  Vec v(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = rng.uniform(floor, 1.0);
    total += v[i];
  }
  for (int i = 0; i < n; ++i) v[i] /= total;
  return v;
}

// Random population joint: all 2K cells positive with comfortable margins.
inline LabelGroupJoint random_joint(TestRng& rng, int K) {
  Vec cells = random_stochastic_vec(rng, 2 * K);
  LabelGroupJoint joint;
  joint.K = K;
  joint.p_plus.assign(cells.begin(), cells.begin() + K);
  joint.p_minus.assign(cells.begin() + K, cells.end());
  return joint;
}

// Random confusion matrices, rows bounded away from the simplex boundary
// (in particular no diagonal entry can reach 1).
inline BaseClassifier random_base(TestRng& rng, int K) {
  BaseClassifier base;
  base.C_plus.resize(K);
  base.C_minus.resize(K);
  for (int y = 0; y < K; ++y) {
    base.C_plus[y] = random_stochastic_vec(rng, K);
    base.C_minus[y] = random_stochastic_vec(rng, K);
  }
  return base;
}

// Confusion matrices whose rows are constant per group: the prediction rates
// then equal the shared row for any label distribution, which decouples them
// from the memorized composition.
inline BaseClassifier row_constant_base(TestRng& rng, int K) {
  const Vec row_plus = random_stochastic_vec(rng, K);
  const Vec row_minus = random_stochastic_vec(rng, K);
  BaseClassifier base;
  base.C_plus.assign(K, row_plus);
  base.C_minus.assign(K, row_minus);
  return base;
}

// Random memorized composition dominated cell-by-cell by the population with
// margin: the memorized share of every (label, group) cell lies in
// [share_lo, share_hi] (< 1), so no slice degenerates and the scenario
// passes the strictest validation tier.
inline MemorizedComposition random_memo(TestRng& rng,
                                        const LabelGroupJoint& joint,
                                        double share_lo = 0.05,
                                        double share_hi = 0.85) {
  const int K = joint.K;
  Vec mass_plus(K), mass_minus(K);
  double p_D = 0.0;
  for (int y = 0; y < K; ++y) {
    mass_plus[y] = rng.uniform(share_lo, share_hi) * joint.p_plus[y];
    mass_minus[y] = rng.uniform(share_lo, share_hi) * joint.p_minus[y];
    p_D += mass_plus[y] + mass_minus[y];
  }
  MemorizedComposition memo;
  memo.p_D = p_D;
  memo.q.resize(K);
  memo.q_plus.resize(K);
  for (int y = 0; y < K; ++y) {
    memo.q_plus[y] = mass_plus[y] / p_D;
    memo.q[y] = (mass_plus[y] + mass_minus[y]) / p_D;
  }
  return memo;
}

inline Scenario random_scenario(TestRng& rng, int K) {
  Scenario s;
  s.joint = random_joint(rng, K);
  s.base = random_base(rng, K);
  s.memo = random_memo(rng, s.joint);
  return s;
}

inline Scenario random_row_constant_scenario(TestRng& rng, int K) {
  Scenario s;
  s.joint = random_joint(rng, K);
  s.base = row_constant_base(rng, K);
  s.memo = random_memo(rng, s.joint);
  return s;
}

// Exchanges the two groups everywhere: population cells, confusion matrices,
// prediction rates, and the group split of the memorized set. All gaps of
// the swapped scenario are the negatives of the originals.
inline Scenario swap_groups(const Scenario& s) {
  Scenario t = s;
  std::swap(t.joint.p_plus, t.joint.p_minus);
  std::swap(t.base.C_plus, t.base.C_minus);
  std::swap(t.base.phi_plus, t.base.phi_minus);
  for (int y = 0; y < s.K(); ++y)
    t.memo.q_plus[y] = s.memo.q[y] - s.memo.q_plus[y];
  return t;
}

// A random linear system together with the planted witness that makes it
// feasible by construction.
struct PlantedFeasible {
  linfeas::LinearSystem system;
  Vec witness;
};

inline PlantedFeasible planted_feasible_system(TestRng& rng) {
  const int n = 2 + rng.pick(6);
  const int eqs = rng.pick(n);  // strictly fewer equalities than variables
  const int ineqs = 1 + rng.pick(6);
  Vec x0(n);
  for (int k = 0; k < n; ++k) x0[k] = rng.uniform(-3.0, 3.0);

  linfeas::LinearSystem sys;
  sys.n = n;
  for (int i = 0; i < eqs; ++i) {
    Vec row(n);
    double b = 0.0;
    for (int k = 0; k < n; ++k) {
      row[k] = rng.uniform(-2.0, 2.0);
      b += row[k] * x0[k];
    }
    sys.eq_coeffs.push_back(row);
    sys.eq_rhs.push_back(b);
  }
  for (int i = 0; i < ineqs; ++i) {
    Vec row(n);
    double ax = 0.0;
    for (int k = 0; k < n; ++k) {
      row[k] = rng.uniform(-2.0, 2.0);
      ax += row[k] * x0[k];
    }
    sys.ineq_coeffs.push_back(row);
    sys.ineq_rhs.push_back(ax + rng.uniform(0.0, 2.0));  // slack keeps x0 in
  }
  if (rng.next() < 0.5) {
    sys.lower.assign(n, std::nullopt);
    for (int k = 0; k < n; ++k)
      if (rng.next() < 0.5) sys.lower[k] = x0[k] - rng.uniform(0.0, 2.0);
  }
  return {std::move(sys), std::move(x0)};
}

// A random linear system made infeasible by a planted contradictory pair
// (v.x <= lo together with v.x >= hi for hi > lo), buried among unrelated
// satisfiable-looking rows. The pair alone is a valid certificate, so the
// system is infeasible no matter what else is added.
struct PlantedInfeasible {
  linfeas::LinearSystem system;
  Vec certificate;  // one multiplier per certificate row
};

inline PlantedInfeasible planted_infeasible_system(TestRng& rng) {
  const int n = 2 + rng.pick(6);
  const int extra = rng.pick(5);
  Vec v(n);
  for (int k = 0; k < n; ++k) v[k] = rng.uniform(-2.0, 2.0);
  v[rng.pick(n)] = rng.uniform(1.0, 2.0);  // keep v away from zero
  const double lo = rng.uniform(-2.0, 2.0);
  const double hi = lo + rng.uniform(0.5, 2.0);

  linfeas::LinearSystem sys;
  sys.n = n;
  const bool pin_with_equality = rng.next() < 0.4;
  if (pin_with_equality) {
    sys.eq_coeffs.push_back(v);
    sys.eq_rhs.push_back(lo);
  } else {
    sys.ineq_coeffs.push_back(v);
    sys.ineq_rhs.push_back(lo);
  }
  Vec neg(n);
  for (int k = 0; k < n; ++k) neg[k] = -v[k];
  sys.ineq_coeffs.push_back(neg);
  sys.ineq_rhs.push_back(-hi);
  for (int i = 0; i < extra; ++i) {
    Vec row(n);
    for (int k = 0; k < n; ++k) row[k] = rng.uniform(-2.0, 2.0);
    sys.ineq_coeffs.push_back(row);
    sys.ineq_rhs.push_back(rng.uniform(0.5, 4.0));
  }

  PlantedInfeasible out;
  // Certificate rows: equalities first, then inequalities in order.
  out.certificate.assign(sys.eq_count() + sys.ineq_count(), 0.0);
  if (pin_with_equality) {
    out.certificate[0] = 1.0;           // the pinned v.x = lo row
    out.certificate[sys.eq_count()] = 1.0;  // the -v.x <= -hi row
  } else {
    out.certificate[0] = 1.0;  // v.x <= lo
    out.certificate[1] = 1.0;  // -v.x <= -hi
  }
  out.system = std::move(sys);
  return out;
}

}  // namespace memfair::testsupport

#endif  // MEMFAIR_TESTS_SUPPORT_FUZZ_HPP_
