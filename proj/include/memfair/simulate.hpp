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
#include <string>
#include <vector>

#include "memfair/gaps.hpp"
#include "memfair/population.hpp"

namespace memfair::sim {

// ---------------------------------------------------------------------------
// Deterministic counter-based PRNG.
//
// The generator is the SplitMix64 finalizer applied in counter mode:
//   value(seed, i) = mix64(seed + (i+1) * 0x9E3779B97F4A7C15)
// where mix64 is the xor-shift/multiply finalizer with constants
// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB. Uniform doubles take the top 53
// bits: (value >> 11) * 2^-53, giving values in [0, 1). Because each output
// is a pure function of (seed, counter), draws can be partitioned across
// shards in any way without changing the result. This construction is frozen:
// changing it would change every recorded run.
// ---------------------------------------------------------------------------
std::uint64_t mix64(std::uint64_t z);
std::uint64_t counter_value(std::uint64_t seed, std::uint64_t counter);
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

// Finite-sample realization of a scenario's joint table. counts is indexed
// like JointDistribution (a, y, d, yhat), flattened with the same layout.
struct SampleCounts {
  int K = 0;
  std::vector<std::int64_t> counts;  // size 2 * K * 2 * K
  std::int64_t n = 0;
  std::uint64_t seed = 0;

  std::int64_t at(int a, int y, int d, int yhat) const;
  std::int64_t& at(int a, int y, int d, int yhat);
};

// Draws n samples from the exact joint table, multinomially over the nonzero
// cells via an alias table (two counter values per draw: 2i and 2i+1).
// Reproducible per (scenario, n, seed); requires Consistent-tier validity.
SampleCounts sample(const Scenario& scenario, std::int64_t n,
                    std::uint64_t seed);

// Plug-in gap estimates with standard errors. An entry whose conditioning
// event has zero sampled mass is flagged missing (its estimate and standard
// error are meaningless and set to zero).
struct EmpiricalGapReport {
  GapReport gaps;  // method = Empirical
  Vec sp_se;
  Vec eqopp_se;
  Mat eqodds_se;
  std::vector<bool> sp_missing;
  std::vector<bool> eqopp_missing;
  std::vector<std::vector<bool>> eqodds_missing;
  std::int64_t n = 0;

  bool any_missing() const;
};

// Each gap is a difference of two conditional proportions estimated from
// disjoint count groups; the standard error is the delta-method value
//   se^2 = phat_1 (1-phat_1)/n_1 + phat_0 (1-phat_0)/n_0.
EmpiricalGapReport empirical_gaps(const SampleCounts& counts);

// One comparison line of the Monte Carlo verification.
struct McEntry {
  std::string metric;  // "sp", "eqopp", "eqodds"
  int y = 0;           // conditioning label (unused for sp)
  int yhat = 0;        // predicted label (for sp and eqodds)
  double closed = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  bool missing = false;
  bool pass = false;
};

struct McReport {
  bool pass = false;
  int checked = 0;
  int failed = 0;
  std::vector<McEntry> entries;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  double z = 0.0;
};

// Compares a closed-form report against an empirical one: an entry passes if
// |closed - empirical| <= z * se; entries with se < 1e-12 are compared
// exactly at tolerance 1e-9; missing empirical entries fail (they verify
// nothing). Exposed separately so corrupted closed forms can be shown to
// fail.
McReport mc_compare(const GapReport& closed, const EmpiricalGapReport& emp,
                    double z);

// Samples the scenario and compares its closed-form gaps against the
// empirical estimates.
McReport mc_verify(const Scenario& scenario, std::int64_t n,
                   std::uint64_t seed, double z);

}  // namespace memfair::sim
