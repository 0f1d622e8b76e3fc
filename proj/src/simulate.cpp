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
#include "memfair/simulate.hpp"

#include <array>
#include <cmath>
#include <cstddef>

namespace memfair::sim {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t counter_value(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_value(seed, counter) >> 11) * 0x1.0p-53;
}

std::int64_t SampleCounts::at(int a, int y, int d, int yhat) const {
  return counts[(((static_cast<std::size_t>(a) * K + y) * 2 + d) * K + yhat)];
}

std::int64_t& SampleCounts::at(int a, int y, int d, int yhat) {
  return counts[(((static_cast<std::size_t>(a) * K + y) * 2 + d) * K + yhat)];
}

SampleCounts sample(const Scenario& scenario, std::int64_t n,
                    std::uint64_t seed) {
  if (n < 0) throw Error("sample: negative sample count");
  const JointDistribution table = joint_table(scenario);
  const int K = table.K;

  // Nonzero cells in flat-index order; the alias table is built over these.
  std::vector<std::size_t> cell_index;
  std::vector<double> prob;
  double total = 0.0;
  for (std::size_t i = 0; i < table.table.size(); ++i) {
    if (table.table[i] > 0.0) {
      cell_index.push_back(i);
      prob.push_back(table.table[i]);
      total += table.table[i];
    }
  }
  if (cell_index.empty()) throw Error("sample: no cell has positive mass");
  for (double& p : prob) p /= total;

  // Vose alias construction. Stacks are processed LIFO over ascending seed
  // order, which makes the table (and hence every draw) deterministic.
  const std::size_t m = prob.size();
  std::vector<double> cut(m, 1.0);
  std::vector<std::size_t> alias(m);
  for (std::size_t i = 0; i < m; ++i) alias[i] = i;
  std::vector<double> scaled(m);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < m; ++i) {
    scaled[i] = prob[i] * static_cast<double>(m);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    large.pop_back();
    cut[s] = scaled[s];
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers (from either stack, by floating-point dust) take the whole bin.
  for (const std::size_t i : large) cut[i] = 1.0;
  for (const std::size_t i : small) cut[i] = 1.0;

  SampleCounts out;
  out.K = K;
  out.counts.assign(table.table.size(), 0);
  out.n = n;
  out.seed = seed;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u1 = counter_uniform(seed, 2 * static_cast<std::uint64_t>(i));
    const double u2 =
        counter_uniform(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    std::size_t slot = static_cast<std::size_t>(u1 * static_cast<double>(m));
    if (slot >= m) slot = m - 1;
    const std::size_t cell = (u2 < cut[slot]) ? slot : alias[slot];
    ++out.counts[cell_index[cell]];
  }
  return out;
}

bool EmpiricalGapReport::any_missing() const {
  for (bool b : sp_missing)
    if (b) return true;
  for (bool b : eqopp_missing)
    if (b) return true;
  for (const auto& row : eqodds_missing)
    for (bool b : row)
      if (b) return true;
  return false;
}

EmpiricalGapReport empirical_gaps(const SampleCounts& counts) {
  const int K = counts.K;
  if (K < 2 ||
      counts.counts.size() != static_cast<std::size_t>(4) * K * K)
    throw Error("empirical_gaps: malformed counts");

  EmpiricalGapReport report;
  report.n = counts.n;
  report.gaps.method = GapMethod::Empirical;
  report.gaps.sp.assign(K, 0.0);
  report.gaps.eqopp.assign(K, 0.0);
  report.gaps.eqodds.assign(K, Vec(K, 0.0));
  report.sp_se.assign(K, 0.0);
  report.eqopp_se.assign(K, 0.0);
  report.eqodds_se.assign(K, Vec(K, 0.0));
  report.sp_missing.assign(K, false);
  report.eqopp_missing.assign(K, false);
  report.eqodds_missing.assign(K, std::vector<bool>(K, false));

  std::int64_t group_n[2] = {0, 0};
  std::vector<std::array<std::int64_t, 2>> cell_n(
      K, std::array<std::int64_t, 2>{0, 0});
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < K; ++y)
      for (int d = 0; d < 2; ++d)
        for (int yhat = 0; yhat < K; ++yhat) {
          group_n[a] += counts.at(a, y, d, yhat);
          cell_n[y][a] += counts.at(a, y, d, yhat);
        }

  for (int yhat = 0; yhat < K; ++yhat) {
    if (group_n[0] == 0 || group_n[1] == 0) {
      report.sp_missing[yhat] = true;
      continue;
    }
    double phat[2], var = 0.0;
    for (int a = 0; a < 2; ++a) {
      std::int64_t hits = 0;
      for (int y = 0; y < K; ++y)
        for (int d = 0; d < 2; ++d) hits += counts.at(a, y, d, yhat);
      phat[a] = static_cast<double>(hits) / static_cast<double>(group_n[a]);
      var += phat[a] * (1.0 - phat[a]) / static_cast<double>(group_n[a]);
    }
    report.gaps.sp[yhat] = phat[1] - phat[0];
    report.sp_se[yhat] = std::sqrt(var);
  }

  for (int y = 0; y < K; ++y) {
    for (int yhat = 0; yhat < K; ++yhat) {
      if (cell_n[y][0] == 0 || cell_n[y][1] == 0) {
        report.eqodds_missing[y][yhat] = true;
        continue;
      }
      double phat[2], var = 0.0;
      for (int a = 0; a < 2; ++a) {
        const std::int64_t hits =
            counts.at(a, y, 0, yhat) + counts.at(a, y, 1, yhat);
        phat[a] =
            static_cast<double>(hits) / static_cast<double>(cell_n[y][a]);
        var += phat[a] * (1.0 - phat[a]) / static_cast<double>(cell_n[y][a]);
      }
      report.gaps.eqodds[y][yhat] = phat[1] - phat[0];
      report.eqodds_se[y][yhat] = std::sqrt(var);
    }
    report.gaps.eqopp[y] = report.gaps.eqodds[y][y];
    report.eqopp_se[y] = report.eqodds_se[y][y];
    report.eqopp_missing[y] = report.eqodds_missing[y][y];
  }
  return report;
}

namespace {

McEntry make_entry(const std::string& metric, int y, int yhat, double closed,
                   double empirical, double se, bool missing, double z) {
  McEntry entry;
  entry.metric = metric;
  entry.y = y;
  entry.yhat = yhat;
  entry.closed = closed;
  entry.empirical = empirical;
  entry.se = se;
  entry.missing = missing;
  if (missing) {
    entry.pass = false;  // nothing was estimated, so nothing is verified
  } else if (se < 1e-12) {
    entry.pass = std::abs(closed - empirical) <= 1e-9;
  } else {
    entry.pass = std::abs(closed - empirical) <= z * se;
  }
  return entry;
}

}  // namespace

McReport mc_compare(const GapReport& closed, const EmpiricalGapReport& emp,
                    double z) {
  const int K = static_cast<int>(closed.sp.size());
  if (static_cast<int>(emp.gaps.sp.size()) != K ||
      static_cast<int>(closed.eqodds.size()) != K ||
      static_cast<int>(emp.gaps.eqodds.size()) != K)
    throw Error("mc_compare: report dimensions disagree");

  McReport report;
  report.z = z;
  report.n = emp.n;
  for (int yhat = 0; yhat < K; ++yhat)
    report.entries.push_back(make_entry("sp", 0, yhat, closed.sp[yhat],
                                        emp.gaps.sp[yhat], emp.sp_se[yhat],
                                        emp.sp_missing[yhat], z));
  for (int y = 0; y < K; ++y)
    report.entries.push_back(make_entry("eqopp", y, y, closed.eqopp[y],
                                        emp.gaps.eqopp[y], emp.eqopp_se[y],
                                        emp.eqopp_missing[y], z));
  for (int y = 0; y < K; ++y)
    for (int yhat = 0; yhat < K; ++yhat)
      report.entries.push_back(
          make_entry("eqodds", y, yhat, closed.eqodds[y][yhat],
                     emp.gaps.eqodds[y][yhat], emp.eqodds_se[y][yhat],
                     emp.eqodds_missing[y][yhat], z));
  report.checked = static_cast<int>(report.entries.size());
  for (const McEntry& entry : report.entries)
    if (!entry.pass) ++report.failed;
  report.pass = report.failed == 0;
  return report;
}

McReport mc_verify(const Scenario& scenario, std::int64_t n,
                   std::uint64_t seed, double z) {
  const GapReport closed = closed_form_gaps(scenario);
  const EmpiricalGapReport emp = empirical_gaps(sample(scenario, n, seed));
  McReport report = mc_compare(closed, emp, z);
  report.seed = seed;
  return report;
}

}  // namespace memfair::sim
