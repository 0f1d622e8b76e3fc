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
#include <string>

#include <json.hpp>

#include "memfair/population.hpp"

namespace memfair::cli {

// A scenario file may omit the memorization block when the composition is the
// unknown being solved for.
struct PartialScenario {
  LabelGroupJoint joint;
  BaseClassifier base;
  std::optional<MemorizedComposition> memo;

  Scenario full() const;  // throws ScenarioInvalid when memo is absent
};

// A file/parse problem (missing file, bad JSON, unknown or missing fields,
// wrong dimensions). Distinct from ScenarioInvalid, which covers violated
// distribution invariants; both map to the same process exit code.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Parses a scenario document:
//   {
//     "K": 2,
//     "population": {"p_plus": [...], "p_minus": [...]},
//     "base_classifier": {"C_plus": [[...]], "C_minus": [[...]],
//                         "phi_plus": [...], "phi_minus": [...]},   // phi optional
//     "memorization": {"p_D": 0.2, "q": [...], "q_plus": [...]}     // optional
//   }
// Unknown fields anywhere are rejected. With normalize set, each distribution
// block (p over both groups jointly, q, each confusion row, each phi vector)
// is rescaled to sum one before validation; nothing is normalized otherwise.
PartialScenario parse_scenario(const std::string& text, bool normalize);
PartialScenario load_scenario_file(const std::string& path, bool normalize);

// The memorization block as a JSON object (the shape a scenario file embeds).
nlohmann::ordered_json composition_to_json(const MemorizedComposition& memo);
MemorizedComposition composition_from_json(const nlohmann::json& obj, int K);

// Serializes a full scenario to the document shape above.
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

// Deterministic JSON emitter: fixed key order (insertion order of the
// ordered_json), doubles rendered with 17 significant digits so that parsing
// the text recovers bit-identical values, two-space indentation, sorted
// nothing. Reruns of the same computation produce byte-identical documents.
std::string emit_json(const nlohmann::ordered_json& doc);

// 64-bit FNV-1a digest of a byte string, rendered as 16 hex digits; used to
// fingerprint input files in reports.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace memfair::cli
