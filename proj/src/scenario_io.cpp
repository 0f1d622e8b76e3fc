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
#include "memfair/scenario_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace memfair::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Largest class count the loader accepts; keeps malformed files from
// requesting absurd allocations.
constexpr int kMaxClasses = 512;

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw ParseError("unknown field '" + item.key() + "' in " + context);
  }
}

const json& require_field(const json& obj, const char* key,
                          const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError("missing field '" + std::string(key) + "' in " + context);
  return *it;
}

const json& require_object(const json& value, const std::string& context) {
  if (!value.is_object())
    throw ParseError(context + " must be a JSON object");
  return value;
}

double read_number(const json& value, const std::string& context) {
  if (!value.is_number())
    throw ParseError(context + " must be a number");
  return value.get<double>();
}

Vec read_vector(const json& value, int K, const std::string& context) {
  if (!value.is_array() || static_cast<int>(value.size()) != K)
    throw ParseError(context + " must be an array of " + std::to_string(K) +
                     " numbers");
  Vec out(K);
  for (int i = 0; i < K; ++i)
    out[i] = read_number(value[i], context + "[" + std::to_string(i) + "]");
  return out;
}

Mat read_matrix(const json& value, int K, const std::string& context) {
  if (!value.is_array() || static_cast<int>(value.size()) != K)
    throw ParseError(context + " must be an array of " + std::to_string(K) +
                     " rows");
  Mat out;
  out.reserve(K);
  for (int i = 0; i < K; ++i)
    out.push_back(
        read_vector(value[i], K, context + "[" + std::to_string(i) + "]"));
  return out;
}

void scale_to_sum_one(Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0)
    for (double& x : v) x /= s;
}

}  // namespace

Scenario PartialScenario::full() const {
  if (!memo)
    throw ScenarioInvalid("memorization_present",
                          "the scenario has no memorization block, so only "
                          "solve-style commands can use it");
  return Scenario{joint, *memo, base};
}

PartialScenario parse_scenario(const std::string& text, bool normalize) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  require_object(doc, "the scenario document");
  reject_unknown_keys(doc, {"K", "population", "base_classifier",
                            "memorization"},
                      "the scenario document");

  const json& k_field = require_field(doc, "K", "the scenario document");
  if (!k_field.is_number_integer())
    throw ParseError("'K' must be an integer");
  const std::int64_t k_raw = k_field.get<std::int64_t>();
  if (k_raw < 2) throw ParseError("'K' must be at least 2");
  if (k_raw > kMaxClasses)
    throw ParseError("'K' exceeds the supported maximum of " +
                     std::to_string(kMaxClasses));
  const int K = static_cast<int>(k_raw);

  PartialScenario out;
  out.joint.K = K;

  const json& pop = require_object(
      require_field(doc, "population", "the scenario document"),
      "'population'");
  reject_unknown_keys(pop, {"p_plus", "p_minus"}, "'population'");
  out.joint.p_plus =
      read_vector(require_field(pop, "p_plus", "'population'"), K,
                  "'population.p_plus'");
  out.joint.p_minus =
      read_vector(require_field(pop, "p_minus", "'population'"), K,
                  "'population.p_minus'");
  if (normalize) {
    double s = 0.0;
    for (double x : out.joint.p_plus) s += x;
    for (double x : out.joint.p_minus) s += x;
    if (s > 0.0) {
      for (double& x : out.joint.p_plus) x /= s;
      for (double& x : out.joint.p_minus) x /= s;
    }
  }

  const json& base = require_object(
      require_field(doc, "base_classifier", "the scenario document"),
      "'base_classifier'");
  reject_unknown_keys(base, {"C_plus", "C_minus", "phi_plus", "phi_minus"},
                      "'base_classifier'");
  out.base.C_plus = read_matrix(
      require_field(base, "C_plus", "'base_classifier'"), K,
      "'base_classifier.C_plus'");
  out.base.C_minus = read_matrix(
      require_field(base, "C_minus", "'base_classifier'"), K,
      "'base_classifier.C_minus'");
  if (base.contains("phi_plus"))
    out.base.phi_plus =
        read_vector(base["phi_plus"], K, "'base_classifier.phi_plus'");
  if (base.contains("phi_minus"))
    out.base.phi_minus =
        read_vector(base["phi_minus"], K, "'base_classifier.phi_minus'");
  if (normalize) {
    for (auto& row : out.base.C_plus) scale_to_sum_one(row);
    for (auto& row : out.base.C_minus) scale_to_sum_one(row);
    if (out.base.phi_plus) scale_to_sum_one(*out.base.phi_plus);
    if (out.base.phi_minus) scale_to_sum_one(*out.base.phi_minus);
  }

  if (doc.contains("memorization")) {
    MemorizedComposition memo = composition_from_json(doc["memorization"], K);
    if (normalize) {
      double s = 0.0;
      for (double x : memo.q) s += x;
      if (s > 0.0) {
        for (double& x : memo.q) x /= s;
        for (double& x : memo.q_plus) x /= s;
      }
    }
    out.memo = std::move(memo);
  }
  return out;
}

PartialScenario load_scenario_file(const std::string& path, bool normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), normalize);
}

MemorizedComposition composition_from_json(const json& obj, int K) {
  require_object(obj, "'memorization'");
  reject_unknown_keys(obj, {"p_D", "q", "q_plus"}, "'memorization'");
  MemorizedComposition memo;
  memo.p_D = read_number(require_field(obj, "p_D", "'memorization'"),
                         "'memorization.p_D'");
  memo.q = read_vector(require_field(obj, "q", "'memorization'"), K,
                       "'memorization.q'");
  memo.q_plus = read_vector(require_field(obj, "q_plus", "'memorization'"), K,
                            "'memorization.q_plus'");
  return memo;
}

nlohmann::ordered_json composition_to_json(const MemorizedComposition& memo) {
  ordered_json obj;
  obj["p_D"] = memo.p_D;
  obj["q"] = memo.q;
  obj["q_plus"] = memo.q_plus;
  return obj;
}

nlohmann::ordered_json scenario_to_json(const Scenario& scenario) {
  ordered_json doc;
  doc["K"] = scenario.K();
  doc["population"] = ordered_json{{"p_plus", scenario.joint.p_plus},
                                   {"p_minus", scenario.joint.p_minus}};
  ordered_json base;
  base["C_plus"] = scenario.base.C_plus;
  base["C_minus"] = scenario.base.C_minus;
  if (scenario.base.phi_plus) base["phi_plus"] = *scenario.base.phi_plus;
  if (scenario.base.phi_minus) base["phi_minus"] = *scenario.base.phi_minus;
  doc["base_classifier"] = std::move(base);
  doc["memorization"] = composition_to_json(scenario.memo);
  return doc;
}

namespace {

void append_escaped_string(std::string& out, const std::string& s) {
  // Reuse the library's escaping by dumping a string value.
  out += json(s).dump();
}

void append_number(std::string& out, const ordered_json& value) {
  if (value.is_number_integer()) {
    out += std::to_string(value.get<std::int64_t>());
    return;
  }
  if (value.is_number_unsigned()) {
    out += std::to_string(value.get<std::uint64_t>());
    return;
  }
  const double x = value.get<double>();
  if (!std::isfinite(x))
    throw Error("emit_json: non-finite number cannot be serialized");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void emit_value(std::string& out, const ordered_json& value, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (value.type()) {
    case ordered_json::value_t::null:
      out += "null";
      break;
    case ordered_json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case ordered_json::value_t::string:
      append_escaped_string(out, value.get<std::string>());
      break;
    case ordered_json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        emit_value(out, item, depth + 1);
      }
      out += "\n" + pad + "]";
      break;
    }
    case ordered_json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        append_escaped_string(out, item.key());
        out += ": ";
        emit_value(out, item.value(), depth + 1);
      }
      out += "\n" + pad + "}";
      break;
    }
    default:
      append_number(out, value);
      break;
  }
}

}  // namespace

std::string emit_json(const nlohmann::ordered_json& doc) {
  std::string out;
  emit_value(out, doc, 0);
  out += "\n";
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return std::string(buf, 16);
}

}  // namespace memfair::cli
