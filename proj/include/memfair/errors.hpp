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

#include <stdexcept>
#include <string>

namespace memfair {

// Base class for all typed failures raised by the library. Every error names
// the exact quantity that went wrong; nothing is NaN-masked or silently
// clamped.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A scenario (or partial scenario) failed validation at the tier required by
// the operation that was invoked. Carries the name of the first failing
// invariant in what().
class ScenarioInvalid : public Error {
 public:
  ScenarioInvalid(const std::string& invariant, const std::string& detail)
      : Error("scenario invalid: " + invariant + ": " + detail),
        invariant_(invariant) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

// Conditioning on D=0 within one group is impossible because the whole group
// mass is memorized (zero normalizer).
class DegenerateSlice : public Error {
 public:
  using Error::Error;
};

// The memorized mass exceeds the available mass in some (label, group) cell.
class InconsistentMasses : public Error {
 public:
  using Error::Error;
};

// Prediction-rate vectors were required but neither supplied nor derivable.
class MissingPhi : public Error {
 public:
  using Error::Error;
};

// The protected-group total mass is 0 or 1, so group-conditional statistics
// are undefined on one side.
class DegenerateGroup : public Error {
 public:
  using Error::Error;
};

// A (label, group) cell has zero population mass, so the per-class
// group-conditional formulas divide by zero. Carries the class index.
class DegenerateClassGroup : public Error {
 public:
  DegenerateClassGroup(int label, const std::string& detail)
      : Error("degenerate class/group cell at label " +
              std::to_string(label) + ": " + detail),
        label_(label) {}
  int label() const { return label_; }

 private:
  int label_;
};

// The feasibility engine could not certify its own answer (pivot collapse or
// failed self-verification). Never downgraded to a guess.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

// A bound formula divides by a prediction rate that is zero.
class ZeroRateDivision : public Error {
 public:
  ZeroRateDivision(int label, const std::string& detail)
      : Error("zero prediction rate at label " + std::to_string(label) +
              ": " + detail),
        label_(label) {}
  int label() const { return label_; }

 private:
  int label_;
};

// A diagonal confusion entry equals 1, which makes the misclassification-rate
// change of variables singular.
class PerfectClassDegenerate : public Error {
 public:
  PerfectClassDegenerate(int label, const std::string& detail)
      : Error("perfect diagonal at label " + std::to_string(label) + ": " +
              detail),
        label_(label) {}
  int label() const { return label_; }

 private:
  int label_;
};

// The equalized-odds constant-ratio requirement fails; carries the largest
// spread between per-column ratios.
class RatioConditionFailed : public Error {
 public:
  explicit RatioConditionFailed(double deviation)
      : Error("constant-ratio condition failed, max deviation " +
              std::to_string(deviation)),
        deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

// The equalized-odds closed form divides by a vanishing denominator while the
// numerator is nonzero.
class DenominatorVanishes : public Error {
 public:
  using Error::Error;
};

// The equalized-odds closed form produced a value outside probability ranges;
// carries a description of the offending quantity.
class SolutionNotProbability : public Error {
 public:
  using Error::Error;
};

}  // namespace memfair
