// Copyright 2026 The Surrogate Index Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surrogate_index {

enum class ErrorCode {
  kValidation,
  kNotPositiveDefinite,
  kRankError,
  kDegenerateSignal,
  kSingularDesign,
  kConvergence,
  kSingularSystem,
  kAssumptionViolated,
  kUnboundedRegularization,
  kInsufficientArm,
  kNotRidgeFit,
  kOverlapUnsupported,
  kOracleUnavailable,
  kSchema,
  kDimensionMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kRankError: return "RankError";
    case ErrorCode::kDegenerateSignal: return "DegenerateSignal";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kConvergence: return "ConvergenceError";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kAssumptionViolated: return "AssumptionViolated";
    case ErrorCode::kUnboundedRegularization: return "UnboundedRegularization";
    case ErrorCode::kInsufficientArm: return "InsufficientArm";
    case ErrorCode::kNotRidgeFit: return "NotRidgeFit";
    case ErrorCode::kOverlapUnsupported: return "OverlapUnsupported";
    case ErrorCode::kOracleUnavailable: return "OracleUnavailable";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

// Input problems (bad config, bad files) as opposed to numerical failures.
// The CLI maps the former to exit code 2 and the latter to exit code 3.
inline bool is_input_error(ErrorCode code) {
  return code == ErrorCode::kValidation || code == ErrorCode::kSchema ||
         code == ErrorCode::kDimensionMismatch ||
         code == ErrorCode::kOverlapUnsupported;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::int64_t iterations)
      : Error(ErrorCode::kConvergence,
              what + " after " + std::to_string(iterations) + " sweeps"),
        iterations_(iterations) {}

  std::int64_t iterations() const noexcept { return iterations_; }

 private:
  std::int64_t iterations_;
};

}  // namespace surrogate_index
