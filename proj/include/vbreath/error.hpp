// Copyright 2026 The vbreath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vbreath {

enum class ErrorCode {
  MalformedFile,
  NonMonotonicTime,
  UnknownDevice,
  UnknownSensor,
  EmptyStream,
  DuplicateSubject,
  NegativeBrac,
  DuplicateStream,
  WindowEmpty,
  EvenWindow,
  EmptySignal,
  NonFiniteInput,
  TooShort,
  MissingSensor,
  MissingDevice,
  CatalogMismatch,
  EmptyData,
  NonBinaryLabels,
  DegenerateWeights,
  SingleClass,
  DimensionMismatch,
  MalformedModelFile,
  CatalogFingerprintMismatch,
  SingleClassAtThreshold,
  TooFewSubjects,
  LengthMismatch,
  InvalidProfile,
  BadDistribution,
  MissingSession,
  MissingLabel,
  InvalidArgument,
  IoError,
};

/// Stable identifier used in `ERROR <code>: <message>` lines and by the C API.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vbreath
