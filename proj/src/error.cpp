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

#include "vbreath/error.hpp"

namespace vbreath {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::UnknownSensor: return "UnknownSensor";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::DuplicateSubject: return "DuplicateSubject";
    case ErrorCode::NegativeBrac: return "NegativeBrac";
    case ErrorCode::DuplicateStream: return "DuplicateStream";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::MissingSensor: return "MissingSensor";
    case ErrorCode::MissingDevice: return "MissingDevice";
    case ErrorCode::CatalogMismatch: return "CatalogMismatch";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::NonBinaryLabels: return "NonBinaryLabels";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MalformedModelFile: return "MalformedModelFile";
    case ErrorCode::CatalogFingerprintMismatch: return "CatalogFingerprintMismatch";
    case ErrorCode::SingleClassAtThreshold: return "SingleClassAtThreshold";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::MissingSession: return "MissingSession";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vbreath
