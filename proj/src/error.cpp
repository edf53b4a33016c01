/*
 * Copyright 2026 The CEB Authors.
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

#include "ceb/error.hpp"

namespace ceb {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kInvalidNumber: return "InvalidNumber";
    case ErrorCode::kDegenerateFeature: return "DegenerateFeature";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kPerplexityTooLarge: return "PerplexityTooLarge";
    case ErrorCode::kDuplicatePointsDegenerate: return "DuplicatePointsDegenerate";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEmptyClusterUnrepairable: return "EmptyClusterUnrepairable";
    case ErrorCode::kNotBinaryFeature: return "NotBinaryFeature";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kConsistencyViolation: return "ConsistencyViolation";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidCheckpoint: return "InvalidCheckpoint";
  }
  return "Unknown";
}

}  // namespace ceb
