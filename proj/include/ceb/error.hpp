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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ceb {

enum class ErrorCode {
  // dataset
  kFileNotFound,
  kHeaderMismatch,
  kMalformedRow,
  kUnknownCategory,
  kInvalidNumber,
  kDegenerateFeature,
  kTooFewRows,
  // network
  kNonFiniteInput,
  kDivergedLoss,
  kEmptySet,
  kShapeMismatch,
  // tsne
  kPerplexityTooLarge,
  kDuplicatePointsDegenerate,
  kNonFiniteGradient,
  // kmeans
  kKTooLarge,
  kEmptyClusterUnrepairable,
  // counterfactual
  kNotBinaryFeature,
  kKeyMismatch,
  // report
  kEmptyCluster,
  kConsistencyViolation,
  // config / checkpoint
  kInvalidConfig,
  kInvalidCheckpoint,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. `code()` lets
// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ceb
