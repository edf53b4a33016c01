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

#include <vector>

#include "ceb/checkpoint.hpp"
#include "ceb/config.hpp"
#include "ceb/counterfactual.hpp"
#include "ceb/dataset.hpp"
#include "ceb/report.hpp"

namespace ceb {

// Parse + clean the CSV at config.data_path.
std::vector<LoanRecord> LoadRecords(const Config& config);

// Clean, split, initialize and train. Seeds must be resolved.
ModelCheckpoint TrainModel(const std::vector<LoanRecord>& records, const Config& config);

struct AnalysisOutput {
  AnalysisArtifact artifact;
  CounterfactualResult result;
};

// Runs the counterfactual pipeline over every record using the checkpoint's
// standardization, and freezes the artifact.
AnalysisOutput Analyze(const std::vector<LoanRecord>& records, const ModelCheckpoint& checkpoint,
                       const Config& config);

}  // namespace ceb
