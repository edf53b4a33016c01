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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceb/dataset.hpp"
#include "ceb/network.hpp"

namespace ceb {

inline constexpr int kCheckpointVersion = 1;

// Trained model plus everything needed to encode new rows the same way.
struct ModelCheckpoint {
  int version = kCheckpointVersion;
  NetworkParams params;
  TrainingConfig training;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double test_accuracy = 0.0;
  Standardization standardization;
  std::uint64_t data_seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

nlohmann::json CheckpointToJson(const ModelCheckpoint& checkpoint);
ModelCheckpoint CheckpointFromJson(const nlohmann::json& j);

std::string SerializeCheckpoint(const ModelCheckpoint& checkpoint);
void WriteCheckpoint(const ModelCheckpoint& checkpoint, const std::filesystem::path& path);
ModelCheckpoint ReadCheckpoint(const std::filesystem::path& path);

}  // namespace ceb
