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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ceb/kmeans.hpp"
#include "ceb/network.hpp"
#include "ceb/tsne.hpp"

namespace ceb {

// Run configuration. Seeds are optional so that the CLI can tell "set in the
// config file" apart from "use the fallback".
struct Config {
  std::string data_path;
  std::optional<std::uint64_t> data_seed;
  NetworkLayout layout;
  TrainingConfig training;
  std::optional<std::uint64_t> train_seed;
  TsneConfig tsne;
  std::optional<std::uint64_t> tsne_seed;
  KMeansConfig kmeans;
  std::optional<std::uint64_t> cluster_seed;
  std::string flip_feature = "gender";

  // Fills every seed: `override_seed` (the --seed flag) wins over values from
  // the config file, which win over `fallback_seed` (CEB_SEED), then 0.
  void ResolveSeeds(std::optional<std::uint64_t> override_seed,
                    std::optional<std::uint64_t> fallback_seed);
};

// Applies one `key = value` setting. Unknown keys and bad values throw
// InvalidConfig.
void ApplySetting(Config& config, std::string_view key, std::string_view value);

// `key = value` lines; '#' starts a comment, blank lines are ignored.
// Keys: data.path, data.seed, model.hidden_sizes (comma separated),
// train.learning_rate, train.epochs, train.batch_size, train.seed,
// train.optimizer (sgd|adam), train.l2, train.target_accuracy,
// tsne.perplexity, tsne.iterations, tsne.seed, cluster.k, cluster.restarts,
// cluster.seed, flip.feature.
Config ParseConfig(std::string_view text, Config base = {});
Config ReadConfigFile(const std::filesystem::path& path, Config base = {});

// Parses CEB_SEED-style values; nullopt for empty input.
std::optional<std::uint64_t> ParseSeed(std::string_view text);

}  // namespace ceb
