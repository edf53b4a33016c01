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
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ceb/counterfactual.hpp"
#include "ceb/dataset.hpp"

namespace ceb {

inline constexpr int kArtifactSchemaVersion = 1;

struct GenderCounts {
  std::size_t male = 0;
  std::size_t female = 0;

  friend bool operator==(const GenderCounts&, const GenderCounts&) = default;
};

struct ClusterSummary {
  std::size_t index = 0;
  std::string display_name;
  std::string color;
  std::size_t size = 0;
  GenderCounts gender_counts;
  double avg_score = 0.0;  // percent
  std::string description;
  double y_anchor = 0.0;   // always equal to avg_score

  friend bool operator==(const ClusterSummary&, const ClusterSummary&) = default;
};

struct PointRecord {
  RowId row_id = 0;
  Gender gender = Gender::kMale;          // original
  Gender flipped_gender = Gender::kMale;  // after the flip
  std::size_t original_cluster = 0;
  std::size_t flipped_cluster = 0;
  double original_score = 0.0;  // percent, 4 decimals
  double flipped_score = 0.0;
  Point2 original_xy{};
  Point2 flipped_xy{};

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct DatasetSummary {
  std::size_t total = 0;
  GenderCounts gender_counts;
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct ModelSummary {
  std::size_t input_size = kNumFeatures;
  std::vector<std::size_t> hidden_sizes;
  std::size_t output_size = 1;
  double test_accuracy = 0.0;
  std::size_t best_epoch = 0;

  friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

struct RunEcho {
  std::uint64_t data_seed = 0;
  std::uint64_t train_seed = 0;
  std::string flip_feature = "gender";
  double perplexity = 30.0;
  std::size_t tsne_iterations = 1000;
  std::uint64_t tsne_seed = 0;
  std::size_t k = 4;
  std::size_t restarts = 10;
  std::uint64_t cluster_seed = 0;

  friend bool operator==(const RunEcho&, const RunEcho&) = default;
};

struct BiasBlock {
  std::vector<ClusterDelta> clusters;
  double mean_abs_delta = 0.0;
  double mean_delta = 0.0;
  double mean_delta_male = 0.0;
  double mean_delta_female = 0.0;

  friend bool operator==(const BiasBlock&, const BiasBlock&) = default;
};

// Everything the four UI views display, frozen into one document.
struct AnalysisArtifact {
  int schema_version = kArtifactSchemaVersion;
  DatasetSummary dataset;
  ModelSummary model;
  RunEcho config;
  std::vector<ClusterSummary> original_clusters;  // by index
  std::vector<ClusterSummary> flipped_clusters;   // by index, non-empty clusters only
  std::vector<PathScore> paths;                   // by (from, -count, to)
  std::vector<PointRecord> points;                // by row_id
  BiasBlock bias;

  friend bool operator==(const AnalysisArtifact&, const AnalysisArtifact&) = default;
};

// Fixed palette: 0 purple, 1 pink, 2 teal, 3 orange, then further colors.
std::string DisplayName(std::size_t cluster);
std::string DisplayColor(std::size_t cluster);

// Natural-language summary of a cluster from per-feature modes (categorical)
// and medians (numeric), in raw units. Binary ties resolve to the value that
// encodes as 1 (male, graduate, self-employed, with credit history).
std::string DescribeCluster(const std::vector<LoanRecord>& members, double avg_score);

// Percent scores are stored with 4 decimals.
double RoundScore(double percent);

struct ArtifactInputs {
  std::vector<LoanRecord> records;  // every analyzed row, original values
  CounterfactualResult result;
  DatasetSummary dataset;
  ModelSummary model;
  RunEcho config;
};

// Assembles and validates the artifact; throws ConsistencyViolation listing
// every failed invariant instead of returning a broken document.
AnalysisArtifact BuildArtifact(const ArtifactInputs& inputs);

// Every violated invariant, human readable. Empty means the artifact is sound.
std::vector<std::string> ValidateArtifact(const AnalysisArtifact& artifact);

nlohmann::json ToJson(const AnalysisArtifact& artifact);
nlohmann::json ToJson(const ClusterSummary& cluster);
nlohmann::json ToJson(const PathScore& path);
nlohmann::json ToJson(const PointRecord& point);
nlohmann::json SummaryJson(const AnalysisArtifact& artifact);

// Throws ConsistencyViolation when required fields are missing or mistyped.
AnalysisArtifact ArtifactFromJson(const nlohmann::json& j);

// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string SerializeArtifact(const AnalysisArtifact& artifact);
void WriteArtifact(const AnalysisArtifact& artifact, const std::filesystem::path& path);
AnalysisArtifact ReadArtifact(const std::filesystem::path& path);

}  // namespace ceb
