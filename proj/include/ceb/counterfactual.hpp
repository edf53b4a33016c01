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

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ceb/dataset.hpp"
#include "ceb/kmeans.hpp"
#include "ceb/network.hpp"
#include "ceb/tsne.hpp"

namespace ceb {

// Rewrites one binary slot: value v becomes mapping[v].
struct FlipSpec {
  std::string feature = "gender";
  std::size_t slot = kGenderSlot;
  std::array<double, 2> mapping{1.0, 0.0};

  bool IsIdentity() const { return mapping[0] == 0.0 && mapping[1] == 1.0; }
};

// 0 <-> 1 on the named feature. Throws NotBinaryFeature for continuous or
// unknown features.
FlipSpec MakeFlipSpec(const std::string& feature);

// Maps every value to itself. Only useful as a test fixture.
FlipSpec IdentityFlipSpec(const std::string& feature = "gender");

std::vector<FeatureVector> Flip(const std::vector<FeatureVector>& vectors, const FlipSpec& spec);
LoanRecord FlipRecord(const LoanRecord& record, const FlipSpec& spec);

struct PathScore {
  std::size_t from_cluster = 0;
  std::size_t to_cluster = 0;
  std::size_t count = 0;
  std::size_t male = 0;    // by original (pre-flip) gender
  std::size_t female = 0;
  double avg_original_score = 0.0;  // percent
  double avg_flipped_score = 0.0;   // percent

  friend bool operator==(const PathScore&, const PathScore&) = default;
};

// One PathScore per (from, to) pair with at least one datapoint, ordered by
// from_cluster, then descending count, then to_cluster. All maps must share
// the same key set (KeyMismatch otherwise).
std::vector<PathScore> PathScores(const std::map<RowId, std::size_t>& original_assignments,
                                  const std::map<RowId, std::size_t>& flipped_assignments,
                                  const std::map<RowId, double>& original_scores,
                                  const std::map<RowId, double>& flipped_scores,
                                  const std::map<RowId, Gender>& original_genders);

struct CounterfactualResult {
  std::map<RowId, std::size_t> original_assignments;
  std::map<RowId, std::size_t> flipped_assignments;
  std::map<RowId, double> original_scores;  // percent, unrounded
  std::map<RowId, double> flipped_scores;
  std::map<RowId, Gender> original_genders;
  std::map<RowId, Point2> original_coords;
  std::map<RowId, Point2> flipped_coords;
  std::vector<ActivationProfile> original_profiles;  // input order
  std::vector<ActivationProfile> flipped_profiles;
  std::vector<PathScore> paths;
  Embedding2D joint_embedding;  // originals first, then flipped, input order
  AffinityMatrix affinity;     // over the distinct profiles
  Clustering clustering;        // fitted on the original points only
  FlipSpec spec;
};

// Scores both populations, embeds all 2n activation profiles in one t-SNE
// run, clusters the n original points and places each flipped point at its
// nearest original centroid. Bitwise identical profiles share one embedded
// point, and a flipped row whose profile did not change keeps its original
// cluster.
CounterfactualResult RunCounterfactual(const NetworkParams& params,
                                       const std::vector<FeatureVector>& vectors,
                                       const FlipSpec& spec, const TsneConfig& tsne,
                                       const KMeansConfig& kmeans);

struct ClusterDelta {
  std::size_t cluster = 0;
  std::size_t size = 0;
  double avg_original_score = 0.0;
  double avg_flipped_score = 0.0;
  double delta = 0.0;  // flipped - original, percentage points

  friend bool operator==(const ClusterDelta&, const ClusterDelta&) = default;
};

struct BiasSummary {
  std::vector<ClusterDelta> clusters;
  double mean_abs_delta = 0.0;
  double mean_delta = 0.0;
  std::size_t male = 0;
  std::size_t female = 0;
  double mean_delta_male = 0.0;    // 0 when there are no male rows
  double mean_delta_female = 0.0;
};

// Per original cluster and global score deltas between flipped and original
// scores.
BiasSummary SummarizeBias(const CounterfactualResult& result);

}  // namespace ceb
