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

#include "ceb/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "ceb/error.hpp"

namespace ceb {
namespace {

double ApplyMapping(double value, const FlipSpec& spec) {
  if (value == 0.0) return spec.mapping[0];
  if (value == 1.0) return spec.mapping[1];
  throw Error(ErrorCode::kNotBinaryFeature,
              fmt::format("feature '{}' holds non-binary value {}", spec.feature, value));
}

template <typename Map>
std::set<RowId> Keys(const Map& map) {
  std::set<RowId> keys;
  for (const auto& [key, value] : map) keys.insert(key);
  return keys;
}

}  // namespace

FlipSpec MakeFlipSpec(const std::string& feature) {
  const auto slot = FeatureSlot(feature);
  if (!slot || !IsBinarySlot(*slot)) {
    throw Error(ErrorCode::kNotBinaryFeature,
                fmt::format("'{}' is not a binary feature; choose one of gender, education, "
                            "self_employed, credit_history",
                            feature));
  }
  return FlipSpec{feature, *slot, {1.0, 0.0}};
}

FlipSpec IdentityFlipSpec(const std::string& feature) {
  FlipSpec spec = MakeFlipSpec(feature);
  spec.mapping = {0.0, 1.0};
  return spec;
}

std::vector<FeatureVector> Flip(const std::vector<FeatureVector>& vectors, const FlipSpec& spec) {
  if (!IsBinarySlot(spec.slot)) {
    throw Error(ErrorCode::kNotBinaryFeature, fmt::format("slot {} is not binary", spec.slot));
  }
  std::vector<FeatureVector> out = vectors;
  for (auto& v : out) v.values[spec.slot] = ApplyMapping(v.values[spec.slot], spec);
  return out;
}

LoanRecord FlipRecord(const LoanRecord& record, const FlipSpec& spec) {
  const FeatureVector encoded = Encode(record);
  const bool value = ApplyMapping(encoded.values[spec.slot], spec) == 1.0;
  LoanRecord out = record;
  switch (spec.slot) {
    case kGenderSlot: out.gender = value ? Gender::kMale : Gender::kFemale; break;
    case kEducationSlot:
      out.education = value ? Education::kGraduate : Education::kNotGraduate;
      break;
    case kSelfEmployedSlot: out.self_employed = value; break;
    case kCreditHistorySlot: out.credit_history = value; break;
    default:
      throw Error(ErrorCode::kNotBinaryFeature, fmt::format("slot {} is not binary", spec.slot));
  }
  return out;
}

std::vector<PathScore> PathScores(const std::map<RowId, std::size_t>& original_assignments,
                                  const std::map<RowId, std::size_t>& flipped_assignments,
                                  const std::map<RowId, double>& original_scores,
                                  const std::map<RowId, double>& flipped_scores,
                                  const std::map<RowId, Gender>& original_genders) {
  const auto keys = Keys(original_assignments);
  if (Keys(flipped_assignments) != keys || Keys(original_scores) != keys ||
      Keys(flipped_scores) != keys || Keys(original_genders) != keys) {
    throw Error(ErrorCode::kKeyMismatch, "assignment, score and gender maps cover different rows");
  }

  struct Tally {
    std::size_t count = 0, male = 0, female = 0;
    double original = 0.0, flipped = 0.0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Tally> tallies;
  for (const RowId id : keys) {
    Tally& t = tallies[{original_assignments.at(id), flipped_assignments.at(id)}];
    ++t.count;
    (original_genders.at(id) == Gender::kMale ? t.male : t.female) += 1;
    t.original += original_scores.at(id);
    t.flipped += flipped_scores.at(id);
  }

  std::vector<PathScore> paths;
  for (const auto& [key, t] : tallies) {
    const double n = static_cast<double>(t.count);
    paths.push_back({key.first, key.second, t.count, t.male, t.female, t.original / n,
                     t.flipped / n});
  }
  std::sort(paths.begin(), paths.end(), [](const PathScore& a, const PathScore& b) {
    return std::make_tuple(a.from_cluster, b.count, a.to_cluster) <
           std::make_tuple(b.from_cluster, a.count, b.to_cluster);
  });
  return paths;
}

CounterfactualResult RunCounterfactual(const NetworkParams& params,
                                       const std::vector<FeatureVector>& vectors,
                                       const FlipSpec& spec, const TsneConfig& tsne,
                                       const KMeansConfig& kmeans) {
  std::set<RowId> seen;
  for (const auto& v : vectors) {
    if (!seen.insert(v.row_id).second) {
      throw Error(ErrorCode::kKeyMismatch, fmt::format("row_id {} appears twice", v.row_id));
    }
  }

  CounterfactualResult result;
  result.spec = spec;
  const std::vector<FeatureVector> flipped = Flip(vectors, spec);
  const std::size_t n = vectors.size();

  std::vector<std::vector<double>> joint;
  joint.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    result.original_profiles.push_back(
        MakeActivationProfile(vectors[i].row_id, Forward(params, vectors[i])));
    result.flipped_profiles.push_back(
        MakeActivationProfile(flipped[i].row_id, Forward(params, flipped[i])));
  }
  // Identical profiles are one point for the embedding; this keeps an
  // unchanged flipped row on top of its original.
  std::map<std::vector<double>, std::size_t> unique_index;
  std::vector<std::size_t> slot(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const auto& values = i < n ? result.original_profiles[i].values
                               : result.flipped_profiles[i - n].values;
    const auto [it, inserted] = unique_index.emplace(values, joint.size());
    if (inserted) joint.push_back(values);
    slot[i] = it->second;
  }

  result.affinity = ConditionalAffinities(joint, tsne.perplexity);
  const Embedding2D unique = Embed(result.affinity, tsne);
  result.joint_embedding.seed = unique.seed;
  result.joint_embedding.kl_trace = unique.kl_trace;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    result.joint_embedding.points.push_back(unique.points[slot[i]]);
  }

  const std::vector<Point2> original_points(result.joint_embedding.points.begin(),
                                            result.joint_embedding.points.begin() +
                                                static_cast<std::ptrdiff_t>(n));
  result.clustering = KMeans(original_points, kmeans);

  for (std::size_t i = 0; i < n; ++i) {
    const RowId id = vectors[i].row_id;
    const Point2& flipped_point = result.joint_embedding.points[n + i];
    result.original_assignments[id] = result.clustering.assignments[i];
    result.flipped_assignments[id] = slot[n + i] == slot[i]
                                         ? result.clustering.assignments[i]
                                         : Assign(flipped_point, result.clustering);
    result.original_scores[id] = 100.0 * result.original_profiles[i].score;
    result.flipped_scores[id] = 100.0 * result.flipped_profiles[i].score;
    result.original_genders[id] =
        vectors[i].values[kGenderSlot] == 1.0 ? Gender::kMale : Gender::kFemale;
    result.original_coords[id] = original_points[i];
    result.flipped_coords[id] = flipped_point;
  }

  result.paths = PathScores(result.original_assignments, result.flipped_assignments,
                            result.original_scores, result.flipped_scores,
                            result.original_genders);
  return result;
}

BiasSummary SummarizeBias(const CounterfactualResult& result) {
  BiasSummary summary;
  std::map<std::size_t, ClusterDelta> per_cluster;
  double abs_sum = 0.0, signed_sum = 0.0, male_sum = 0.0, female_sum = 0.0;
  for (const auto& [id, cluster] : result.original_assignments) {
    const double original = result.original_scores.at(id);
    const double flipped = result.flipped_scores.at(id);
    const double delta = flipped - original;
    ClusterDelta& c = per_cluster[cluster];
    c.cluster = cluster;
    ++c.size;
    c.avg_original_score += original;
    c.avg_flipped_score += flipped;
    abs_sum += std::abs(delta);
    signed_sum += delta;
    if (result.original_genders.at(id) == Gender::kMale) {
      ++summary.male;
      male_sum += delta;
    } else {
      ++summary.female;
      female_sum += delta;
    }
  }
  for (auto& [index, c] : per_cluster) {
    const double n = static_cast<double>(c.size);
    c.avg_original_score /= n;
    c.avg_flipped_score /= n;
    c.delta = c.avg_flipped_score - c.avg_original_score;
    summary.clusters.push_back(c);
  }
  const double total = static_cast<double>(result.original_assignments.size());
  if (total > 0) {
    summary.mean_abs_delta = abs_sum / total;
    summary.mean_delta = signed_sum / total;
  }
  if (summary.male > 0) summary.mean_delta_male = male_sum / static_cast<double>(summary.male);
  if (summary.female > 0) {
    summary.mean_delta_female = female_sum / static_cast<double>(summary.female);
  }
  return summary;
}

}  // namespace ceb
