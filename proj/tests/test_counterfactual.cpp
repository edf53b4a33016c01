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

#include <doctest.h>

#include <cmath>
#include <map>

#include "ceb/counterfactual.hpp"
#include "ceb/error.hpp"
#include "support/synthetic.hpp"

using namespace ceb;

namespace {

std::vector<FeatureVector> LoanVectors() {
  const auto records = Clean(ParseCsv(testing::SyntheticLoanCsv()));
  return EncodeAndStandardize(records).vectors;
}

TsneConfig SmallTsne(double perplexity = 5.0) {
  TsneConfig cfg;
  cfg.perplexity = perplexity;
  cfg.iterations = 300;
  cfg.seed = 3;
  return cfg;
}

KMeansConfig FourClusters() {
  KMeansConfig cfg;
  cfg.seed = 4;
  return cfg;
}

NetworkParams GenderBlind(std::uint64_t seed) {
  NetworkParams p = InitParams(NetworkLayout{}, seed);
  for (std::size_t o = 0; o < p.layers[0].out; ++o) p.layers[0].W(o, kGenderSlot) = 0.0;
  return p;
}

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidConfig;
}

}  // namespace

TEST_CASE("MakeFlipSpec: binary features only") {
  CHECK(MakeFlipSpec("gender").slot == kGenderSlot);
  CHECK(MakeFlipSpec("credit_history").slot == kCreditHistorySlot);
  CHECK_FALSE(MakeFlipSpec("gender").IsIdentity());
  CHECK(IdentityFlipSpec().IsIdentity());
  CHECK(CodeOf([] { MakeFlipSpec("income"); }) == ErrorCode::kNotBinaryFeature);
  CHECK(CodeOf([] { MakeFlipSpec("shoe_size"); }) == ErrorCode::kNotBinaryFeature);
}

TEST_CASE("Flip: involution, single-slot contract, gender counts swap") {
  const auto vectors = LoanVectors();
  REQUIRE(vectors.size() == 480);
  const FlipSpec spec = MakeFlipSpec("gender");
  const auto flipped = Flip(vectors, spec);
  CHECK(Flip(flipped, spec) == vectors);

  std::size_t male = 0, flipped_male = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    male += vectors[i].values[kGenderSlot] == 1.0;
    flipped_male += flipped[i].values[kGenderSlot] == 1.0;
    CHECK(flipped[i].values[kGenderSlot] == 1.0 - vectors[i].values[kGenderSlot]);
    for (std::size_t s = 1; s < kNumFeatures; ++s) CHECK(flipped[i].values[s] == vectors[i].values[s]);
    CHECK(flipped[i].row_id == vectors[i].row_id);
    CHECK(flipped[i].label == vectors[i].label);
  }
  CHECK(flipped_male == vectors.size() - male);
}

TEST_CASE("FlipRecord: male becomes female, nothing else changes") {
  LoanRecord r;
  r.gender = Gender::kMale;
  r.income = 4583;
  r.loan_amount = 128;
  r.loan_term = 360;
  r.credit_history = true;
  const LoanRecord f = FlipRecord(r, MakeFlipSpec("gender"));
  CHECK(f.gender == Gender::kFemale);
  LoanRecord expected = r;
  expected.gender = Gender::kFemale;
  CHECK(f == expected);
  CHECK(Encode(f).values[kGenderSlot] == 0.0);
  CHECK(FlipRecord(f, MakeFlipSpec("gender")) == r);
}

TEST_CASE("PathScores: 12-point hand tally") {
  const std::size_t orig[12] = {0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2};
  const std::size_t flip[12] = {0, 0, 1, 1, 1, 1, 1, 0, 2, 2, 2, 2};
  const bool male[12] = {true, true, false, true, false, false,
                         true, true, false, false, true, false};
  std::map<RowId, std::size_t> oa, fa;
  std::map<RowId, double> os, fs;
  std::map<RowId, Gender> g;
  for (RowId i = 0; i < 12; ++i) {
    oa[i] = orig[i];
    fa[i] = flip[i];
    os[i] = 50.0 + 5.0 * i;
    fs[i] = os[i] + (male[i] ? -4.0 : 2.0);
    g[i] = male[i] ? Gender::kMale : Gender::kFemale;
  }
  const std::vector<PathScore> expected = {
      {0, 1, 3, 1, 2, 65.0, 65.0},  {0, 0, 2, 2, 0, 52.5, 48.5}, {1, 1, 2, 1, 1, 77.5, 76.5},
      {1, 0, 1, 1, 0, 85.0, 81.0},  {1, 2, 1, 0, 1, 90.0, 92.0}, {2, 2, 3, 1, 2, 100.0, 100.0},
  };
  const auto paths = PathScores(oa, fa, os, fs, g);
  REQUIRE(paths.size() == expected.size());
  for (std::size_t k = 0; k < paths.size(); ++k) {
    CAPTURE(k);
    CHECK(paths[k].from_cluster == expected[k].from_cluster);
    CHECK(paths[k].to_cluster == expected[k].to_cluster);
    CHECK(paths[k].count == expected[k].count);
    CHECK(paths[k].male == expected[k].male);
    CHECK(paths[k].female == expected[k].female);
    CHECK(std::abs(paths[k].avg_original_score - expected[k].avg_original_score) < 1e-12);
    CHECK(std::abs(paths[k].avg_flipped_score - expected[k].avg_flipped_score) < 1e-12);
  }
}

TEST_CASE("PathScores: single point and key mismatch") {
  std::map<RowId, std::size_t> a{{7, 2}}, b{{7, 0}};
  std::map<RowId, double> s{{7, 40.0}}, t{{7, 30.0}};
  std::map<RowId, Gender> g{{7, Gender::kFemale}};
  const auto paths = PathScores(a, b, s, t, g);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == PathScore{2, 0, 1, 0, 1, 40.0, 30.0});

  std::map<RowId, std::size_t> other{{8, 0}};
  CHECK(CodeOf([&] { PathScores(a, other, s, t, g); }) == ErrorCode::kKeyMismatch);
}

TEST_CASE("RunCounterfactual: identity flip gives k self-loops and zero deltas") {
  const auto vectors = testing::GenderLabelVectors(60, 1, true);
  const auto r = RunCounterfactual(InitParams(NetworkLayout{}, 2), vectors, IdentityFlipSpec(),
                                   SmallTsne(), FourClusters());
  REQUIRE(r.paths.size() == 4);
  std::map<std::size_t, std::size_t> sizes;
  for (const auto& [id, c] : r.original_assignments) ++sizes[c];
  for (const auto& p : r.paths) {
    CHECK(p.from_cluster == p.to_cluster);
    CHECK(p.count == sizes[p.from_cluster]);
  }
  CHECK(r.flipped_scores == r.original_scores);
  const BiasSummary b = SummarizeBias(r);
  for (const auto& c : b.clusters) CHECK(c.delta == 0.0);
  CHECK(b.mean_abs_delta == 0.0);
}

TEST_CASE("RunCounterfactual: conservation, gender partition, joint embedding layout") {
  const auto vectors = testing::GenderLabelVectors(80, 5, false);
  const auto r = RunCounterfactual(InitParams(NetworkLayout{}, 6), vectors, MakeFlipSpec("gender"),
                                   SmallTsne(), FourClusters());
  CHECK(r.joint_embedding.points.size() == 160);
  CHECK(r.original_profiles.size() == 80);
  CHECK(r.flipped_profiles[0].values.size() == 28);
  std::map<std::size_t, std::size_t> sizes, out;
  std::size_t total = 0;
  for (const auto& [id, c] : r.original_assignments) ++sizes[c];
  for (const auto& p : r.paths) {
    CHECK(p.male + p.female == p.count);
    CHECK(p.count >= 1);
    out[p.from_cluster] += p.count;
    total += p.count;
  }
  CHECK(total == 80);
  CHECK(out == sizes);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const RowId id = vectors[i].row_id;
    CHECK(r.original_coords.at(id) == r.joint_embedding.points[i]);
    CHECK(r.flipped_coords.at(id) == r.joint_embedding.points[80 + i]);
    CHECK(r.flipped_assignments.at(id) == Assign(r.flipped_coords.at(id), r.clustering));
    CHECK(r.original_assignments.at(id) == r.clustering.assignments[i]);
  }
}

TEST_CASE("RunCounterfactual: flipping twice reproduces the original profiles") {
  const auto vectors = testing::GenderLabelVectors(40, 8, true);
  const NetworkParams p = InitParams(NetworkLayout{}, 9);
  const FlipSpec spec = MakeFlipSpec("gender");
  const auto twice = Flip(Flip(vectors, spec), spec);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    CHECK(MakeActivationProfile(vectors[i].row_id, Forward(p, twice[i])) ==
          MakeActivationProfile(vectors[i].row_id, Forward(p, vectors[i])));
  }
}

TEST_CASE("RunCounterfactual: a gender-blind first layer gives zero deltas") {
  const auto vectors = testing::GenderLabelVectors(50, 2, true);
  const auto r = RunCounterfactual(GenderBlind(4), vectors, MakeFlipSpec("gender"), SmallTsne(),
                                   FourClusters());
  for (const auto& [id, s] : r.original_scores) CHECK(r.flipped_scores.at(id) == s);
  CHECK(SummarizeBias(r).mean_abs_delta == 0.0);
}

TEST_CASE("RunCounterfactual: deterministic and rejects duplicate rows") {
  const auto vectors = testing::GenderLabelVectors(40, 3, false);
  const NetworkParams p = InitParams(NetworkLayout{}, 1);
  const auto a = RunCounterfactual(p, vectors, MakeFlipSpec("gender"), SmallTsne(), FourClusters());
  const auto b = RunCounterfactual(p, vectors, MakeFlipSpec("gender"), SmallTsne(), FourClusters());
  CHECK(a.joint_embedding.points == b.joint_embedding.points);
  CHECK(a.original_assignments == b.original_assignments);
  CHECK(a.paths == b.paths);

  auto dup = vectors;
  dup[1].row_id = dup[0].row_id;
  CHECK(CodeOf([&] {
          RunCounterfactual(p, dup, MakeFlipSpec("gender"), SmallTsne(), FourClusters());
        }) == ErrorCode::kKeyMismatch);
}

TEST_CASE("SummarizeBias: gender-decisive model, checked by direct re-scoring") {
  const auto train = testing::GenderLabelVectors(200, 11, true);
  TrainingConfig cfg;
  cfg.epochs = 100;
  cfg.target_accuracy = 2.0;
  const NetworkParams p = Train(InitParams(NetworkLayout{}, 12), train, train, cfg).params;
  REQUIRE(Evaluate(p, train) > 0.95);

  const auto vectors = testing::GenderLabelVectors(90, 13, true);
  const FlipSpec spec = MakeFlipSpec("gender");
  const auto r = RunCounterfactual(p, vectors, spec, SmallTsne(10.0), FourClusters());
  const BiasSummary b = SummarizeBias(r);

  // Oracle: subtract scores of the two forward passes directly.
  const auto flipped = Flip(vectors, spec);
  double male_sum = 0.0, abs_sum = 0.0;
  std::size_t males = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double d = 100.0 * (Forward(p, flipped[i]).score - Forward(p, vectors[i]).score);
    abs_sum += std::abs(d);
    if (vectors[i].values[kGenderSlot] == 1.0) {
      male_sum += d;
      ++males;
    }
  }
  REQUIRE(males > 0);
  CHECK(b.male == males);
  CHECK(std::abs(b.mean_delta_male - male_sum / males) < 1e-9);
  CHECK(std::abs(b.mean_abs_delta - abs_sum / vectors.size()) < 1e-9);
  CHECK(b.mean_delta_male < -10.0);
  CHECK(b.mean_abs_delta > 10.0);
}

TEST_CASE("SummarizeBias: matches an independent aggregation pass") {
  const auto vectors = testing::GenderLabelVectors(70, 21, false);
  const auto r = RunCounterfactual(InitParams(NetworkLayout{}, 22), vectors,
                                   MakeFlipSpec("gender"), SmallTsne(), FourClusters());
  const BiasSummary b = SummarizeBias(r);
  std::map<std::size_t, std::pair<double, double>> sums;
  std::map<std::size_t, double> counts;
  for (const auto& v : vectors) {
    const std::size_t c = r.original_assignments.at(v.row_id);
    sums[c].first += r.original_scores.at(v.row_id);
    sums[c].second += r.flipped_scores.at(v.row_id);
    counts[c] += 1;
  }
  REQUIRE(b.clusters.size() == sums.size());
  for (const auto& c : b.clusters) {
    const double orig = sums[c.cluster].first / counts[c.cluster];
    const double flip = sums[c.cluster].second / counts[c.cluster];
    CHECK(std::abs(c.avg_original_score - orig) < 1e-9);
    CHECK(std::abs(c.avg_flipped_score - flip) < 1e-9);
    CHECK(std::abs(c.delta - (flip - orig)) < 1e-9);
    CHECK(c.size == static_cast<std::size_t>(counts[c.cluster]));
  }
}
