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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ceb/checkpoint.hpp"
#include "ceb/error.hpp"
#include "ceb/network.hpp"
#include "ceb/random.hpp"
#include "support/synthetic.hpp"

using namespace ceb;

namespace {

NetworkLayout Layout(std::vector<std::size_t> hidden) {
  NetworkLayout layout;
  layout.hidden_sizes = std::move(hidden);
  return layout;
}

FeatureVector Ones() {
  FeatureVector x;
  x.values.fill(1.0);
  return x;
}

// label = [gender slot == 1]; hidden {1}: h = relu(x_gender), out = sigmoid(10 h - 5).
NetworkParams GenderDetector() {
  NetworkParams p = ZeroParams(Layout({1}));
  p.layers[0].W(0, kGenderSlot) = 1.0;
  p.layers[1].W(0, 0) = 10.0;
  p.layers[1].bias[0] = -5.0;
  return p;
}

}  // namespace

TEST_CASE("InitParams: shapes and determinism") {
  const NetworkParams a = InitParams(NetworkLayout{}, 42);
  const NetworkParams b = InitParams(NetworkLayout{}, 42);
  REQUIRE(a.layers.size() == 4);
  const std::size_t shapes[4][2] = {{16, 7}, {8, 16}, {4, 8}, {1, 4}};
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(a.layers[l].out == shapes[l][0]);
    CHECK(a.layers[l].in == shapes[l][1]);
    CHECK(a.layers[l].weights.size() == shapes[l][0] * shapes[l][1]);
    CHECK(a.layers[l].bias.size() == shapes[l][0]);
  }
  CHECK(a == b);
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(std::memcmp(a.layers[l].weights.data(), b.layers[l].weights.data(),
                      a.layers[l].weights.size() * sizeof(double)) == 0);
  }
  CHECK_FALSE(a == InitParams(NetworkLayout{}, 43));
}

TEST_CASE("InitParams: He-uniform bound on the first layer, Glorot on the output") {
  const double he = std::sqrt(6.0 / 7.0);
  const double glorot = std::sqrt(6.0 / 5.0);
  double lo = 0.0, hi = 0.0, out_lo = 0.0, out_hi = 0.0;
  std::size_t samples = 0;
  for (std::uint64_t seed = 0; samples < 10000; ++seed) {
    const NetworkParams p = InitParams(NetworkLayout{}, seed);
    for (double w : p.layers[0].weights) {
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      ++samples;
    }
    for (double w : p.layers[3].weights) {
      out_lo = std::min(out_lo, w);
      out_hi = std::max(out_hi, w);
    }
  }
  CHECK(hi <= he);
  CHECK(lo >= -he);
  // 10^4 uniform draws come close to both ends.
  CHECK(hi > 0.99 * he);
  CHECK(lo < -0.99 * he);
  CHECK(out_hi <= glorot);
  CHECK(out_lo >= -glorot);
}

TEST_CASE("Forward: all-zero parameters score exactly 0.5") {
  const NetworkParams p = ZeroParams(NetworkLayout{});
  for (const auto& x : testing::RandomBatch(10, 1)) CHECK(Forward(p, x).score == 0.5);
}

TEST_CASE("Forward: hand-evaluated chain of single units") {
  NetworkParams p = ZeroParams(Layout({1, 1, 1}));
  for (auto& layer : p.layers) std::fill(layer.weights.begin(), layer.weights.end(), 1.0);
  // Each hidden unit passes the sum of seven ones along.
  CHECK(Forward(p, Ones()).score == doctest::Approx(1.0 / (1.0 + std::exp(-7.0))).epsilon(1e-15));

  p.layers[1].bias[0] = -2.0;
  p.layers[3].W(0, 0) = -0.5;
  const ForwardTrace t = Forward(p, Ones());
  // h1 = 7, h2 = 5, h3 = 5, logit = -2.5
  CHECK(t.hidden[0][0] == 7.0);
  CHECK(t.hidden[1][0] == 5.0);
  CHECK(t.hidden[2][0] == 5.0);
  CHECK(t.score == doctest::Approx(1.0 / (1.0 + std::exp(2.5))).epsilon(1e-15));
}

TEST_CASE("Forward: hidden activations are non-negative and the score is in (0, 1)") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const NetworkParams p = testing::RandomParams(NetworkLayout{}, seed);
    for (const auto& x : testing::RandomBatch(20, seed + 1000)) {
      const ForwardTrace t = Forward(p, x);
      REQUIRE(t.hidden.size() == 3);
      for (const auto& h : t.hidden) {
        for (double a : h) CHECK(a >= 0.0);
      }
      CHECK(t.score > 0.0);
      CHECK(t.score < 1.0);
    }
  }
}

TEST_CASE("Forward: non-finite input") {
  FeatureVector x = Ones();
  x.values[3] = std::nan("");
  CHECK_THROWS_AS(Forward(ZeroParams(NetworkLayout{}), x), Error);
}

TEST_CASE("Evaluate: score 0.5 counts as approve") {
  auto batch = testing::RandomBatch(31, 3);
  double approved = 0.0;
  for (const auto& x : batch) approved += x.label;
  CHECK(Evaluate(ZeroParams(NetworkLayout{}), batch) == approved / 31.0);
}

TEST_CASE("Evaluate: perfect classifier and empty set") {
  std::vector<FeatureVector> toy(4);
  for (int i = 0; i < 4; ++i) {
    toy[i].values[kGenderSlot] = i % 2;
    toy[i].values[kIncomeSlot] = i - 1.5;
    toy[i].label = i % 2;
  }
  CHECK(Evaluate(GenderDetector(), toy) == 1.0);
  CHECK_THROWS_AS(Evaluate(GenderDetector(), std::vector<FeatureVector>{}), Error);
}

TEST_CASE("ActivationProfile: length, determinism, gender sensitivity") {
  const NetworkParams p = InitParams(NetworkLayout{}, 9);
  FeatureVector x = testing::RandomBatch(1, 4)[0];
  x.values[kGenderSlot] = 1.0;
  const ActivationProfile a = MakeActivationProfile(7, Forward(p, x));
  CHECK(a.values.size() == 28);
  CHECK(a.row_id == 7);
  CHECK(a == MakeActivationProfile(7, Forward(p, x)));

  FeatureVector other = x;
  other.values[kGenderSlot] = 0.0;
  CHECK(MakeActivationProfile(7, Forward(p, other)).values != a.values);

  NetworkParams blind = p;
  for (std::size_t o = 0; o < blind.layers[0].out; ++o) blind.layers[0].W(o, kGenderSlot) = 0.0;
  CHECK(MakeActivationProfile(7, Forward(blind, other)) == MakeActivationProfile(7, Forward(blind, x)));
}

TEST_CASE("GradientCheck: random small networks") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const NetworkParams p = testing::RandomParams(Layout({5, 4, 3}), seed);
    const auto batch = testing::RandomBatch(8, seed + 77);
    CHECK(GradientCheck(p, batch) < 1e-4);
    CHECK(GradientCheck(p, batch, 0.01) < 1e-4);
  }
}

TEST_CASE("GradientCheck: zero output layer") {
  NetworkParams p = testing::RandomParams(NetworkLayout{}, 3);
  std::fill(p.layers.back().weights.begin(), p.layers.back().weights.end(), 0.0);
  const auto batch = testing::RandomBatch(6, 5);
  CHECK(GradientCheck(p, batch) < 1e-4);
  // Nothing flows back past a zero output layer.
  const NetworkParams g = Gradient(p, batch);
  for (double w : g.layers[0].weights) CHECK(w == 0.0);
}

TEST_CASE("Gradient: single-weight logistic unit against the scalar formula") {
  NetworkParams p = ZeroParams(Layout({}));
  p.layers[0].W(0, 0) = 0.4;
  FeatureVector x;
  x.values[0] = 1.3;
  x.label = 1.0;
  const std::vector<FeatureVector> batch{x};

  const double s = 1.0 / (1.0 + std::exp(-0.4 * 1.3));
  const double scalar = (s - 1.0) * 1.3;  // d/dw of -log(sigmoid(w x))
  const double analytic = Gradient(p, batch).layers[0].W(0, 0);
  CHECK(std::abs(analytic - scalar) < 1e-12);

  const double h = 1e-5;
  auto loss = [&](double w) { return -std::log(1.0 / (1.0 + std::exp(-w * 1.3))); };
  const double numeric = (loss(0.4 + h) - loss(0.4 - h)) / (2 * h);
  CHECK(std::abs(analytic - numeric) / std::abs(numeric) < 1e-8);
  CHECK(GradientCheck(p, batch) < 1e-8);
}

TEST_CASE("Train: zero learning rate leaves parameters unchanged") {
  const NetworkParams start = InitParams(NetworkLayout{}, 1);
  const auto train = testing::RandomBatch(40, 2);
  const auto test = testing::RandomBatch(10, 3);
  TrainingConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 10;
  cfg.target_accuracy = 2.0;
  for (Optimizer opt : {Optimizer::kSgd, Optimizer::kAdam}) {
    cfg.optimizer = opt;
    const TrainingResult r = Train(start, train, test, cfg);
    CHECK(r.params == start);
    REQUIRE(r.history.size() == 10);
    for (const auto& h : r.history) CHECK(h.train_loss == r.history[0].train_loss);
  }
}

TEST_CASE("Train: linearly separable set reaches train accuracy 1.0") {
  // Label = [2 x0 - x3 + 0.5 x5 > 0], points with margin < 0.3 rejected.
  Rng rng(11);
  std::vector<FeatureVector> points;
  while (points.size() < 20) {
    FeatureVector v;
    v.row_id = points.size();
    for (double& x : v.values) x = rng.Normal();
    const double margin = 2 * v.values[0] - v.values[3] + 0.5 * v.values[5];
    if (std::abs(margin) < 0.3) continue;
    v.label = margin > 0 ? 1.0 : 0.0;
    points.push_back(v);
  }
  TrainingConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.1;
  cfg.target_accuracy = 1.0;
  const TrainingResult r = Train(InitParams(NetworkLayout{}, 0), points, points, cfg);
  CHECK(r.reached_target);
  CHECK(r.history.size() <= 200);
  CHECK(Evaluate(r.params, points) == 1.0);
}

TEST_CASE("Train: deterministic, history consistent with recomputation") {
  const auto train = testing::GenderLabelVectors(120, 5, true);
  const auto test = testing::GenderLabelVectors(40, 6, true);
  TrainingConfig cfg;
  cfg.epochs = 30;
  cfg.target_accuracy = 2.0;
  const TrainingResult a = Train(InitParams(NetworkLayout{}, 3), train, test, cfg);
  const TrainingResult b = Train(InitParams(NetworkLayout{}, 3), train, test, cfg);
  CHECK(a.params == b.params);
  REQUIRE(a.history.size() == 30);

  // Independent accuracy loop over the returned (best-epoch) parameters.
  std::size_t correct = 0;
  for (const auto& x : test) {
    const bool predicted = Forward(a.params, x).score >= 0.5;
    correct += predicted == (x.label == 1.0);
  }
  CHECK(static_cast<double>(correct) / test.size() == a.history[a.best_epoch - 1].test_accuracy);
  CHECK(a.best_test_accuracy == a.history[a.best_epoch - 1].test_accuracy);

  double best = INFINITY;
  for (const auto& h : a.history) {
    const double next = std::min(best, h.train_loss);
    CHECK(next <= best);
    best = next;
  }
  CHECK(a.history.back().train_loss < a.history.front().train_loss);
}

TEST_CASE("Train: divergence is reported") {
  TrainingConfig cfg;
  cfg.learning_rate = 1e308;
  cfg.epochs = 5;
  cfg.target_accuracy = 2.0;
  try {
    Train(InitParams(NetworkLayout{}, 0), testing::RandomBatch(32, 1), {}, cfg);
    FAIL("expected DivergedLoss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDivergedLoss);
  }
}

TEST_CASE("Train: configuration errors") {
  TrainingConfig cfg;
  cfg.batch_size = 0;
  CHECK_THROWS_AS(Train(ZeroParams(NetworkLayout{}), testing::RandomBatch(4, 1), {}, cfg), Error);
  cfg = {};
  CHECK_THROWS_AS(Train(ZeroParams(NetworkLayout{}), {}, {}, cfg), Error);
  NetworkLayout bad;
  bad.hidden_sizes = {4, 0};
  CHECK_THROWS_AS(ZeroParams(bad), Error);
}

TEST_CASE("Checkpoint: JSON round trip is lossless") {
  ModelCheckpoint c;
  c.params = testing::RandomParams(NetworkLayout{}, 12);
  c.training.seed = 5;
  c.training.optimizer = Optimizer::kAdam;
  c.history = {{1, 0.69, 0.5}, {2, 0.61, NAN}};
  c.best_epoch = 1;
  c.test_accuracy = 0.5;
  c.standardization = {{5400.5, 146.25, 342.0}, {6109.1, 85.5, 65.2}};
  c.data_seed = 9;
  c.train_size = 320;
  c.test_size = 160;
  const std::string text = SerializeCheckpoint(c);
  const ModelCheckpoint back = CheckpointFromJson(nlohmann::json::parse(text));
  CHECK(back.params == c.params);
  CHECK(back.standardization == c.standardization);
  CHECK(back.training.optimizer == Optimizer::kAdam);
  CHECK(std::isnan(back.history[1].test_accuracy));
  CHECK(SerializeCheckpoint(back) == text);

  auto j = nlohmann::json::parse(text);
  j["layers"][0]["weights"].erase(0);
  CHECK_THROWS_AS(CheckpointFromJson(j), Error);
  CHECK_THROWS_AS(ReadCheckpoint("/nonexistent/model.json"), Error);
}
