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
#include <span>
#include <string>
#include <vector>

#include "ceb/dataset.hpp"

namespace ceb {

struct NetworkLayout {
  std::size_t input_size = kNumFeatures;
  std::vector<std::size_t> hidden_sizes{16, 8, 4};
  std::size_t output_size = 1;

  // Throws InvalidConfig unless every size is >= 1 and the output is a
  // single neuron.
  void Validate() const;
  std::size_t ProfileSize() const;

  friend bool operator==(const NetworkLayout&, const NetworkLayout&) = default;
};

// Fully connected layer, weights row-major (out x in).
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& W(std::size_t row, std::size_t col) { return weights[row * in + col]; }
  double W(std::size_t row, std::size_t col) const { return weights[row * in + col]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Hidden layers use ReLU, the last layer a sigmoid.
struct NetworkParams {
  NetworkLayout layout;
  std::vector<DenseLayer> layers;

  std::size_t ParameterCount() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

// Zero-filled parameters with the shapes implied by `layout`.
NetworkParams ZeroParams(const NetworkLayout& layout);

// He-uniform (bound sqrt(6/fan_in)) for ReLU layers, Glorot-uniform
// (bound sqrt(6/(fan_in+fan_out))) for the output layer, zero biases.
NetworkParams InitParams(const NetworkLayout& layout, std::uint64_t seed);

struct ForwardTrace {
  std::vector<std::vector<double>> hidden;  // post-ReLU, one vector per hidden layer
  double logit = 0.0;
  double score = 0.5;  // sigmoid(logit), in (0, 1)
};

ForwardTrace Forward(const NetworkParams& params, std::span<const double> x);
ForwardTrace Forward(const NetworkParams& params, const FeatureVector& x);

double Sigmoid(double z);

// Concatenated hidden activations of one datapoint. This is what gets
// embedded and clustered.
struct ActivationProfile {
  RowId row_id = 0;
  std::vector<double> values;
  double score = 0.5;

  friend bool operator==(const ActivationProfile&, const ActivationProfile&) = default;
};

ActivationProfile MakeActivationProfile(RowId row_id, const ForwardTrace& trace);

// Fraction of examples where (score >= 0.5) matches the label.
double Evaluate(const NetworkParams& params, std::span<const FeatureVector> examples);

enum class Optimizer { kSgd, kAdam };

std::string OptimizerName(Optimizer optimizer);
Optimizer ParseOptimizer(const std::string& name);

struct TrainingConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 500;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kSgd;
  double l2 = 0.0;
  // Stop once test accuracy reaches this value. Values > 1 disable it.
  double target_accuracy = 0.79;

  void Validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;       // 1-based
  double train_loss = 0.0;     // mean BCE over the train partition after the epoch
  double test_accuracy = 0.0;  // NaN when the test partition is empty
};

struct TrainingResult {
  // Parameters from the epoch with the best test accuracy (first such epoch).
  // Without a test partition, the final parameters.
  NetworkParams params;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_test_accuracy = 0.0;
  bool reached_target = false;
};

// Mini-batch backpropagation on binary cross-entropy. The train partition is
// reshuffled every epoch from a stream seeded by cfg.seed.
TrainingResult Train(NetworkParams params, const std::vector<FeatureVector>& train,
                     const std::vector<FeatureVector>& test, const TrainingConfig& cfg);
TrainingResult Train(NetworkParams params, const DatasetSplit& split, const TrainingConfig& cfg);

// Mean clamped BCE over `batch`, plus 0.5 * l2 * sum of squared weights.
double Loss(const NetworkParams& params, std::span<const FeatureVector> batch, double l2 = 0.0);

// Analytic gradient of Loss, same shapes as params (weights and biases).
NetworkParams Gradient(const NetworkParams& params, std::span<const FeatureVector> batch,
                       double l2 = 0.0);

// Max over all parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-6),
// with the numeric gradient from central differences with step `h`.
double GradientCheck(const NetworkParams& params, std::span<const FeatureVector> batch,
                     double l2 = 0.0, double h = 1e-5);

}  // namespace ceb
