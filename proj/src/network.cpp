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

#include "ceb/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ceb/error.hpp"
#include "ceb/random.hpp"

namespace ceb {
namespace {

constexpr double kScoreClamp = 1e-12;

double Relu(double z) { return z > 0.0 ? z : 0.0; }

// Pre-activations and activations of every layer for one example. acts[0] is
// the input; acts[l + 1] the output of layer l.
struct Tape {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> acts;
};

Tape Run(const NetworkParams& params, std::span<const double> x) {
  Tape tape;
  tape.acts.emplace_back(x.begin(), x.end());
  const std::size_t n_layers = params.layers.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const DenseLayer& layer = params.layers[l];
    const std::vector<double>& input = tape.acts.back();
    std::vector<double> z(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double sum = layer.bias[o];
      const double* w = &layer.weights[o * layer.in];
      for (std::size_t i = 0; i < layer.in; ++i) sum += w[i] * input[i];
      z[o] = sum;
    }
    std::vector<double> a(layer.out);
    const bool is_output = l + 1 == n_layers;
    for (std::size_t o = 0; o < layer.out; ++o) a[o] = is_output ? Sigmoid(z[o]) : Relu(z[o]);
    tape.pre.push_back(std::move(z));
    tape.acts.push_back(std::move(a));
  }
  return tape;
}

void CheckInput(const NetworkParams& params, std::span<const double> x) {
  if (x.size() != params.layout.input_size) {
    throw Error(ErrorCode::kShapeMismatch,
                fmt::format("input has {} values, network expects {}", x.size(),
                            params.layout.input_size));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, "input contains NaN or inf");
  }
}

double ClampedBce(double score, double label) {
  const double c = std::clamp(score, kScoreClamp, 1.0 - kScoreClamp);
  return -(label * std::log(c) + (1.0 - label) * std::log(1.0 - c));
}

double WeightPenalty(const NetworkParams& params, double l2) {
  if (l2 == 0.0) return 0.0;
  double sq = 0.0;
  for (const auto& layer : params.layers) {
    for (double w : layer.weights) sq += w * w;
  }
  return 0.5 * l2 * sq;
}

// Adds the gradient contribution of one example, scaled by `scale`.
void Backprop(const NetworkParams& params, const FeatureVector& example, double scale,
              NetworkParams& grad) {
  const Tape tape = Run(params, example.values);
  const std::size_t n_layers = params.layers.size();
  const double score = tape.acts.back()[0];

  // d(clamped BCE)/d(logit); zero where the clamp is active.
  double dlogit = 0.0;
  if (score > kScoreClamp && score < 1.0 - kScoreClamp) dlogit = score - example.label;
  std::vector<double> delta{dlogit * scale};

  for (std::size_t l = n_layers; l-- > 0;) {
    const DenseLayer& layer = params.layers[l];
    DenseLayer& g = grad.layers[l];
    const std::vector<double>& input = tape.acts[l];
    for (std::size_t o = 0; o < layer.out; ++o) {
      g.bias[o] += delta[o];
      double* gw = &g.weights[o * layer.in];
      for (std::size_t i = 0; i < layer.in; ++i) gw[i] += delta[o] * input[i];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double* w = &layer.weights[o * layer.in];
      for (std::size_t i = 0; i < layer.in; ++i) prev[i] += w[i] * delta[o];
    }
    const std::vector<double>& pre = tape.pre[l - 1];
    for (std::size_t i = 0; i < layer.in; ++i) {
      if (!(pre[i] > 0.0)) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
}

// Flat views over every parameter (weights then bias, layer by layer).
std::vector<double*> FlatRefs(NetworkParams& params) {
  std::vector<double*> refs;
  for (auto& layer : params.layers) {
    for (double& w : layer.weights) refs.push_back(&w);
    for (double& b : layer.bias) refs.push_back(&b);
  }
  return refs;
}

struct AdamState {
  std::vector<double> m, v;
  std::size_t t = 0;
};

}  // namespace

void NetworkLayout::Validate() const {
  if (input_size == 0) throw Error(ErrorCode::kInvalidConfig, "input_size must be >= 1");
  if (output_size != 1) throw Error(ErrorCode::kInvalidConfig, "output_size must be 1");
  for (std::size_t h : hidden_sizes) {
    if (h == 0) throw Error(ErrorCode::kInvalidConfig, "hidden layer sizes must be >= 1");
  }
}

std::size_t NetworkLayout::ProfileSize() const {
  std::size_t total = 0;
  for (std::size_t h : hidden_sizes) total += h;
  return total;
}

std::size_t NetworkParams::ParameterCount() const {
  std::size_t total = 0;
  for (const auto& layer : layers) total += layer.weights.size() + layer.bias.size();
  return total;
}

NetworkParams ZeroParams(const NetworkLayout& layout) {
  layout.Validate();
  NetworkParams params;
  params.layout = layout;
  std::size_t in = layout.input_size;
  std::vector<std::size_t> outs = layout.hidden_sizes;
  outs.push_back(layout.output_size);
  for (std::size_t out : outs) {
    params.layers.push_back(DenseLayer{in, out, std::vector<double>(out * in, 0.0),
                                       std::vector<double>(out, 0.0)});
    in = out;
  }
  return params;
}

NetworkParams InitParams(const NetworkLayout& layout, std::uint64_t seed) {
  NetworkParams params = ZeroParams(layout);
  Rng rng(seed);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    DenseLayer& layer = params.layers[l];
    const bool is_output = l + 1 == params.layers.size();
    const double fan_in = static_cast<double>(layer.in);
    const double fan_out = static_cast<double>(layer.out);
    const double bound =
        is_output ? std::sqrt(6.0 / (fan_in + fan_out)) : std::sqrt(6.0 / fan_in);
    for (double& w : layer.weights) w = rng.Uniform(-bound, bound);
  }
  return params;
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ForwardTrace Forward(const NetworkParams& params, std::span<const double> x) {
  CheckInput(params, x);
  Tape tape = Run(params, x);
  ForwardTrace trace;
  const std::size_t n_hidden = params.layers.size() - 1;
  for (std::size_t l = 0; l < n_hidden; ++l) trace.hidden.push_back(std::move(tape.acts[l + 1]));
  trace.logit = tape.pre.back()[0];
  trace.score = tape.acts.back()[0];
  return trace;
}

ForwardTrace Forward(const NetworkParams& params, const FeatureVector& x) {
  return Forward(params, std::span<const double>(x.values));
}

ActivationProfile MakeActivationProfile(RowId row_id, const ForwardTrace& trace) {
  ActivationProfile profile;
  profile.row_id = row_id;
  for (const auto& h : trace.hidden) profile.values.insert(profile.values.end(), h.begin(), h.end());
  profile.score = trace.score;
  return profile;
}

double Evaluate(const NetworkParams& params, std::span<const FeatureVector> examples) {
  if (examples.empty()) throw Error(ErrorCode::kEmptySet, "cannot evaluate on an empty set");
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    const bool approve = Forward(params, ex).score >= 0.5;
    if (approve == (ex.label >= 0.5)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

std::string OptimizerName(Optimizer optimizer) {
  return optimizer == Optimizer::kAdam ? "adam" : "sgd";
}

Optimizer ParseOptimizer(const std::string& name) {
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adam") return Optimizer::kAdam;
  throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown optimizer '{}'", name));
}

void TrainingConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidConfig, "learning_rate must be >= 0");
  }
  if (epochs == 0) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (batch_size == 0) throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  if (!(l2 >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "l2 must be >= 0");
}

double Loss(const NetworkParams& params, std::span<const FeatureVector> batch, double l2) {
  if (batch.empty()) throw Error(ErrorCode::kEmptySet, "loss of an empty batch");
  double total = 0.0;
  for (const auto& ex : batch) total += ClampedBce(Forward(params, ex).score, ex.label);
  return total / static_cast<double>(batch.size()) + WeightPenalty(params, l2);
}

NetworkParams Gradient(const NetworkParams& params, std::span<const FeatureVector> batch,
                       double l2) {
  if (batch.empty()) throw Error(ErrorCode::kEmptySet, "gradient of an empty batch");
  NetworkParams grad = ZeroParams(params.layout);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    CheckInput(params, ex.values);
    Backprop(params, ex, scale, grad);
  }
  if (l2 != 0.0) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      auto& gw = grad.layers[l].weights;
      const auto& w = params.layers[l].weights;
      for (std::size_t i = 0; i < w.size(); ++i) gw[i] += l2 * w[i];
    }
  }
  return grad;
}

double GradientCheck(const NetworkParams& params, std::span<const FeatureVector> batch, double l2,
                     double h) {
  NetworkParams analytic = Gradient(params, batch, l2);
  NetworkParams probe = params;
  const auto probe_refs = FlatRefs(probe);
  const auto grad_refs = FlatRefs(analytic);
  double worst = 0.0;
  for (std::size_t i = 0; i < probe_refs.size(); ++i) {
    const double saved = *probe_refs[i];
    *probe_refs[i] = saved + h;
    const double up = Loss(probe, batch, l2);
    *probe_refs[i] = saved - h;
    const double down = Loss(probe, batch, l2);
    *probe_refs[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = *grad_refs[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

TrainingResult Train(NetworkParams params, const std::vector<FeatureVector>& train,
                     const std::vector<FeatureVector>& test, const TrainingConfig& cfg) {
  cfg.Validate();
  if (train.empty()) throw Error(ErrorCode::kEmptySet, "train partition is empty");

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  AdamState adam;
  const std::size_t n_params = params.ParameterCount();
  if (cfg.optimizer == Optimizer::kAdam) {
    adam.m.assign(n_params, 0.0);
    adam.v.assign(n_params, 0.0);
  }

  TrainingResult result;
  result.params = params;
  result.best_test_accuracy = test.empty() ? std::numeric_limits<double>::quiet_NaN() : -1.0;

  std::vector<FeatureVector> batch;
  batch.reserve(cfg.batch_size);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);
      NetworkParams grad = Gradient(params, batch, cfg.l2);
      const auto p = FlatRefs(params);
      const auto g = FlatRefs(grad);
      if (cfg.optimizer == Optimizer::kSgd) {
        for (std::size_t i = 0; i < p.size(); ++i) *p[i] -= cfg.learning_rate * *g[i];
      } else {
        constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
        ++adam.t;
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.t));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.t));
        for (std::size_t i = 0; i < p.size(); ++i) {
          adam.m[i] = kBeta1 * adam.m[i] + (1.0 - kBeta1) * *g[i];
          adam.v[i] = kBeta2 * adam.v[i] + (1.0 - kBeta2) * *g[i] * *g[i];
          *p[i] -= cfg.learning_rate * (adam.m[i] / c1) / (std::sqrt(adam.v[i] / c2) + kEps);
        }
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = Loss(params, train, cfg.l2);
    if (!std::isfinite(record.train_loss)) {
      throw Error(ErrorCode::kDivergedLoss, fmt::format("non-finite loss at epoch {}", epoch));
    }
    record.test_accuracy =
        test.empty() ? std::numeric_limits<double>::quiet_NaN() : Evaluate(params, test);
    result.history.push_back(record);

    if (test.empty()) {
      result.params = params;
      result.best_epoch = epoch;
      continue;
    }
    if (record.test_accuracy > result.best_test_accuracy) {
      result.best_test_accuracy = record.test_accuracy;
      result.best_epoch = epoch;
      result.params = params;
    }
    if (record.test_accuracy >= cfg.target_accuracy) {
      result.reached_target = true;
      break;
    }
  }
  return result;
}

TrainingResult Train(NetworkParams params, const DatasetSplit& split, const TrainingConfig& cfg) {
  return Train(std::move(params), split.train, split.test, cfg);
}

}  // namespace ceb
