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

#include "ceb/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "ceb/error.hpp"

namespace ceb {
namespace {

using nlohmann::json;

// NaN is not representable in JSON.
json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumberOrNan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json CheckpointToJson(const ModelCheckpoint& c) {
  json layers = json::array();
  for (const auto& layer : c.params.layers) {
    layers.push_back(
        {{"in", layer.in}, {"out", layer.out}, {"weights", layer.weights}, {"bias", layer.bias}});
  }
  json history = json::array();
  for (const auto& h : c.history) {
    history.push_back({{"epoch", h.epoch},
                       {"train_loss", h.train_loss},
                       {"test_accuracy", NumberOrNull(h.test_accuracy)}});
  }
  return {
      {"format", "ceb-model"},
      {"version", c.version},
      {"layout",
       {{"input_size", c.params.layout.input_size},
        {"hidden_sizes", c.params.layout.hidden_sizes},
        {"output_size", c.params.layout.output_size}}},
      {"layers", layers},
      {"training",
       {{"learning_rate", c.training.learning_rate},
        {"epochs", c.training.epochs},
        {"batch_size", c.training.batch_size},
        {"seed", c.training.seed},
        {"optimizer", OptimizerName(c.training.optimizer)},
        {"l2", c.training.l2},
        {"target_accuracy", c.training.target_accuracy}}},
      {"history", history},
      {"best_epoch", c.best_epoch},
      {"test_accuracy", NumberOrNull(c.test_accuracy)},
      {"standardization",
       {{"features", {"income", "loan_amount", "loan_term"}},
        {"mean", c.standardization.mean},
        {"stddev", c.standardization.stddev}}},
      {"data", {{"seed", c.data_seed}, {"train_size", c.train_size}, {"test_size", c.test_size}}},
  };
}

ModelCheckpoint CheckpointFromJson(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "ceb-model") {
      throw Error(ErrorCode::kInvalidCheckpoint, "not a ceb model file");
    }
    ModelCheckpoint c;
    c.version = j.at("version").get<int>();
    if (c.version != kCheckpointVersion) {
      throw Error(ErrorCode::kInvalidCheckpoint,
                  fmt::format("unsupported checkpoint version {}", c.version));
    }
    NetworkLayout layout;
    layout.input_size = j.at("layout").at("input_size").get<std::size_t>();
    layout.hidden_sizes = j.at("layout").at("hidden_sizes").get<std::vector<std::size_t>>();
    layout.output_size = j.at("layout").at("output_size").get<std::size_t>();
    c.params = ZeroParams(layout);
    const json& layers = j.at("layers");
    if (layers.size() != c.params.layers.size()) {
      throw Error(ErrorCode::kInvalidCheckpoint, "layer count does not match layout");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
      DenseLayer& layer = c.params.layers[l];
      auto weights = layers[l].at("weights").get<std::vector<double>>();
      auto bias = layers[l].at("bias").get<std::vector<double>>();
      if (weights.size() != layer.weights.size() || bias.size() != layer.bias.size()) {
        throw Error(ErrorCode::kInvalidCheckpoint, fmt::format("layer {} has wrong shape", l));
      }
      for (double w : weights) {
        if (!std::isfinite(w)) throw Error(ErrorCode::kInvalidCheckpoint, "non-finite weight");
      }
      layer.weights = std::move(weights);
      layer.bias = std::move(bias);
    }
    const json& t = j.at("training");
    c.training.learning_rate = t.at("learning_rate").get<double>();
    c.training.epochs = t.at("epochs").get<std::size_t>();
    c.training.batch_size = t.at("batch_size").get<std::size_t>();
    c.training.seed = t.at("seed").get<std::uint64_t>();
    c.training.optimizer = ParseOptimizer(t.at("optimizer").get<std::string>());
    c.training.l2 = t.at("l2").get<double>();
    c.training.target_accuracy = t.at("target_accuracy").get<double>();
    for (const auto& h : j.at("history")) {
      c.history.push_back({h.at("epoch").get<std::size_t>(), h.at("train_loss").get<double>(),
                           NumberOrNan(h.at("test_accuracy"))});
    }
    c.best_epoch = j.at("best_epoch").get<std::size_t>();
    c.test_accuracy = NumberOrNan(j.at("test_accuracy"));
    c.standardization.mean = j.at("standardization").at("mean").get<std::array<double, 3>>();
    c.standardization.stddev = j.at("standardization").at("stddev").get<std::array<double, 3>>();
    c.data_seed = j.at("data").at("seed").get<std::uint64_t>();
    c.train_size = j.at("data").at("train_size").get<std::size_t>();
    c.test_size = j.at("data").at("test_size").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidCheckpoint, fmt::format("malformed checkpoint: {}", e.what()));
  }
}

std::string SerializeCheckpoint(const ModelCheckpoint& checkpoint) {
  return CheckpointToJson(checkpoint).dump(2) + "\n";
}

void WriteCheckpoint(const ModelCheckpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFileNotFound, fmt::format("cannot write '{}'", path.string()));
  out << SerializeCheckpoint(checkpoint);
}

ModelCheckpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot open model '{}'", path.string()));
  }
  try {
    return CheckpointFromJson(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidCheckpoint,
                fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

}  // namespace ceb
