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

#include "ceb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ceb/error.hpp"

namespace ceb {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseValue(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: cannot parse '{}'", key, value));
  }
  return out;
}

std::vector<std::size_t> ParseSizes(std::string_view key, std::string_view value) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    sizes.push_back(ParseValue<std::size_t>(key, Trim(value.substr(start, end - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return sizes;
}

}  // namespace

std::optional<std::uint64_t> ParseSeed(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  return ParseValue<std::uint64_t>("seed", text);
}

void Config::ResolveSeeds(std::optional<std::uint64_t> override_seed,
                          std::optional<std::uint64_t> fallback_seed) {
  auto resolve = [&](std::optional<std::uint64_t>& seed) {
    if (override_seed) seed = override_seed;
    else if (!seed) seed = fallback_seed.value_or(0);
  };
  resolve(data_seed);
  resolve(train_seed);
  resolve(tsne_seed);
  resolve(cluster_seed);
  training.seed = *train_seed;
  tsne.seed = *tsne_seed;
  kmeans.seed = *cluster_seed;
}

void ApplySetting(Config& c, std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "data.path") c.data_path = std::string(value);
  else if (key == "data.seed") c.data_seed = ParseValue<std::uint64_t>(key, value);
  else if (key == "model.hidden_sizes") c.layout.hidden_sizes = ParseSizes(key, value);
  else if (key == "train.learning_rate") c.training.learning_rate = ParseValue<double>(key, value);
  else if (key == "train.epochs") c.training.epochs = ParseValue<std::size_t>(key, value);
  else if (key == "train.batch_size") c.training.batch_size = ParseValue<std::size_t>(key, value);
  else if (key == "train.seed") c.train_seed = ParseValue<std::uint64_t>(key, value);
  else if (key == "train.optimizer") c.training.optimizer = ParseOptimizer(std::string(value));
  else if (key == "train.l2") c.training.l2 = ParseValue<double>(key, value);
  else if (key == "train.target_accuracy") c.training.target_accuracy = ParseValue<double>(key, value);
  else if (key == "tsne.perplexity") c.tsne.perplexity = ParseValue<double>(key, value);
  else if (key == "tsne.iterations") c.tsne.iterations = ParseValue<std::size_t>(key, value);
  else if (key == "tsne.seed") c.tsne_seed = ParseValue<std::uint64_t>(key, value);
  else if (key == "cluster.k") c.kmeans.k = ParseValue<std::size_t>(key, value);
  else if (key == "cluster.restarts") c.kmeans.restarts = ParseValue<std::size_t>(key, value);
  else if (key == "cluster.seed") c.cluster_seed = ParseValue<std::uint64_t>(key, value);
  else if (key == "flip.feature") c.flip_feature = std::string(value);
  else throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown config key '{}'", key));
}

Config ParseConfig(std::string_view text, Config base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig, fmt::format("line {}: expected key = value", line_no));
    }
    ApplySetting(base, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

Config ReadConfigFile(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), std::move(base));
}

}  // namespace ceb
