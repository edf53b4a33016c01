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

// ceb: train the loan model, run the counterfactual analysis, serve results.
//
//   ceb train   --data loans.csv --seed 0 --out model.json
//   ceb analyze --data loans.csv --model model.json --flip gender --seed 0 --out analysis.json
//   ceb serve   --artifact analysis.json --port 8080
//   ceb validate --artifact analysis.json

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ceb/checkpoint.hpp"
#include "ceb/config.hpp"
#include "ceb/error.hpp"
#include "ceb/pipeline.hpp"
#include "ceb/report.hpp"
#include "ceb/service.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kDataError = 2,
  kDiverged = 3,
  kInconsistent = 4,
  kServeFailure = 5,
};

int ExitCodeFor(const ceb::Error& e) {
  switch (e.code()) {
    case ceb::ErrorCode::kDivergedLoss: return kDiverged;
    case ceb::ErrorCode::kConsistencyViolation: return kInconsistent;
    case ceb::ErrorCode::kNonFiniteGradient:
    case ceb::ErrorCode::kEmptyClusterUnrepairable:
      return kOther;
    default: return kDataError;
  }
}

struct CommonOptions {
  std::string data;
  std::string config_file;
  std::optional<std::uint64_t> seed;
};

ceb::Config LoadConfig(const CommonOptions& opts) {
  ceb::Config config;
  if (!opts.config_file.empty()) config = ceb::ReadConfigFile(opts.config_file);
  if (!opts.data.empty()) config.data_path = opts.data;
  std::optional<std::uint64_t> env_seed;
  if (const char* env = std::getenv("CEB_SEED")) env_seed = ceb::ParseSeed(env);
  config.ResolveSeeds(opts.seed, env_seed);
  return config;
}

int RunTrain(const CommonOptions& opts, const std::string& out) {
  const ceb::Config config = LoadConfig(opts);
  const auto records = ceb::LoadRecords(config);
  const ceb::ModelCheckpoint checkpoint = ceb::TrainModel(records, config);
  ceb::WriteCheckpoint(checkpoint, out);
  std::cout << fmt::format("rows: {} (train {}, test {})\n", records.size(), checkpoint.train_size,
                           checkpoint.test_size);
  std::cout << fmt::format("epochs run: {}, best epoch: {}\n", checkpoint.history.size(),
                           checkpoint.best_epoch);
  std::cout << fmt::format("test accuracy: {:.4f}\n", checkpoint.test_accuracy);
  std::cout << "model written to " << out << "\n";
  return kOk;
}

void PrintBiasTable(const ceb::AnalysisArtifact& a) {
  std::cout << fmt::format("{:<14} {:>5} {:>10} {:>10} {:>8}\n", "group", "size", "original",
                           "flipped", "delta");
  for (const auto& c : a.bias.clusters) {
    std::cout << fmt::format("{:<14} {:>5} {:>9.1f}% {:>9.1f}% {:>+8.1f}\n",
                             ceb::DisplayName(c.cluster), c.size, c.avg_original_score,
                             c.avg_flipped_score, c.delta);
  }
  std::cout << fmt::format("mean |delta|: {:.1f} pp, mean delta: {:+.1f} pp "
                           "(male rows {:+.1f}, female rows {:+.1f})\n",
                           a.bias.mean_abs_delta, a.bias.mean_delta, a.bias.mean_delta_male,
                           a.bias.mean_delta_female);
}

int RunAnalyze(const CommonOptions& opts, const std::string& model, const std::string& flip,
               const std::string& out) {
  ceb::Config config = LoadConfig(opts);
  if (!flip.empty()) config.flip_feature = flip;
  ceb::MakeFlipSpec(config.flip_feature);  // reject bad features before any work
  const ceb::ModelCheckpoint checkpoint = ceb::ReadCheckpoint(model);
  const auto records = ceb::LoadRecords(config);
  const ceb::AnalysisOutput analysis = ceb::Analyze(records, checkpoint, config);
  ceb::WriteArtifact(analysis.artifact, out);
  std::cout << fmt::format("{} rows, {} original groups, {} flipped groups, {} paths\n",
                           analysis.artifact.points.size(),
                           analysis.artifact.original_clusters.size(),
                           analysis.artifact.flipped_clusters.size(),
                           analysis.artifact.paths.size());
  PrintBiasTable(analysis.artifact);
  std::cout << "artifact written to " << out << "\n";
  return kOk;
}

int RunValidate(const std::string& artifact_path) {
  const auto violations = ceb::ValidateArtifact(ceb::ReadArtifact(artifact_path));
  if (violations.empty()) {
    std::cout << artifact_path << ": ok\n";
    return kOk;
  }
  for (const auto& v : violations) std::cerr << v << "\n";
  return kInconsistent;
}

int RunServe(const ceb::ServiceConfig& config) {
  std::shared_ptr<const ceb::ArtifactService> service;
  try {
    service = std::make_shared<const ceb::ArtifactService>(
        ceb::ArtifactService::FromFile(config.artifact_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kServeFailure;
  }
  if (!service->valid()) {
    std::cerr << "error: artifact '" << config.artifact_path.string()
              << "' failed validation, refusing to serve:\n";
    for (const auto& v : service->violations()) std::cerr << "  - " << v << "\n";
    return kServeFailure;
  }
  // SIGINT/SIGTERM are taken by a waiter thread rather than a handler, so the
  // shutdown runs outside signal context. Threads started later inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ceb::Server server(service, config);
  int port = 0;
  try {
    port = server.Bind();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kServeFailure;
  }
  std::cout << fmt::format("listening on http://{}:{}", config.bind_address, port) << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Run();
  kill(getpid(), SIGTERM);  // releases the waiter if Run returned on its own
  waiter.join();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual bias workbench for a loan-approval network"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  std::string train_out = "model.json";
  auto* train = app.add_subcommand("train", "Train the network and write a checkpoint");
  train->add_option("--data", train_opts.data, "Loan CSV file")->required();
  train->add_option("--seed", train_opts.seed, "Seed for every stochastic stage");
  train->add_option("--config", train_opts.config_file, "key = value config file");
  train->add_option("--out", train_out, "Checkpoint path")->capture_default_str();

  CommonOptions analyze_opts;
  std::string model_path, flip, analyze_out = "analysis.json";
  auto* analyze = app.add_subcommand("analyze", "Run the counterfactual analysis");
  analyze->add_option("--data", analyze_opts.data, "Loan CSV file")->required();
  analyze->add_option("--model", model_path, "Checkpoint from `ceb train`")->required();
  analyze->add_option("--flip", flip, "Binary feature to flip (default gender)");
  analyze->add_option("--seed", analyze_opts.seed, "Seed for embedding and clustering");
  analyze->add_option("--config", analyze_opts.config_file, "key = value config file");
  analyze->add_option("--out", analyze_out, "Artifact path")->capture_default_str();

  ceb::ServiceConfig serve_cfg;
  std::string artifact_path = "analysis.json";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve an artifact over HTTP");
  serve->add_option("--artifact", artifact_path, "Artifact from `ceb analyze`")
      ->capture_default_str();
  serve->add_option("--port", serve_cfg.port, "Port, 0 picks a free one")->capture_default_str();
  serve->add_option("--bind", serve_cfg.bind_address, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Directory with the web UI bundle");

  std::string validate_path = "analysis.json";
  auto* validate = app.add_subcommand("validate", "Re-check an artifact's invariants");
  validate->add_option("--artifact", validate_path, "Artifact path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return RunTrain(train_opts, train_out);
    if (*analyze) return RunAnalyze(analyze_opts, model_path, flip, analyze_out);
    if (*serve) {
      serve_cfg.artifact_path = artifact_path;
      if (!static_dir.empty()) serve_cfg.static_dir = static_dir;
      return RunServe(serve_cfg);
    }
    if (*validate) return RunValidate(validate_path);
  } catch (const ceb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
