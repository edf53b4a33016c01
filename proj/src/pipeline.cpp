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

#include "ceb/pipeline.hpp"

#include <fmt/format.h>

#include "ceb/error.hpp"

namespace ceb {

std::vector<LoanRecord> LoadRecords(const Config& config) {
  if (config.data_path.empty()) {
    throw Error(ErrorCode::kFileNotFound, "no data path given (--data or data.path)");
  }
  return Clean(ReadCsvFile(config.data_path));
}

ModelCheckpoint TrainModel(const std::vector<LoanRecord>& records, const Config& config) {
  const DatasetSplit split = Split(Encode(records), config.data_seed.value_or(0));
  TrainingConfig training = config.training;
  training.seed = config.train_seed.value_or(training.seed);
  TrainingResult trained = Train(InitParams(config.layout, training.seed), split, training);

  ModelCheckpoint checkpoint;
  checkpoint.params = std::move(trained.params);
  checkpoint.training = training;
  checkpoint.history = std::move(trained.history);
  checkpoint.best_epoch = trained.best_epoch;
  checkpoint.test_accuracy = split.test.empty() ? trained.best_test_accuracy
                                                : Evaluate(checkpoint.params, split.test);
  checkpoint.standardization = split.standardization;
  checkpoint.data_seed = split.seed;
  checkpoint.train_size = split.train.size();
  checkpoint.test_size = split.test.size();
  return checkpoint;
}

AnalysisOutput Analyze(const std::vector<LoanRecord>& records, const ModelCheckpoint& checkpoint,
                       const Config& config) {
  if (checkpoint.train_size + checkpoint.test_size != records.size()) {
    throw Error(ErrorCode::kInvalidCheckpoint,
                fmt::format("model was trained on {} rows but the data has {} clean rows",
                            checkpoint.train_size + checkpoint.test_size, records.size()));
  }
  const FlipSpec spec = MakeFlipSpec(config.flip_feature);
  const auto vectors = EncodeAndStandardize(records, checkpoint.standardization).vectors;

  TsneConfig tsne = config.tsne;
  tsne.seed = config.tsne_seed.value_or(tsne.seed);
  KMeansConfig kmeans = config.kmeans;
  kmeans.seed = config.cluster_seed.value_or(kmeans.seed);

  AnalysisOutput out;
  out.result = RunCounterfactual(checkpoint.params, vectors, spec, tsne, kmeans);

  ArtifactInputs inputs;
  inputs.records = records;
  inputs.result = out.result;
  inputs.dataset.total = records.size();
  for (const auto& r : records) {
    ++(r.gender == Gender::kMale ? inputs.dataset.gender_counts.male
                                 : inputs.dataset.gender_counts.female);
  }
  inputs.dataset.train_size = checkpoint.train_size;
  inputs.dataset.test_size = checkpoint.test_size;
  inputs.model.input_size = checkpoint.params.layout.input_size;
  inputs.model.hidden_sizes = checkpoint.params.layout.hidden_sizes;
  inputs.model.output_size = checkpoint.params.layout.output_size;
  inputs.model.test_accuracy = checkpoint.test_accuracy;
  inputs.model.best_epoch = checkpoint.best_epoch;
  inputs.config.data_seed = checkpoint.data_seed;
  inputs.config.train_seed = checkpoint.training.seed;
  inputs.config.flip_feature = spec.feature;
  inputs.config.perplexity = tsne.perplexity;
  inputs.config.tsne_iterations = tsne.iterations;
  inputs.config.tsne_seed = tsne.seed;
  inputs.config.k = kmeans.k;
  inputs.config.restarts = kmeans.restarts;
  inputs.config.cluster_seed = kmeans.seed;
  out.artifact = BuildArtifact(inputs);
  return out;
}

}  // namespace ceb
