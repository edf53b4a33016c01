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

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "ceb/random.hpp"

namespace ceb::testing {

const char* const kLoanHeader =
    "Loan_ID,Gender,Married,Dependents,Education,Self_Employed,ApplicantIncome,"
    "CoapplicantIncome,LoanAmount,Loan_Amount_Term,Credit_History,Property_Area,Loan_Status";

std::string SyntheticLoanCsv(const SyntheticLoanOptions& options) {
  Rng rng(options.seed);
  std::set<std::size_t> missing_rows;
  while (missing_rows.size() < std::min(options.rows_with_missing, options.rows)) {
    missing_rows.insert(static_cast<std::size_t>(rng.Below(options.rows)));
  }
  // Columns that have gaps in the real file.
  constexpr std::size_t kNullable[] = {1, 2, 3, 5, 8, 9, 10};
  constexpr const char* kAreas[] = {"Urban", "Rural", "Semiurban"};
  constexpr const char* kDependents[] = {"0", "1", "2", "3+"};
  constexpr double kTerms[] = {360, 360, 360, 360, 180, 480, 300, 240, 120, 84};

  std::string csv = std::string(kLoanHeader) + "\n";
  for (std::size_t i = 0; i < options.rows; ++i) {
    const bool male = rng.Uniform() < 0.8;
    const bool graduate = rng.Uniform() < 0.78;
    const bool self_employed = rng.Uniform() < 0.14;
    const double income = std::round(std::exp(rng.Normal(8.3, 0.55)));
    const double coincome = rng.Uniform() < 0.55 ? std::round(std::exp(rng.Normal(7.4, 0.6))) : 0;
    const double amount = std::max(9.0, std::round(income / 40.0 + rng.Normal(60.0, 30.0)));
    const double term = kTerms[rng.Below(std::size(kTerms))];
    const bool credit = rng.Uniform() < 0.85;
    const double logit = (credit ? 1.6 : -2.6) + (male ? options.male_bonus : 0.0) - 0.4 +
                         0.3 * (std::log(income) - 8.3) + (graduate ? 0.3 : -0.3);
    const bool approved = rng.Uniform() < 1.0 / (1.0 + std::exp(-logit));

    std::vector<std::string> cells = {
        fmt::format("LP{:06d}", 1000 + i),
        male ? "Male" : "Female",
        rng.Uniform() < 0.65 ? "Yes" : "No",
        kDependents[rng.Below(4)],
        graduate ? "Graduate" : "Not Graduate",
        self_employed ? "Yes" : "No",
        fmt::format("{}", income),
        fmt::format("{}", coincome),
        fmt::format("{}", amount),
        fmt::format("{:.1f}", term),
        credit ? "1.0" : "0.0",
        kAreas[rng.Below(3)],
        approved ? "Y" : "N",
    };
    if (missing_rows.contains(i)) cells[kNullable[rng.Below(std::size(kNullable))]].clear();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) csv += ',';
      csv += cells[c];
    }
    csv += '\n';
  }
  return csv;
}

std::vector<FeatureVector> GenderLabelVectors(std::size_t n, std::uint64_t seed,
                                              bool label_is_gender) {
  Rng rng(seed);
  std::vector<FeatureVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector& v = out[i];
    v.row_id = i;
    v.values[kGenderSlot] = rng.Uniform() < 0.5 ? 1.0 : 0.0;
    v.values[kEducationSlot] = rng.Uniform() < 0.5 ? 1.0 : 0.0;
    v.values[kSelfEmployedSlot] = rng.Uniform() < 0.5 ? 1.0 : 0.0;
    v.values[kCreditHistorySlot] = rng.Uniform() < 0.5 ? 1.0 : 0.0;
    for (const std::size_t slot : kContinuousSlots) v.values[slot] = rng.Normal();
    v.label = v.values[kGenderSlot];
  }
  if (!label_is_gender) {
    std::vector<double> labels;
    for (const auto& v : out) labels.push_back(v.label);
    rng.Shuffle(labels);
    for (std::size_t i = 0; i < n; ++i) out[i].label = labels[i];
  }
  return out;
}

NetworkParams RandomParams(const NetworkLayout& layout, std::uint64_t seed) {
  NetworkParams params = ZeroParams(layout);
  Rng rng(seed);
  for (auto& layer : params.layers) {
    for (double& w : layer.weights) w = rng.Uniform(-1.0, 1.0);
    for (double& b : layer.bias) b = rng.Uniform(-0.5, 0.5);
  }
  return params;
}

std::vector<FeatureVector> RandomBatch(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> batch(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch[i].row_id = i;
    for (double& x : batch[i].values) x = rng.Normal();
    batch[i].label = rng.Uniform() < 0.5 ? 1.0 : 0.0;
  }
  return batch;
}

AnalysisArtifact SmallArtifact(std::uint64_t seed, std::size_t rows) {
  SyntheticLoanOptions options;
  options.rows = rows;
  options.rows_with_missing = rows / 6;
  options.seed = seed;
  ArtifactInputs in;
  in.records = Clean(ParseCsv(SyntheticLoanCsv(options)));
  const auto vectors = EncodeAndStandardize(in.records).vectors;

  TsneConfig tsne;
  tsne.perplexity = 10.0;
  tsne.iterations = 300;
  tsne.seed = seed;
  KMeansConfig kmeans;
  kmeans.seed = seed;
  in.result = RunCounterfactual(InitParams(NetworkLayout{}, seed), vectors, MakeFlipSpec("gender"),
                                tsne, kmeans);

  in.dataset.total = in.records.size();
  for (const auto& r : in.records) {
    ++(r.gender == Gender::kMale ? in.dataset.gender_counts.male : in.dataset.gender_counts.female);
  }
  in.dataset.train_size = 2 * in.records.size() / 3;
  in.dataset.test_size = in.records.size() - in.dataset.train_size;
  in.model.hidden_sizes = NetworkLayout{}.hidden_sizes;
  in.model.test_accuracy = 0.5;
  in.config.perplexity = tsne.perplexity;
  in.config.tsne_iterations = tsne.iterations;
  in.config.tsne_seed = seed;
  in.config.cluster_seed = seed;
  return BuildArtifact(in);
}

std::string WriteTempFile(const std::string& name, const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / "ceb-tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary | std::ios::trunc) << contents;
  return path.string();
}

}  // namespace ceb::testing
