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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ceb {

// Joint probabilities P for exact t-SNE, row-major n x n.
struct AffinityMatrix {
  std::size_t n = 0;
  double perplexity = 30.0;
  std::vector<double> p;
  // Gaussian precision beta_i = 1 / (2 sigma_i^2) found for every row.
  std::vector<double> beta;

  double At(std::size_t i, std::size_t j) const { return p[i * n + j]; }
};

// Calibrates one Gaussian bandwidth per row by bisection so that
// 2^H(P_i) = perplexity, then symmetrizes: p_ij = (p_j|i + p_i|j) / 2n.
// Distances are squared Euclidean on the raw vectors.
//
// Requires n >= 4 and 3 * perplexity < n. Throws DuplicatePointsDegenerate
// when a point coincides with every other point.
AffinityMatrix ConditionalAffinities(const std::vector<std::vector<double>>& points,
                                     double perplexity);

// Perplexity reached by row i's conditional distribution for the stored
// beta, recomputed from the points.
double RowPerplexity(const std::vector<std::vector<double>>& points, const AffinityMatrix& affinity,
                     std::size_t i);

using Point2 = std::array<double, 2>;

struct KlSample {
  std::size_t iteration = 0;
  double kl = 0.0;
};

struct Embedding2D {
  std::vector<Point2> points;
  std::vector<KlSample> kl_trace;
  std::uint64_t seed = 0;
};

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  double learning_rate = 200.0;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t kl_interval = 50;
};

// Gradient descent on KL(P || Q) with a Student-t Q. Early exaggeration and
// the low momentum apply to iterations [0, exaggeration_iterations). KL is
// sampled every kl_interval iterations from the end of exaggeration on, plus
// after the final iteration. Uses per-coordinate adaptive gains and keeps the
// embedding centred.
Embedding2D Embed(const AffinityMatrix& affinity, const TsneConfig& cfg);

// KL(P || Q) for the given embedding.
double KlDivergence(const AffinityMatrix& affinity, const std::vector<Point2>& points);

}  // namespace ceb
