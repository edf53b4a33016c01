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
#include <vector>

#include "ceb/tsne.hpp"

namespace ceb {

struct Clustering {
  std::size_t k = 0;
  std::vector<Point2> centroids;
  std::vector<std::size_t> assignments;  // one cluster index per input point
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  // Inertia after every Lloyd iteration of the winning restart.
  std::vector<double> inertia_trace;
};

struct KMeansConfig {
  std::size_t k = 4;
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 0;
};

// k-means++ seeding followed by Lloyd iterations until the assignment stops
// changing (or max_iterations). A cluster that empties is reseeded once at the
// point farthest from its centroid. The restart with the lowest inertia wins;
// equal inertia keeps the earlier restart.
Clustering KMeans(std::span<const Point2> points, const KMeansConfig& cfg);

// Index of the nearest centroid; ties go to the lower index.
std::size_t Assign(const Point2& point, std::span<const Point2> centroids);
inline std::size_t Assign(const Point2& point, const Clustering& clustering) {
  return Assign(point, clustering.centroids);
}

double SquaredDistance(const Point2& a, const Point2& b);

// Sum of squared distances from each point to its assigned centroid.
double Inertia(std::span<const Point2> points, std::span<const Point2> centroids,
               std::span<const std::size_t> assignments);

}  // namespace ceb
