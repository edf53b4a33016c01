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

#include "ceb/kmeans.hpp"

#include <limits>

#include <fmt/format.h>

#include "ceb/error.hpp"
#include "ceb/random.hpp"

namespace ceb {
namespace {

std::vector<Point2> SeedPlusPlus(std::span<const Point2> points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Point2> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.Below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = SquaredDistance(points[i], centroids[0]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double r = rng.Uniform() * total;
      double cumulative = 0.0;
      chosen = n;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += d2[i];
        if (cumulative > r) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave r above the last partial sum.
      if (chosen == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    } else {
      chosen = static_cast<std::size_t>(rng.Below(n));
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points[i], centroids.back()));
    }
  }
  return centroids;
}

struct RunResult {
  std::vector<Point2> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  std::vector<double> trace;
};

RunResult Lloyd(std::span<const Point2> points, std::vector<Point2> centroids,
                std::size_t max_iterations) {
  const std::size_t n = points.size();
  const std::size_t k = centroids.size();
  RunResult run;
  std::vector<std::size_t> assignments(n), previous;
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      assignments[i] = Assign(points[i], centroids);
      ++counts[assignments[i]];
    }

    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = n;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignments[i]] < 2) continue;
        const double d = SquaredDistance(points[i], centroids[assignments[i]]);
        if (d > worst) {
          worst = d;
          farthest = i;
        }
      }
      if (farthest == n) {
        throw Error(ErrorCode::kEmptyClusterUnrepairable,
                    fmt::format("cluster {} is empty and no point can be moved into it", c));
      }
      --counts[assignments[farthest]];
      assignments[farthest] = c;
      counts[c] = 1;
      centroids[c] = points[farthest];
    }

    if (assignments == previous) break;
    previous = assignments;

    std::vector<Point2> sums(k, Point2{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
      sums[assignments[i]][0] += points[i][0];
      sums[assignments[i]][1] += points[i][1];
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double m = static_cast<double>(counts[c]);
      centroids[c] = {sums[c][0] / m, sums[c][1] / m};
    }
    run.trace.push_back(Inertia(points, centroids, assignments));
  }

  run.inertia = Inertia(points, centroids, assignments);
  run.centroids = std::move(centroids);
  run.assignments = std::move(assignments);
  return run;
}

}  // namespace

double SquaredDistance(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

std::size_t Assign(const Point2& point, std::span<const Point2> centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = SquaredDistance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double Inertia(std::span<const Point2> points, std::span<const Point2> centroids,
               std::span<const std::size_t> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += SquaredDistance(points[i], centroids[assignments[i]]);
  }
  return total;
}

Clustering KMeans(std::span<const Point2> points, const KMeansConfig& cfg) {
  if (cfg.k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  if (cfg.restarts == 0) throw Error(ErrorCode::kInvalidConfig, "restarts must be >= 1");
  if (cfg.k > points.size()) {
    throw Error(ErrorCode::kKTooLarge,
                fmt::format("k = {} exceeds the number of points ({})", cfg.k, points.size()));
  }

  Rng rng(cfg.seed);
  Clustering best;
  best.k = cfg.k;
  best.seed = cfg.seed;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    RunResult run = Lloyd(points, SeedPlusPlus(points, cfg.k, rng), cfg.max_iterations);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.centroids = std::move(run.centroids);
      best.assignments = std::move(run.assignments);
      best.inertia_trace = std::move(run.trace);
      best.best_restart = r;
    }
  }
  return best;
}

}  // namespace ceb
