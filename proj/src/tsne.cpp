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

#include "ceb/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ceb/error.hpp"
#include "ceb/random.hpp"

namespace ceb {
namespace {

double SquaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

std::vector<double> SquaredDistances(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = SquaredDistance(points[i], points[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return d;
}

// Conditional distribution of row i for precision beta; returns entropy in nats.
double RowDistribution(const double* dist, std::size_t n, std::size_t i, double beta,
                       std::vector<double>& out) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) dmin = std::min(dmin, dist[j]);
  }
  double z = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      out[j] = 0.0;
      continue;
    }
    const double shifted = dist[j] - dmin;
    const double w = std::exp(-beta * shifted);
    out[j] = w;
    z += w;
    weighted += w * shifted;
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= z;
  return std::log(z) + beta * weighted / z;
}

}  // namespace

AffinityMatrix ConditionalAffinities(const std::vector<std::vector<double>>& points,
                                     double perplexity) {
  const std::size_t n = points.size();
  if (n < 4) throw Error(ErrorCode::kPerplexityTooLarge, fmt::format("need n >= 4, got {}", n));
  if (!(perplexity > 1.0) || !(3.0 * perplexity < static_cast<double>(n))) {
    throw Error(ErrorCode::kPerplexityTooLarge,
                fmt::format("perplexity {} requires 1 < perplexity and 3 * perplexity < n = {}",
                            perplexity, n));
  }
  const std::size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kShapeMismatch, "points differ in dimension");
  }

  const std::vector<double> dist = SquaredDistances(points);
  const double target = std::log(perplexity);

  AffinityMatrix affinity;
  affinity.n = n;
  affinity.perplexity = perplexity;
  affinity.beta.assign(n, 1.0);
  std::vector<double> conditional(n * n, 0.0);
  std::vector<double> row(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double* d = &dist[i * n];
    double dmin = std::numeric_limits<double>::infinity();
    double dsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dmin = std::min(dmin, d[j]);
      dsum += d[j];
    }
    if (dsum == 0.0) {
      throw Error(ErrorCode::kDuplicatePointsDegenerate,
                  fmt::format("point {} coincides with every other point", i));
    }
    const double spread = dsum / static_cast<double>(n - 1) - dmin;
    double beta = spread > 0.0 ? 1.0 / spread : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 500; ++iter) {
      const double h = RowDistribution(d, n, i, beta, row);
      const double diff = h - target;
      if (std::abs(diff) < 1e-12) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      if (hi - lo <= std::abs(beta) * 1e-15) break;
    }
    RowDistribution(d, n, i, beta, row);
    affinity.beta[i] = beta;
    std::copy(row.begin(), row.end(), conditional.begin() + static_cast<std::ptrdiff_t>(i * n));
  }

  affinity.p.assign(n * n, 0.0);
  const double norm = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      affinity.p[i * n + j] = (conditional[i * n + j] + conditional[j * n + i]) / norm;
    }
  }
  return affinity;
}

double RowPerplexity(const std::vector<std::vector<double>>& points, const AffinityMatrix& affinity,
                     std::size_t i) {
  const std::size_t n = points.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) d[j] = SquaredDistance(points[i], points[j]);
  }
  std::vector<double> row(n);
  const double h = RowDistribution(d.data(), n, i, affinity.beta[i], row);
  return std::exp(h);
}

double KlDivergence(const AffinityMatrix& affinity, const std::vector<Point2>& y) {
  const std::size_t n = affinity.n;
  std::vector<double> num(n * n, 0.0);
  double sum_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy);
      num[i * n + j] = q;
      num[j * n + i] = q;
      sum_q += 2.0 * q;
    }
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = affinity.p[i * n + j];
      if (i == j || p <= 0.0) continue;
      const double q = std::max(num[i * n + j] / sum_q, std::numeric_limits<double>::min());
      kl += p * std::log(p / q);
    }
  }
  return kl;
}

Embedding2D Embed(const AffinityMatrix& affinity, const TsneConfig& cfg) {
  const std::size_t n = affinity.n;
  Embedding2D result;
  result.seed = cfg.seed;
  result.points.resize(n);

  Rng rng(cfg.seed);
  for (auto& p : result.points) {
    p[0] = rng.Normal(0.0, 1e-4);
    p[1] = rng.Normal(0.0, 1e-4);
  }

  std::vector<Point2>& y = result.points;
  std::vector<Point2> update(n, Point2{0.0, 0.0});
  std::vector<Point2> gains(n, Point2{1.0, 1.0});
  std::vector<Point2> grad(n);
  std::vector<double> num(n * n, 0.0);

  auto log_kl = [&](std::size_t completed) {
    result.kl_trace.push_back({completed, KlDivergence(affinity, y)});
  };

  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    const bool early = iter < cfg.exaggeration_iterations;
    const double exaggeration = early ? cfg.exaggeration : 1.0;
    const double momentum = early ? cfg.initial_momentum : cfg.final_momentum;

    double sum_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        const double q = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i * n + j] = q;
        num[j * n + i] = q;
        sum_q += 2.0 * q;
      }
    }

    for (auto& g : grad) g = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double q = num[i * n + j];
        const double p = affinity.p[i * n + j];
        const double mult = (exaggeration * p - q / sum_q) * q;
        const double fx = mult * (y[i][0] - y[j][0]);
        const double fy = mult * (y[i][1] - y[j][1]);
        grad[i][0] += fx;
        grad[i][1] += fy;
        grad[j][0] -= fx;
        grad[j][1] -= fy;
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        const double g = 4.0 * grad[i][d];
        if (!std::isfinite(g)) {
          throw Error(ErrorCode::kNonFiniteGradient,
                      fmt::format("non-finite gradient at iteration {}", iter));
        }
        double& gain = gains[i][d];
        gain = (g > 0.0) != (update[i][d] > 0.0) ? gain + 0.2 : gain * 0.8;
        gain = std::max(gain, 0.01);
        update[i][d] = momentum * update[i][d] - cfg.learning_rate * gain * g;
        y[i][d] += update[i][d];
      }
    }

    Point2 mean{0.0, 0.0};
    for (const auto& p : y) {
      mean[0] += p[0];
      mean[1] += p[1];
    }
    mean[0] /= static_cast<double>(n);
    mean[1] /= static_cast<double>(n);
    for (auto& p : y) {
      p[0] -= mean[0];
      p[1] -= mean[1];
    }

    const std::size_t completed = iter + 1;
    if (completed >= cfg.exaggeration_iterations && cfg.kl_interval > 0 &&
        (completed - cfg.exaggeration_iterations) % cfg.kl_interval == 0) {
      log_kl(completed);
    }
  }
  if (result.kl_trace.empty() || result.kl_trace.back().iteration != cfg.iterations) {
    log_kl(cfg.iterations);
  }
  return result;
}

}  // namespace ceb
