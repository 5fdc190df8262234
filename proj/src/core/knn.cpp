// Copyright 2026 The xling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "knn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "error.hpp"
#include "parallel.hpp"

namespace xling {
namespace {

// Queries per tile; each candidate row is streamed once per tile.
constexpr std::size_t kQueryTile = 8;

double squared_norm(std::span<const float> a) {
  double s = 0.0;
  for (float v : a) {
    const double x = v;
    s += x * x;
  }
  return s;
}

double euclidean(const float* a, const float* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

double dot(const float* a, const float* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

double cosine_from_parts(double dot_ab, double norm_a, double norm_b) {
  const double c = 1.0 - dot_ab / (norm_a * norm_b);
  return std::clamp(c, 0.0, 2.0);
}

void require_searchable(const PooledLayer& pool, std::size_t k) {
  const std::size_t m = pool.size();
  if (m < 2 || k < 1 || k > m - 1) {
    throw Error(ErrorCode::kInvalidK, "k = " + std::to_string(k) + " outside [1, " +
                                          std::to_string(m == 0 ? 0 : m - 1) + "] for a pool of " +
                                          std::to_string(m) + " points");
  }
  if (pool.metric() == Metric::kCosine && pool.first_zero_vector()) {
    const std::size_t g = *pool.first_zero_vector();
    throw Error(ErrorCode::kZeroVector,
                "zero vector at global index " + std::to_string(g) + " (" + pool.language(g).str() +
                    ", sample " + std::to_string(pool.sample_index(g)) +
                    ") has no cosine distance",
                pool.language(g).str(), std::nullopt)
        .with_index(g);
  }
}

std::vector<std::uint32_t> foreign_languages(const PooledLayer& pool, std::size_t query,
                                             std::span<const std::size_t> neighbors) {
  const auto own = pool.language_slot(query);
  std::vector<std::uint32_t> langs;
  for (auto j : neighbors) {
    const auto slot = pool.language_slot(j);
    if (slot != own) langs.push_back(slot);
  }
  std::sort(langs.begin(), langs.end());
  langs.erase(std::unique(langs.begin(), langs.end()), langs.end());
  return langs;
}

NeighborProfile select_neighbors(const PooledLayer& pool, std::size_t query,
                                 std::span<const double> dist, std::size_t k,
                                 std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.clear();
  for (std::size_t j = 0; j < dist.size(); ++j) {
    if (j != query) scratch.emplace_back(dist[j], j);
  }
  auto kth = scratch.begin() + static_cast<std::ptrdiff_t>(k);
  std::nth_element(scratch.begin(), kth - 1, scratch.end());
  std::sort(scratch.begin(), kth);

  NeighborProfile p;
  p.query = query;
  p.neighbors.reserve(k);
  for (auto it = scratch.begin(); it != kth; ++it) p.neighbors.push_back(it->second);
  p.neighbor_languages = foreign_languages(pool, query, p.neighbors);
  return p;
}

// Distances from queries [q0, q1) to every pool point, row-major by query.
void distance_tile(const PooledLayer& pool, std::size_t q0, std::size_t q1,
                   std::vector<double>& out) {
  const std::size_t m = pool.size();
  const std::size_t d = pool.dim();
  out.assign((q1 - q0) * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const float* pj = pool.point(j).data();
    for (std::size_t q = q0; q < q1; ++q) {
      const float* pq = pool.point(q).data();
      double v;
      if (pool.metric() == Metric::kEuclidean) {
        v = euclidean(pq, pj, d);
      } else {
        v = cosine_from_parts(dot(pq, pj, d), pool.norm(q), pool.norm(j));
      }
      out[(q - q0) * m + j] = v;
    }
  }
}

}  // namespace

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::kEuclidean ? "euclidean" : "cosine";
}

Metric parse_metric(std::string_view text) {
  if (text == "euclidean") return Metric::kEuclidean;
  if (text == "cosine") return Metric::kCosine;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(text) + "' (expected euclidean or cosine)");
}

double distance(std::span<const float> a, std::span<const float> b, Metric metric) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShapeMismatch, "distance between vectors of dimension " +
                                               std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  }
  if (metric == Metric::kEuclidean) return euclidean(a.data(), b.data(), a.size());
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine distance is undefined for a zero vector");
  }
  return cosine_from_parts(dot(a.data(), b.data(), a.size()), std::sqrt(na), std::sqrt(nb));
}

PooledLayer::PooledLayer(std::vector<std::shared_ptr<const EmbeddingLayer>> layers,
                         Metric metric, std::optional<std::size_t> max_samples)
    : metric_(metric) {
  if (layers.empty()) throw Error(ErrorCode::kEmptyInput, "cannot pool zero languages");
  if (max_samples && *max_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_samples must be at least 1");
  }
  std::sort(layers.begin(), layers.end(),
            [](const auto& a, const auto& b) { return a->language() < b->language(); });
  dim_ = layers.front()->cols();

  std::size_t total = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = *layers[i];
    if (i > 0 && l.language() == layers[i - 1]->language()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "language '" + l.language().str() + "' pooled twice", l.language().str(),
                  l.layer_index());
    }
    if (l.cols() != dim_) {
      throw Error(ErrorCode::kShapeMismatch,
                  "language '" + l.language().str() + "' has dimension " + std::to_string(l.cols()) +
                      ", pool has " + std::to_string(dim_),
                  l.language().str(), l.layer_index());
    }
    total += max_samples ? std::min(*max_samples, l.rows()) : l.rows();
  }

  languages_.reserve(layers.size());
  language_offset_.reserve(layers.size() + 1);
  language_of_.reserve(total);
  points_.reserve(total * dim_);
  for (std::size_t slot = 0; slot < layers.size(); ++slot) {
    const auto& l = *layers[slot];
    const std::size_t rows = max_samples ? std::min(*max_samples, l.rows()) : l.rows();
    languages_.push_back(l.language());
    language_offset_.push_back(language_of_.size());
    const auto values = l.values().first(rows * dim_);
    points_.insert(points_.end(), values.begin(), values.end());
    language_of_.insert(language_of_.end(), rows, static_cast<std::uint32_t>(slot));
  }
  language_offset_.push_back(language_of_.size());

  norms_.resize(size());
  for (std::size_t g = 0; g < size(); ++g) {
    const double sq = squared_norm(point(g));
    norms_[g] = std::sqrt(sq);
    if (sq == 0.0 && !first_zero_) first_zero_ = g;
  }
}

NeighborProfile knn_query(const PooledLayer& pool, std::size_t query, std::size_t k) {
  require_searchable(pool, k);
  if (query >= pool.size()) {
    throw Error(ErrorCode::kOutOfRange, "query index " + std::to_string(query) +
                                            " outside pool of " + std::to_string(pool.size()));
  }
  std::vector<double> dist;
  distance_tile(pool, query, query + 1, dist);
  std::vector<std::pair<double, std::size_t>> scratch;
  scratch.reserve(pool.size());
  return select_neighbors(pool, query, dist, k, scratch);
}

std::vector<NeighborProfile> all_profiles(const PooledLayer& pool, std::size_t k,
                                          unsigned workers) {
  require_searchable(pool, k);
  const std::size_t m = pool.size();
  const std::size_t tiles = (m + kQueryTile - 1) / kQueryTile;
  std::vector<NeighborProfile> out(m);
  parallel_for(tiles, workers, [&](std::size_t t) {
    const std::size_t q0 = t * kQueryTile;
    const std::size_t q1 = std::min(m, q0 + kQueryTile);
    std::vector<double> dist;
    distance_tile(pool, q0, q1, dist);
    std::vector<std::pair<double, std::size_t>> scratch;
    scratch.reserve(m);
    for (std::size_t q = q0; q < q1; ++q) {
      out[q] = select_neighbors(pool, q, std::span(dist).subspan((q - q0) * m, m), k, scratch);
    }
  });
  return out;
}

std::vector<NeighborProfile> truncate_profiles(const PooledLayer& pool,
                                               std::span<const NeighborProfile> profiles,
                                               std::size_t k) {
  std::vector<NeighborProfile> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) {
    if (k < 1 || k > p.neighbors.size()) {
      throw Error(ErrorCode::kInvalidK, "cannot truncate a " + std::to_string(p.neighbors.size()) +
                                            "-NN profile to k = " + std::to_string(k));
    }
    NeighborProfile t;
    t.query = p.query;
    t.neighbors.assign(p.neighbors.begin(), p.neighbors.begin() + static_cast<std::ptrdiff_t>(k));
    t.neighbor_languages = foreign_languages(pool, p.query, t.neighbors);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace xling
