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

#ifndef XLING_CORE_KNN_HPP
#define XLING_CORE_KNN_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dumpio.hpp"
#include "registry.hpp"

namespace xling {

enum class Metric { kEuclidean, kCosine };

std::string_view to_string(Metric metric) noexcept;
// "euclidean" or "cosine"; throws kInvalidArgument otherwise.
Metric parse_metric(std::string_view text);

// Euclidean: sqrt(sum (a_i - b_i)^2). Cosine: 1 - a.b / (|a| |b|), clamped to
// [0, 2]. Accumulates in double, in index order.
double distance(std::span<const float> a, std::span<const float> b, Metric metric);

// The union of every language's samples at one layer. Global indices follow
// the canonical order: languages sorted by code, then sample index.
class PooledLayer {
 public:
  // `max_samples` keeps only the first rows of each language.
  PooledLayer(std::vector<std::shared_ptr<const EmbeddingLayer>> layers, Metric metric,
              std::optional<std::size_t> max_samples = std::nullopt);

  std::size_t size() const noexcept { return language_of_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  Metric metric() const noexcept { return metric_; }

  const std::vector<LanguageId>& languages() const noexcept { return languages_; }
  std::span<const float> point(std::size_t global_index) const noexcept {
    return std::span<const float>(points_).subspan(global_index * dim_, dim_);
  }
  std::uint32_t language_slot(std::size_t global_index) const noexcept {
    return language_of_[global_index];
  }
  const LanguageId& language(std::size_t global_index) const noexcept {
    return languages_[language_of_[global_index]];
  }
  std::size_t sample_index(std::size_t global_index) const noexcept {
    return global_index - language_offset_[language_of_[global_index]];
  }
  // Global indices [begin, end) of one language's points.
  std::pair<std::size_t, std::size_t> language_range(std::uint32_t slot) const noexcept {
    return {language_offset_[slot], language_offset_[slot + 1]};
  }

  // Lowest global index of an all-zero vector, if any.
  std::optional<std::size_t> first_zero_vector() const noexcept { return first_zero_; }
  double norm(std::size_t global_index) const noexcept { return norms_[global_index]; }

 private:
  Metric metric_;
  std::size_t dim_ = 0;
  std::vector<LanguageId> languages_;
  std::vector<std::size_t> language_offset_;
  std::vector<std::uint32_t> language_of_;
  std::vector<float> points_;
  std::vector<double> norms_;
  std::optional<std::size_t> first_zero_;
};

struct NeighborProfile {
  std::size_t query = 0;
  // Ordered by (distance, global index), ascending; never contains `query`.
  std::vector<std::size_t> neighbors;
  // Sorted language slots of foreign neighbors (excludes the query's language).
  std::vector<std::uint32_t> neighbor_languages;

  friend bool operator==(const NeighborProfile&, const NeighborProfile&) = default;
};

NeighborProfile knn_query(const PooledLayer& pool, std::size_t query, std::size_t k);

// One profile per point, in global-index order. Output is identical for any
// worker count.
std::vector<NeighborProfile> all_profiles(const PooledLayer& pool, std::size_t k,
                                          unsigned workers = 1);

// Shrinks profiles computed at some k to a smaller k' (prefix property of the
// (distance, index) order), recomputing the foreign-language sets.
std::vector<NeighborProfile> truncate_profiles(const PooledLayer& pool,
                                               std::span<const NeighborProfile> profiles,
                                               std::size_t k);

}  // namespace xling

#endif  // XLING_CORE_KNN_HPP
