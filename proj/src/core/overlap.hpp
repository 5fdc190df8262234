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

#ifndef XLING_CORE_OVERLAP_HPP
#define XLING_CORE_OVERLAP_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dumpio.hpp"
#include "knn.hpp"

namespace xling {

// k: neighborhood size. tau: foreign languages a neighborhood must contain
// for a sample to count as a bridge.
struct IloParams {
  std::size_t k = 10;
  std::size_t tau = 5;
  Metric metric = Metric::kEuclidean;

  // Throws kInvalidParams unless k >= 1, 1 <= tau <= num_languages - 1 and
  // tau <= k.
  void validate(std::size_t num_languages) const;

  friend bool operator==(const IloParams&, const IloParams&) = default;
};

struct AnalysisOptions {
  unsigned workers = 1;
  // Keeps only the first max_samples parallel samples of every language.
  std::optional<std::size_t> max_samples;
};

// Fraction of profiles whose foreign-language set has at least tau members.
double bridge_score(std::span<const NeighborProfile> profiles, std::size_t tau);
// Size of the union of foreign-language sets over num_languages - 1.
double reachability_score(std::span<const NeighborProfile> profiles, std::size_t num_languages);
// Harmonic mean of bridge and reachability; 0 when both are 0.
double ilo_score(double bridge, double reachability);

struct IloLanguageScore {
  LanguageId language;
  double bridge = 0.0;
  double reachability = 0.0;
  double ilo = 0.0;

  friend bool operator==(const IloLanguageScore&, const IloLanguageScore&) = default;
};

struct IloLayerReport {
  std::uint32_t layer_index = 0;
  IloParams params;
  std::vector<IloLanguageScore> per_language;  // canonical language order
  double aggregate = 0.0;                      // unweighted mean of ilo
  std::size_t samples_per_language = 0;

  friend bool operator==(const IloLayerReport&, const IloLayerReport&) = default;
};

// Scores every language of an already searched pool. `profiles` must come
// from all_profiles(pool, params.k).
IloLayerReport ilo_report_from_profiles(const PooledLayer& pool,
                                        std::span<const NeighborProfile> profiles,
                                        std::uint32_t layer_index, const IloParams& params);

IloLayerReport layer_ilo_report(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                                const IloParams& params, const AnalysisOptions& options = {});

// One report per (layer, params), layers outer. Neighbor search runs once per
// (layer, metric) at the largest k requested and is truncated for smaller k.
std::vector<IloLayerReport> sweep(const EmbeddingCorpus& corpus,
                                  std::span<const std::uint32_t> layers,
                                  std::span<const IloParams> params,
                                  const AnalysisOptions& options = {});

}  // namespace xling

#endif  // XLING_CORE_OVERLAP_HPP
