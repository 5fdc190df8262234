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

#ifndef XLING_CORE_ANC_HPP
#define XLING_CORE_ANC_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dumpio.hpp"
#include "registry.hpp"

namespace xling {

// Pearson correlation; 0 when either series has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct AncPairResult {
  double value = 0.0;
  // Neurons skipped as constant in either language; they contribute 0.
  std::size_t zero_variance_neurons = 0;
};

// Mean over hidden dimensions of the Pearson correlation between the two
// languages' activations across the aligned samples.
AncPairResult anc_pair_detail(const EmbeddingLayer& a, const EmbeddingLayer& b);
double anc_pair(const EmbeddingLayer& a, const EmbeddingLayer& b);

struct AncMatrix {
  std::uint32_t layer_index = 0;
  std::vector<LanguageId> languages;  // canonical order
  std::vector<double> values;         // row-major |L| x |L|, unit diagonal
  // Per language: neurons that are constant over all samples.
  std::vector<std::size_t> zero_variance_neurons;

  std::size_t size() const noexcept { return languages.size(); }
  double at(std::size_t i, std::size_t j) const noexcept { return values[i * size() + j]; }

  friend bool operator==(const AncMatrix&, const AncMatrix&) = default;
};

// Languages are sorted by code before pairing.
AncMatrix anc_matrix_from_layers(std::vector<std::shared_ptr<const EmbeddingLayer>> layers,
                                 unsigned workers = 1);
AncMatrix layer_anc_matrix(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                           unsigned workers = 1);

enum class GroupLabel {
  kHH,
  kHL,
  kLL,
  kWithinRegion,
  kCrossRegion,
  kWithinFamily,
  kCrossFamily,
};
inline constexpr std::size_t kGroupLabelCount = 7;
std::string_view to_string(GroupLabel label) noexcept;

struct GroupStat {
  std::optional<double> mean;  // absent when the group has no pairs
  std::size_t pairs = 0;
};

struct GroupSummary {
  std::uint32_t layer_index = 0;
  std::array<GroupStat, kGroupLabelCount> groups;

  const GroupStat& operator[](GroupLabel label) const {
    return groups[static_cast<std::size_t>(label)];
  }
};

GroupSummary group_summary(const AncMatrix& matrix, const LanguageRegistry& registry);

// Linear interpolation between order statistics ("type 7"). p in [0, 1].
double percentile(std::vector<double> values, double p);

struct PairScore {
  LanguageId a;  // a < b
  LanguageId b;
  double aggregate = 0.0;

  friend bool operator==(const PairScore&, const PairScore&) = default;
};

struct PeakReport {
  std::vector<std::uint32_t> peak_layers;  // best first
  std::vector<double> peak_percentiles;    // matching peak_layers
  std::vector<PairScore> per_pair_aggregate;  // canonical pair order
  std::vector<PairScore> ranked_pairs;  // every pair, best first
  std::vector<PairScore> top_pairs;     // first ten of ranked_pairs
  std::vector<LanguageId> unique_languages;

  friend bool operator==(const PeakReport&, const PeakReport&) = default;
};

inline constexpr std::size_t kPeakLayerCount = 3;
inline constexpr std::size_t kTopPairCount = 10;
inline constexpr double kPeakPercentile = 0.75;

// Picks the three layers with the highest 75th percentile of off-diagonal
// ANC (ties: lower layer index) and ranks pairs by their mean ANC over those
// layers (ties: lexicographic pair). The mean sums in peak-rank order.
PeakReport peak_layers(std::span<const AncMatrix> matrices);

// Languages of `pairs` in first-appearance order.
std::vector<LanguageId> unique_languages(std::span<const PairScore> pairs);

// TSV body: ranked rows for the first n pairs, then a unique-language footer.
std::string top_pairs_table(const PeakReport& report, std::size_t n = kTopPairCount);

}  // namespace xling

#endif  // XLING_CORE_ANC_HPP
