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

#ifndef XLING_CORE_REPORT_HPP
#define XLING_CORE_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dumpio.hpp"
#include "overlap.hpp"

namespace xling {

// Provenance block carried by every output file.
struct ReportHeader {
  std::string engine;
  std::string model_name;
  std::string manifest_checksum;
  std::uint32_t num_layers = 0;
  std::uint64_t num_samples = 0;
  std::string pooling;
  std::optional<std::size_t> max_samples;

  static ReportHeader for_corpus(const EmbeddingCorpus& corpus,
                                 std::optional<std::size_t> max_samples = std::nullopt);

  friend bool operator==(const ReportHeader&, const ReportHeader&) = default;
};

// "# key: value" lines for CSV/TSV outputs.
std::string comment_block(const ReportHeader& header,
                          const std::vector<std::pair<std::string, std::string>>& extra = {});

struct CurvePoint {
  std::uint32_t layer = 0;
  double value = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct CurveSeries {
  std::string label;
  std::vector<CurvePoint> points;  // strictly increasing layers
};

// Aggregate ILO per layer, sorted by layer. Throws kParamMismatch when the
// reports were computed with different params, kDuplicateLayer on repeats.
CurveSeries assemble_curve(std::span<const IloLayerReport> reports, std::string label);

// A set of layer reports from one model/mode, as written by the ilo command.
struct IloRun {
  std::string label;
  ReportHeader header;
  std::vector<IloLayerReport> reports;
};

struct LanguageDelta {
  LanguageId language;
  double baseline = 0.0;
  double candidate = 0.0;
  double delta = 0.0;  // candidate - baseline
};

struct LayerDelta {
  std::uint32_t layer = 0;
  double baseline = 0.0;
  double candidate = 0.0;
  double delta = 0.0;
  std::vector<LanguageDelta> per_language;  // languages present in both
};

inline constexpr double kDefaultDisruptionThreshold = 0.05;

struct DeltaReport {
  std::string baseline_label;
  std::string candidate_label;
  IloParams params;
  double threshold = kDefaultDisruptionThreshold;
  std::vector<LayerDelta> layers;  // layers present in both runs
  // First layer whose aggregate |delta| exceeds the threshold.
  std::optional<std::uint32_t> first_exceeding_layer;
  // Early window: layers l with 3 * l < L, L = last shared layer + 1.
  std::uint32_t early_window_end = 0;
  std::optional<double> early_mean_delta;
};

DeltaReport compare(const IloRun& baseline, const IloRun& candidate,
                    double threshold = kDefaultDisruptionThreshold);

// CSV `language,sample_index,v0..v{d-1}`: the first max_samples rows (all when
// unset) of every language in canonical order, preceded by the provenance block.
void export_projection_data(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                            std::optional<std::size_t> max_samples, std::ostream& out);

}  // namespace xling

#endif  // XLING_CORE_REPORT_HPP
