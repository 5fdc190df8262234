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

#include "overlap.hpp"

#include <algorithm>
#include <map>

#include "error.hpp"
#include "parallel.hpp"

namespace xling {

void IloParams::validate(std::size_t num_languages) const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidParams, "invalid ILO parameters (k=" + std::to_string(k) +
                                               ", tau=" + std::to_string(tau) + "): " + why);
  };
  if (k < 1) fail("k must be at least 1");
  if (tau < 1) fail("tau must be at least 1");
  if (tau > k) fail("tau must not exceed k");
  if (num_languages < 2) fail("at least two languages are required");
  if (tau > num_languages - 1) {
    fail("tau must not exceed the number of other languages (" +
         std::to_string(num_languages - 1) + ")");
  }
}

double bridge_score(std::span<const NeighborProfile> profiles, std::size_t tau) {
  if (profiles.empty()) throw Error(ErrorCode::kEmptyInput, "bridge score of zero samples");
  std::size_t hits = 0;
  for (const auto& p : profiles) {
    if (p.neighbor_languages.size() >= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(profiles.size());
}

double reachability_score(std::span<const NeighborProfile> profiles, std::size_t num_languages) {
  if (profiles.empty()) throw Error(ErrorCode::kEmptyInput, "reachability of zero samples");
  if (num_languages < 2) {
    throw Error(ErrorCode::kInvalidArgument, "reachability needs at least two languages");
  }
  std::vector<std::uint32_t> seen;
  for (const auto& p : profiles) {
    seen.insert(seen.end(), p.neighbor_languages.begin(), p.neighbor_languages.end());
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return static_cast<double>(seen.size()) / static_cast<double>(num_languages - 1);
}

double ilo_score(double bridge, double reachability) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(bridge) || !in_unit(reachability)) {
    throw Error(ErrorCode::kOutOfRange, "ILO inputs must lie in [0, 1]");
  }
  if (bridge + reachability == 0.0) return 0.0;
  const double h = 2.0 * (bridge * reachability) / (bridge + reachability);
  return std::clamp(h, std::min(bridge, reachability), std::max(bridge, reachability));
}

IloLayerReport ilo_report_from_profiles(const PooledLayer& pool,
                                        std::span<const NeighborProfile> profiles,
                                        std::uint32_t layer_index, const IloParams& params) {
  const std::size_t num_languages = pool.languages().size();
  params.validate(num_languages);
  if (profiles.size() != pool.size()) {
    throw Error(ErrorCode::kShapeMismatch, "profile count does not match pool size");
  }

  IloLayerReport report;
  report.layer_index = layer_index;
  report.params = params;
  report.per_language.reserve(num_languages);
  double sum = 0.0;
  for (std::uint32_t slot = 0; slot < num_languages; ++slot) {
    const auto [begin, end] = pool.language_range(slot);
    const auto mine = profiles.subspan(begin, end - begin);
    IloLanguageScore s;
    s.language = pool.languages()[slot];
    s.bridge = bridge_score(mine, params.tau);
    s.reachability = reachability_score(mine, num_languages);
    s.ilo = ilo_score(s.bridge, s.reachability);
    sum += s.ilo;
    report.per_language.push_back(std::move(s));
    report.samples_per_language = std::max(report.samples_per_language, end - begin);
  }
  report.aggregate = sum / static_cast<double>(num_languages);
  return report;
}

IloLayerReport layer_ilo_report(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                                const IloParams& params, const AnalysisOptions& options) {
  const std::uint32_t layers[] = {layer_index};
  const IloParams p[] = {params};
  return sweep(corpus, layers, p, options).front();
}

std::vector<IloLayerReport> sweep(const EmbeddingCorpus& corpus,
                                  std::span<const std::uint32_t> layers,
                                  std::span<const IloParams> params,
                                  const AnalysisOptions& options) {
  for (const auto& p : params) p.validate(corpus.languages().size());
  for (auto layer : layers) {
    if (!corpus.has_layer(layer)) {
      throw Error(ErrorCode::kIncompleteGrid,
                  "corpus has no layer " + std::to_string(layer) + " (num_layers " +
                      std::to_string(corpus.num_layers()) + ")",
                  "", layer);
    }
  }
  std::vector<IloLayerReport> out;
  if (params.empty()) return out;
  out.resize(layers.size() * params.size());

  std::map<Metric, std::size_t> max_k;
  for (const auto& p : params) max_k[p.metric] = std::max(max_k[p.metric], p.k);

  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto slice = corpus.layer_slice(layers[li], options.workers);
    for (const auto& [metric, k] : max_k) {
      const PooledLayer pool(slice, metric, options.max_samples);
      const auto widest = all_profiles(pool, k, options.workers);
      for (std::size_t pi = 0; pi < params.size(); ++pi) {
        const auto& p = params[pi];
        if (p.metric != metric) continue;
        auto& slot = out[li * params.size() + pi];
        if (p.k == k) {
          slot = ilo_report_from_profiles(pool, widest, layers[li], p);
        } else {
          const auto narrow = truncate_profiles(pool, widest, p.k);
          slot = ilo_report_from_profiles(pool, narrow, layers[li], p);
        }
      }
    }
  }
  return out;
}

}  // namespace xling
