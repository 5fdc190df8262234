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

#include "report.hpp"

#include <algorithm>
#include <map>

#include "checksum.hpp"
#include "error.hpp"
#include "text.hpp"
#include "version.hpp"

namespace xling {

ReportHeader ReportHeader::for_corpus(const EmbeddingCorpus& corpus,
                                      std::optional<std::size_t> max_samples) {
  ReportHeader h;
  h.engine = std::string(kEngineName);
  h.model_name = corpus.manifest().model_name;
  h.manifest_checksum = checksum_to_hex(corpus.manifest_checksum());
  h.num_layers = corpus.num_layers();
  h.num_samples = corpus.num_samples();
  h.pooling = corpus.manifest().pooling;
  h.max_samples = max_samples;
  return h;
}

std::string comment_block(const ReportHeader& header,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += "# " + key + ": " + value + "\n";
  };
  line("engine", header.engine);
  line("model_name", header.model_name);
  line("manifest_checksum", header.manifest_checksum);
  line("num_layers", std::to_string(header.num_layers));
  line("num_samples", std::to_string(header.num_samples));
  line("pooling", header.pooling);
  line("max_samples", header.max_samples ? std::to_string(*header.max_samples) : "all");
  for (const auto& [k, v] : extra) line(k, v);
  return out;
}

CurveSeries assemble_curve(std::span<const IloLayerReport> reports, std::string label) {
  CurveSeries curve;
  curve.label = std::move(label);
  if (reports.empty()) return curve;
  const auto& params = reports.front().params;
  for (const auto& r : reports) {
    if (!(r.params == params)) {
      throw Error(ErrorCode::kParamMismatch,
                  "reports mix params (k=" + std::to_string(params.k) + ", tau=" +
                      std::to_string(params.tau) + ", " + std::string(to_string(params.metric)) +
                      ") and (k=" + std::to_string(r.params.k) + ", tau=" +
                      std::to_string(r.params.tau) + ", " +
                      std::string(to_string(r.params.metric)) + ")",
                  "", r.layer_index);
    }
    curve.points.push_back(CurvePoint{r.layer_index, r.aggregate});
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const auto& a, const auto& b) { return a.layer < b.layer; });
  auto dup = std::adjacent_find(curve.points.begin(), curve.points.end(),
                                [](const auto& a, const auto& b) { return a.layer == b.layer; });
  if (dup != curve.points.end()) {
    throw Error(ErrorCode::kDuplicateLayer, "layer " + std::to_string(dup->layer) + " reported twice",
                "", dup->layer);
  }
  return curve;
}

DeltaReport compare(const IloRun& baseline, const IloRun& candidate, double threshold) {
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "disruption threshold must be non-negative");
  }
  const auto base_curve = assemble_curve(baseline.reports, baseline.label);
  const auto cand_curve = assemble_curve(candidate.reports, candidate.label);
  if (!baseline.reports.empty() && !candidate.reports.empty() &&
      !(baseline.reports.front().params == candidate.reports.front().params)) {
    throw Error(ErrorCode::kParamMismatch, "baseline and candidate use different ILO params");
  }

  std::map<std::uint32_t, const IloLayerReport*> cand_by_layer;
  for (const auto& r : candidate.reports) cand_by_layer.emplace(r.layer_index, &r);
  std::map<std::uint32_t, const IloLayerReport*> base_by_layer;
  for (const auto& r : baseline.reports) base_by_layer.emplace(r.layer_index, &r);

  DeltaReport out;
  out.baseline_label = baseline.label;
  out.candidate_label = candidate.label;
  out.threshold = threshold;
  for (const auto& [layer, base] : base_by_layer) {
    auto it = cand_by_layer.find(layer);
    if (it == cand_by_layer.end()) continue;
    const auto* cand = it->second;
    out.params = base->params;

    LayerDelta ld;
    ld.layer = layer;
    ld.baseline = base->aggregate;
    ld.candidate = cand->aggregate;
    ld.delta = cand->aggregate - base->aggregate;
    std::map<LanguageId, double> cand_lang;
    for (const auto& s : cand->per_language) cand_lang.emplace(s.language, s.ilo);
    for (const auto& s : base->per_language) {
      auto cl = cand_lang.find(s.language);
      if (cl == cand_lang.end()) continue;
      ld.per_language.push_back(LanguageDelta{s.language, s.ilo, cl->second, cl->second - s.ilo});
    }
    out.layers.push_back(std::move(ld));
  }
  if (out.layers.empty()) {
    throw Error(ErrorCode::kNoOverlap, "baseline '" + baseline.label + "' and candidate '" +
                                           candidate.label + "' share no layers");
  }

  for (const auto& ld : out.layers) {
    if (std::abs(ld.delta) > threshold) {
      out.first_exceeding_layer = ld.layer;
      break;
    }
  }
  const std::uint64_t span = static_cast<std::uint64_t>(out.layers.back().layer) + 1;
  out.early_window_end = static_cast<std::uint32_t>((span + 2) / 3);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& ld : out.layers) {
    if (3 * static_cast<std::uint64_t>(ld.layer) < span) {
      sum += ld.delta;
      ++count;
    }
  }
  if (count > 0) out.early_mean_delta = sum / static_cast<double>(count);
  return out;
}

void export_projection_data(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                            std::optional<std::size_t> max_samples, std::ostream& out) {
  if (max_samples && *max_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_samples must be at least 1");
  }
  const auto slice = corpus.layer_slice(layer_index);
  const std::size_t rows = std::min(max_samples.value_or(corpus.num_samples()), corpus.num_samples());
  const std::size_t d = corpus.dim();

  out << comment_block(ReportHeader::for_corpus(corpus, max_samples),
                       {{"layer", std::to_string(layer_index)}});
  out << "language,sample_index";
  for (std::size_t c = 0; c < d; ++c) out << ",v" << c;
  out << '\n';
  for (const auto& l : slice) {
    for (std::size_t r = 0; r < rows; ++r) {
      out << l->language().str() << ',' << r;
      for (float v : l->row(r)) out << ',' << format_float(v);
      out << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing projection data");
}

}  // namespace xling
