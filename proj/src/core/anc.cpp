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

#include "anc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "error.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace xling {
namespace {

// One-pass centered co-moments (Welford). Sums of centered products rather
// than raw sums keep cancellation small for activations with large offsets.
struct CoMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2_x = 0.0;
  double m2_y = 0.0;
  double c_xy = 0.0;

  void add(double x, double y, double n) {
    const double dx = x - mean_x;
    mean_x += dx / n;
    const double dy = y - mean_y;
    mean_y += dy / n;
    m2_x += dx * (x - mean_x);
    m2_y += dy * (y - mean_y);
    c_xy += dx * (y - mean_y);
  }

  bool degenerate() const { return m2_x == 0.0 || m2_y == 0.0; }

  double correlation() const {
    if (degenerate()) return 0.0;
    return std::clamp(c_xy / std::sqrt(m2_x * m2_y), -1.0, 1.0);
  }
};

std::size_t count_constant_columns(const EmbeddingLayer& l) {
  std::size_t count = 0;
  for (std::size_t c = 0; c < l.cols(); ++c) {
    const float first = l.row(0)[c];
    bool constant = true;
    for (std::size_t r = 1; r < l.rows() && constant; ++r) constant = l.row(r)[c] == first;
    if (constant) ++count;
  }
  return count;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kShapeMismatch, "pearson over series of length " +
                                               std::to_string(x.size()) + " and " +
                                               std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "pearson needs at least two samples");
  }
  CoMoments m;
  for (std::size_t i = 0; i < x.size(); ++i) m.add(x[i], y[i], static_cast<double>(i + 1));
  return m.correlation();
}

AncPairResult anc_pair_detail(const EmbeddingLayer& a, const EmbeddingLayer& b) {
  if (a.language() == b.language()) {
    throw Error(ErrorCode::kSelfPair, "ANC of '" + a.language().str() + "' with itself",
                a.language().str(), a.layer_index());
  }
  if (a.layer_index() != b.layer_index() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "ANC needs matching layers: " + a.language().str() + " layer " +
                    std::to_string(a.layer_index()) + " is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + ", " + b.language().str() + " layer " +
                    std::to_string(b.layer_index()) + " is " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()),
                b.language().str(), b.layer_index());
  }
  if (a.rows() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "ANC needs at least two aligned samples");
  }

  const std::size_t d = a.cols();
  std::vector<CoMoments> acc(d);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto xa = a.row(r);
    const auto xb = b.row(r);
    const double n = static_cast<double>(r + 1);
    for (std::size_t c = 0; c < d; ++c) acc[c].add(xa[c], xb[c], n);
  }

  AncPairResult out;
  double sum = 0.0;
  for (const auto& m : acc) {
    if (m.degenerate()) ++out.zero_variance_neurons;
    sum += m.correlation();
  }
  out.value = sum / static_cast<double>(d);
  return out;
}

double anc_pair(const EmbeddingLayer& a, const EmbeddingLayer& b) {
  return anc_pair_detail(a, b).value;
}

AncMatrix anc_matrix_from_layers(std::vector<std::shared_ptr<const EmbeddingLayer>> layers,
                                 unsigned workers) {
  if (layers.empty()) throw Error(ErrorCode::kEmptyInput, "ANC matrix over zero languages");
  std::sort(layers.begin(), layers.end(),
            [](const auto& x, const auto& y) { return x->language() < y->language(); });
  const std::size_t n = layers.size();

  AncMatrix m;
  m.layer_index = layers.front()->layer_index();
  m.values.assign(n * n, 0.0);
  m.zero_variance_neurons.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.languages.push_back(layers[i]->language());
    m.values[i * n + i] = 1.0;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  // Constant-column census is one more task per language, after the pairs.
  parallel_for(pairs.size() + n, workers, [&](std::size_t t) {
    if (t < pairs.size()) {
      const auto [i, j] = pairs[t];
      const double v = anc_pair(*layers[i], *layers[j]);
      m.values[i * n + j] = v;
      m.values[j * n + i] = v;
    } else {
      const std::size_t i = t - pairs.size();
      m.zero_variance_neurons[i] = count_constant_columns(*layers[i]);
    }
  });
  return m;
}

AncMatrix layer_anc_matrix(const EmbeddingCorpus& corpus, std::uint32_t layer_index,
                           unsigned workers) {
  return anc_matrix_from_layers(corpus.layer_slice(layer_index, workers), workers);
}

std::string_view to_string(GroupLabel label) noexcept {
  switch (label) {
    case GroupLabel::kHH: return "HH";
    case GroupLabel::kHL: return "HL";
    case GroupLabel::kLL: return "LL";
    case GroupLabel::kWithinRegion: return "within_region";
    case GroupLabel::kCrossRegion: return "cross_region";
    case GroupLabel::kWithinFamily: return "within_family";
    case GroupLabel::kCrossFamily: return "cross_family";
  }
  return "?";
}

GroupSummary group_summary(const AncMatrix& matrix, const LanguageRegistry& registry) {
  for (const auto& l : matrix.languages) registry.at(l);

  std::array<double, kGroupLabelCount> sums{};
  GroupSummary s;
  s.layer_index = matrix.layer_index;
  auto add = [&](GroupLabel label, double v) {
    const auto idx = static_cast<std::size_t>(label);
    sums[idx] += v;
    ++s.groups[idx].pairs;
  };

  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      const double v = matrix.at(i, j);
      const auto g = registry.classify_pair(matrix.languages[i], matrix.languages[j]);
      switch (g.resource_group) {
        case ResourceGroup::kHH: add(GroupLabel::kHH, v); break;
        case ResourceGroup::kHL: add(GroupLabel::kHL, v); break;
        case ResourceGroup::kLL: add(GroupLabel::kLL, v); break;
      }
      add(g.same_region ? GroupLabel::kWithinRegion : GroupLabel::kCrossRegion, v);
      add(g.same_family ? GroupLabel::kWithinFamily : GroupLabel::kCrossFamily, v);
    }
  }
  for (std::size_t i = 0; i < kGroupLabelCount; ++i) {
    if (s.groups[i].pairs > 0) {
      s.groups[i].mean = sums[i] / static_cast<double>(s.groups[i].pairs);
    }
  }
  return s;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "percentile of no values");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kOutOfRange, "percentile outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<LanguageId> unique_languages(std::span<const PairScore> pairs) {
  std::vector<LanguageId> out;
  auto push = [&](const LanguageId& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  for (const auto& p : pairs) {
    push(p.a);
    push(p.b);
  }
  return out;
}

PeakReport peak_layers(std::span<const AncMatrix> matrices) {
  if (matrices.size() < kPeakLayerCount) {
    throw Error(ErrorCode::kInsufficientLayers,
                "peak detection needs at least " + std::to_string(kPeakLayerCount) +
                    " layers, got " + std::to_string(matrices.size()));
  }
  const auto& languages = matrices.front().languages;
  const std::size_t n = languages.size();
  if (n < 2) throw Error(ErrorCode::kEmptyInput, "peak detection needs at least two languages");
  std::map<std::uint32_t, std::size_t> by_layer;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const auto& m = matrices[i];
    if (m.languages != languages || m.values.size() != n * n) {
      throw Error(ErrorCode::kShapeMismatch, "ANC matrices cover different language sets",
                  "", m.layer_index);
    }
    if (!by_layer.emplace(m.layer_index, i).second) {
      throw Error(ErrorCode::kDuplicateLayer,
                  "layer " + std::to_string(m.layer_index) + " appears twice", "", m.layer_index);
    }
  }

  std::vector<std::pair<double, std::uint32_t>> ranked;  // (percentile, layer)
  for (const auto& m : matrices) {
    std::vector<double> off;
    off.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off.push_back(m.at(i, j));
    }
    ranked.emplace_back(percentile(std::move(off), kPeakPercentile), m.layer_index);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });

  PeakReport r;
  for (std::size_t i = 0; i < kPeakLayerCount; ++i) {
    r.peak_layers.push_back(ranked[i].second);
    r.peak_percentiles.push_back(ranked[i].first);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (auto layer : r.peak_layers) sum += matrices[by_layer.at(layer)].at(i, j);
      r.per_pair_aggregate.push_back(
          PairScore{languages[i], languages[j], sum / static_cast<double>(kPeakLayerCount)});
    }
  }

  r.ranked_pairs = r.per_pair_aggregate;
  std::stable_sort(r.ranked_pairs.begin(), r.ranked_pairs.end(),
                   [](const PairScore& x, const PairScore& y) {
                     if (x.aggregate != y.aggregate) return x.aggregate > y.aggregate;
                     if (x.a != y.a) return x.a < y.a;
                     return x.b < y.b;
                   });
  const std::size_t top = std::min(kTopPairCount, r.ranked_pairs.size());
  r.top_pairs.assign(r.ranked_pairs.begin(), r.ranked_pairs.begin() + static_cast<std::ptrdiff_t>(top));
  r.unique_languages = unique_languages(r.top_pairs);
  return r;
}

std::string top_pairs_table(const PeakReport& report, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "top-pair table needs n >= 1");
  const std::size_t rows = std::min(n, report.ranked_pairs.size());
  const auto shown = std::span(report.ranked_pairs).first(rows);

  std::string out = "# peak_layers\t";
  for (std::size_t i = 0; i < report.peak_layers.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(report.peak_layers[i]);
  }
  out += "\n# peak_percentiles\t";
  for (std::size_t i = 0; i < report.peak_percentiles.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(report.peak_percentiles[i]);
  }
  out += "\nrank\tlanguage_a\tlanguage_b\taggregate\n";
  for (std::size_t i = 0; i < shown.size(); ++i) {
    out += std::to_string(i + 1) + '\t' + shown[i].a.str() + '\t' + shown[i].b.str() + '\t' +
           format_double(shown[i].aggregate) + '\n';
  }
  out += "# unique_languages\t";
  const auto langs = unique_languages(shown);
  for (std::size_t i = 0; i < langs.size(); ++i) {
    if (i > 0) out += ',';
    out += langs[i].str();
  }
  out += '\n';
  return out;
}

}  // namespace xling
