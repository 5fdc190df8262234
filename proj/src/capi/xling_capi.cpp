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

#include "xling/xling.h"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/anc.hpp"
#include "core/checksum.hpp"
#include "core/dumpio.hpp"
#include "core/error.hpp"
#include "core/overlap.hpp"
#include "core/registry.hpp"
#include "core/report.hpp"
#include "core/reports_io.hpp"
#include "core/synth.hpp"
#include "core/version.hpp"

struct xling_registry {
  xling::LanguageRegistry registry;
};

struct xling_layer {
  xling::EmbeddingLayer layer;
  std::uint64_t checksum = 0;
};

struct xling_corpus {
  xling::EmbeddingCorpus corpus;
  std::string checksum_hex;
};

struct xling_ilo_run {
  xling::IloRun run;
};

struct xling_anc_run {
  std::vector<xling::AncMatrix> matrices;
  xling::ReportHeader header;
};

struct xling_peaks {
  xling::PeakReport report;
  xling::ReportHeader header;
};

struct xling_delta {
  xling::DeltaReport delta;
  xling::ReportHeader baseline_header;
  xling::ReportHeader candidate_header;
};

namespace {

struct LastError {
  std::string message;
  std::string json;
};

thread_local LastError g_last_error;

xling_status record(xling::ErrorCode code, const std::string& message, const std::string& language,
                    std::optional<std::uint32_t> layer, std::optional<std::uint64_t> index) {
  nlohmann::ordered_json j;
  j["error"] = std::string(xling::error_name(code));
  j["message"] = message;
  if (!language.empty()) j["language"] = language;
  if (layer) j["layer"] = *layer;
  if (index) j["index"] = *index;
  g_last_error.message = message;
  g_last_error.json = j.dump();
  return static_cast<xling_status>(code);
}

template <typename F>
xling_status guarded(F&& body) noexcept {
  try {
    body();
    return XLING_OK;
  } catch (const xling::Error& e) {
    return record(e.code(), e.what(), e.language(), e.layer(), e.index());
  } catch (const std::bad_alloc&) {
    return record(xling::ErrorCode::kInternal, "out of memory", "", std::nullopt, std::nullopt);
  } catch (const std::exception& e) {
    return record(xling::ErrorCode::kInternal, e.what(), "", std::nullopt, std::nullopt);
  } catch (...) {
    return record(xling::ErrorCode::kInternal, "unknown failure", "", std::nullopt, std::nullopt);
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw xling::Error(xling::ErrorCode::kInvalidArgument, what);
}

xling::Metric to_metric(xling_metric m) {
  switch (m) {
    case XLING_METRIC_EUCLIDEAN: return xling::Metric::kEuclidean;
    case XLING_METRIC_COSINE: return xling::Metric::kCosine;
  }
  throw xling::Error(xling::ErrorCode::kInvalidArgument, "unknown metric");
}

xling_metric from_metric(xling::Metric m) {
  return m == xling::Metric::kEuclidean ? XLING_METRIC_EUCLIDEAN : XLING_METRIC_COSINE;
}

xling_ilo_params to_c(const xling::IloParams& p) {
  return xling_ilo_params{static_cast<uint32_t>(p.k), static_cast<uint32_t>(p.tau),
                          from_metric(p.metric)};
}

const xling::IloLayerReport& report_at(const xling_ilo_run* run, size_t index) {
  require(run != nullptr, "run handle is NULL");
  if (index >= run->run.reports.size()) {
    throw xling::Error(xling::ErrorCode::kOutOfRange, "report index out of range");
  }
  return run->run.reports[index];
}

}  // namespace

extern "C" {

const char* xling_version(void) { return xling::kVersion.data(); }

const char* xling_status_name(xling_status status) {
  return xling::error_name(static_cast<xling::ErrorCode>(status)).data();
}

int xling_status_exit_code(xling_status status) {
  if (status == XLING_OK) return 0;
  switch (xling::error_category(static_cast<xling::ErrorCode>(status))) {
    case xling::ErrorCategory::kUsage: return 1;
    case xling::ErrorCategory::kData: return 2;
    case xling::ErrorCategory::kInternal: return 3;
  }
  return 3;
}

const char* xling_last_error_message(void) { return g_last_error.message.c_str(); }
const char* xling_last_error_json(void) { return g_last_error.json.c_str(); }

// ---- registry

xling_status xling_registry_load(const char* source, xling_registry** out) {
  return guarded([&] {
    require(source != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new xling_registry{xling::LanguageRegistry::load(source)};
  });
}

void xling_registry_free(xling_registry* registry) { delete registry; }

size_t xling_registry_size(const xling_registry* registry) {
  return registry ? registry->registry.size() : 0;
}

const char* xling_registry_code(const xling_registry* registry, size_t index) {
  if (!registry || index >= registry->registry.size()) return nullptr;
  return registry->registry.entries()[index].id.str().c_str();
}

xling_status xling_registry_classify(const xling_registry* registry, const char* a, const char* b,
                                     xling_pair_group* out) {
  return guarded([&] {
    require(registry && a && b && out, "NULL argument");
    const auto g = registry->registry.classify_pair(xling::LanguageId(a), xling::LanguageId(b));
    out->resource_group = static_cast<xling_resource_group>(g.resource_group);
    out->same_region = g.same_region ? 1 : 0;
    out->same_family = g.same_family ? 1 : 0;
  });
}

// ---- dumps

xling_status xling_dump_write(const char* path, const char* language, uint32_t layer_index,
                              const float* values, uint64_t rows, uint64_t cols,
                              uint64_t* checksum) {
  return guarded([&] {
    require(path && language && (values || rows * cols == 0), "NULL argument");
    xling::EmbeddingLayer layer(xling::LanguageId(language), layer_index, rows, cols,
                                std::vector<float>(values, values + rows * cols));
    const auto c = xling::write_layer_dump(layer, path);
    if (checksum) *checksum = c;
  });
}

xling_status xling_dump_read(const char* path, xling_layer** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = nullptr;
    auto handle = std::make_unique<xling_layer>();
    handle->layer = xling::read_layer_dump(path, &handle->checksum);
    *out = handle.release();
  });
}

void xling_layer_free(xling_layer* layer) { delete layer; }
const char* xling_layer_language(const xling_layer* l) { return l->layer.language().str().c_str(); }
uint32_t xling_layer_index(const xling_layer* l) { return l->layer.layer_index(); }
uint64_t xling_layer_rows(const xling_layer* l) { return l->layer.rows(); }
uint64_t xling_layer_cols(const xling_layer* l) { return l->layer.cols(); }
const float* xling_layer_data(const xling_layer* l) { return l->layer.values().data(); }
uint64_t xling_layer_checksum(const xling_layer* l) { return l->checksum; }

// ---- corpora

xling_status xling_corpus_open(const char* manifest_path, unsigned workers, xling_corpus** out) {
  return guarded([&] {
    require(manifest_path && out, "NULL argument");
    *out = nullptr;
    auto corpus = xling::EmbeddingCorpus::load(manifest_path, workers);
    auto hex = xling::checksum_to_hex(corpus.manifest_checksum());
    *out = new xling_corpus{std::move(corpus), std::move(hex)};
  });
}

xling_status xling_synth_generate(const char* config_json, unsigned workers, xling_corpus** out) {
  return guarded([&] {
    require(config_json && out, "NULL argument");
    *out = nullptr;
    const auto cfg = xling::WorldConfig::from_json(config_json);
    auto corpus = xling::generate_world(cfg, workers);
    auto hex = xling::checksum_to_hex(corpus.manifest_checksum());
    *out = new xling_corpus{std::move(corpus), std::move(hex)};
  });
}

const char* xling_synth_demo_config(void) {
  static const std::string kDemo = xling::WorldConfig::demo().to_json();
  return kDemo.c_str();
}

xling_status xling_corpus_write(const xling_corpus* corpus, const char* dir, unsigned workers) {
  return guarded([&] {
    require(corpus && dir, "NULL argument");
    xling::write_corpus(dir, corpus->corpus, workers);
  });
}

void xling_corpus_free(xling_corpus* corpus) { delete corpus; }
size_t xling_corpus_num_languages(const xling_corpus* c) { return c->corpus.languages().size(); }

const char* xling_corpus_language(const xling_corpus* c, size_t index) {
  if (!c || index >= c->corpus.languages().size()) return nullptr;
  return c->corpus.languages()[index].str().c_str();
}

uint32_t xling_corpus_num_layers(const xling_corpus* c) { return c->corpus.num_layers(); }
uint64_t xling_corpus_num_samples(const xling_corpus* c) { return c->corpus.num_samples(); }
uint64_t xling_corpus_dim(const xling_corpus* c) { return c->corpus.dim(); }
const char* xling_corpus_model_name(const xling_corpus* c) {
  return c->corpus.manifest().model_name.c_str();
}
const char* xling_corpus_pooling(const xling_corpus* c) {
  return c->corpus.manifest().pooling.c_str();
}
const char* xling_corpus_manifest_checksum(const xling_corpus* c) { return c->checksum_hex.c_str(); }

// ---- ILO

xling_status xling_ilo_score(double bridge, double reachability, double* out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = xling::ilo_score(bridge, reachability);
  });
}

xling_status xling_ilo_compute(const xling_corpus* corpus, const uint32_t* layers,
                               size_t num_layers, const xling_ilo_params* params,
                               size_t num_params, uint64_t max_samples, unsigned workers,
                               const char* label, xling_ilo_run** out) {
  return guarded([&] {
    require(corpus && out && (layers || num_layers == 0) && (params || num_params == 0),
            "NULL argument");
    *out = nullptr;
    std::vector<xling::IloParams> p;
    for (size_t i = 0; i < num_params; ++i) {
      p.push_back(xling::IloParams{params[i].k, params[i].tau, to_metric(params[i].metric)});
    }
    xling::AnalysisOptions opts;
    opts.workers = workers;
    if (max_samples > 0) opts.max_samples = max_samples;

    auto handle = std::make_unique<xling_ilo_run>();
    handle->run.label = label ? label : "";
    handle->run.header = xling::ReportHeader::for_corpus(corpus->corpus, opts.max_samples);
    handle->run.reports =
        xling::sweep(corpus->corpus, std::span(layers, num_layers), p, opts);
    *out = handle.release();
  });
}

xling_status xling_ilo_run_read(const char* path, xling_ilo_run** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = nullptr;
    *out = new xling_ilo_run{xling::read_ilo_run(path)};
  });
}

void xling_ilo_run_free(xling_ilo_run* run) { delete run; }
const char* xling_ilo_run_label(const xling_ilo_run* run) { return run->run.label.c_str(); }
size_t xling_ilo_run_count(const xling_ilo_run* run) { return run ? run->run.reports.size() : 0; }

xling_status xling_ilo_run_report(const xling_ilo_run* run, size_t index, uint32_t* layer,
                                  xling_ilo_params* params, double* aggregate) {
  return guarded([&] {
    const auto& r = report_at(run, index);
    if (layer) *layer = r.layer_index;
    if (params) *params = to_c(r.params);
    if (aggregate) *aggregate = r.aggregate;
  });
}

size_t xling_ilo_run_num_languages(const xling_ilo_run* run, size_t index) {
  if (!run || index >= run->run.reports.size()) return 0;
  return run->run.reports[index].per_language.size();
}

xling_status xling_ilo_run_language(const xling_ilo_run* run, size_t index, size_t language_index,
                                    const char** language, double* bridge, double* reachability,
                                    double* ilo) {
  return guarded([&] {
    const auto& r = report_at(run, index);
    if (language_index >= r.per_language.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "language index out of range");
    }
    const auto& s = r.per_language[language_index];
    if (language) *language = s.language.str().c_str();
    if (bridge) *bridge = s.bridge;
    if (reachability) *reachability = s.reachability;
    if (ilo) *ilo = s.ilo;
  });
}

xling_status xling_ilo_run_write_json(const xling_ilo_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    xling::write_text_file(path, xling::ilo_run_json(run->run));
  });
}

xling_status xling_ilo_run_write_layer_json(const xling_ilo_run* run, size_t index,
                                            const char* path) {
  return guarded([&] {
    require(path != nullptr, "NULL argument");
    xling::write_text_file(path, xling::ilo_layer_report_json(report_at(run, index), run->run.header));
  });
}

xling_status xling_ilo_run_write_csv(const xling_ilo_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    xling::write_text_file(path, xling::ilo_reports_csv(run->run.reports, run->run.header));
  });
}

xling_status xling_ilo_run_write_aggregates_csv(const xling_ilo_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    xling::write_text_file(path, xling::ilo_aggregates_csv(run->run.reports, run->run.header));
  });
}

xling_status xling_ilo_run_write_curve_csv(const xling_ilo_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    const auto curve = xling::assemble_curve(run->run.reports, run->run.label);
    const auto params = run->run.reports.empty() ? xling::IloParams{} : run->run.reports.front().params;
    xling::write_text_file(path, xling::curve_csv(curve, params, run->run.header));
  });
}

// ---- ANC

xling_status xling_anc_compute(const xling_corpus* corpus, const uint32_t* layers,
                               size_t num_layers, unsigned workers, xling_anc_run** out) {
  return guarded([&] {
    require(corpus && out && (layers || num_layers == 0), "NULL argument");
    *out = nullptr;
    std::vector<uint32_t> selected(layers, layers + num_layers);
    if (selected.empty()) {
      for (uint32_t l = 0; l < corpus->corpus.num_layers(); ++l) selected.push_back(l);
    }
    auto handle = std::make_unique<xling_anc_run>();
    handle->header = xling::ReportHeader::for_corpus(corpus->corpus);
    for (auto l : selected) {
      handle->matrices.push_back(xling::layer_anc_matrix(corpus->corpus, l, workers));
    }
    *out = handle.release();
  });
}

void xling_anc_run_free(xling_anc_run* run) { delete run; }
size_t xling_anc_run_count(const xling_anc_run* run) { return run ? run->matrices.size() : 0; }
uint32_t xling_anc_run_layer(const xling_anc_run* run, size_t index) {
  return run->matrices.at(index).layer_index;
}

xling_status xling_anc_run_value(const xling_anc_run* run, size_t index, size_t a, size_t b,
                                 double* out) {
  return guarded([&] {
    require(run && out, "NULL argument");
    if (index >= run->matrices.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "matrix index out of range");
    }
    const auto& m = run->matrices[index];
    if (a >= m.size() || b >= m.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "language index out of range");
    }
    *out = m.at(a, b);
  });
}

xling_status xling_anc_run_write_matrix_csv(const xling_anc_run* run, size_t index,
                                            const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    if (index >= run->matrices.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "matrix index out of range");
    }
    xling::write_text_file(path, xling::anc_matrix_csv(run->matrices[index], run->header));
  });
}

xling_status xling_anc_run_write_groups_csv(const xling_anc_run* run,
                                            const xling_registry* registry, const char* path) {
  return guarded([&] {
    require(run && registry && path, "NULL argument");
    std::vector<xling::GroupSummary> summaries;
    for (const auto& m : run->matrices) {
      summaries.push_back(xling::group_summary(m, registry->registry));
    }
    xling::write_text_file(path, xling::group_summary_csv(summaries, run->header));
  });
}

xling_status xling_anc_peaks(const xling_anc_run* run, xling_peaks** out) {
  return guarded([&] {
    require(run && out, "NULL argument");
    *out = nullptr;
    *out = new xling_peaks{xling::peak_layers(run->matrices), run->header};
  });
}

void xling_peaks_free(xling_peaks* peaks) { delete peaks; }
uint32_t xling_peaks_layer(const xling_peaks* p, size_t index) {
  return p->report.peak_layers.at(index);
}
size_t xling_peaks_num_top_pairs(const xling_peaks* p) { return p->report.top_pairs.size(); }

xling_status xling_peaks_top_pair(const xling_peaks* p, size_t rank, const char** a,
                                  const char** b, double* aggregate) {
  return guarded([&] {
    require(p != nullptr, "NULL argument");
    if (rank >= p->report.top_pairs.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "rank out of range");
    }
    const auto& s = p->report.top_pairs[rank];
    if (a) *a = s.a.str().c_str();
    if (b) *b = s.b.str().c_str();
    if (aggregate) *aggregate = s.aggregate;
  });
}

xling_status xling_peaks_write_tsv(const xling_peaks* p, size_t n, const char* path) {
  return guarded([&] {
    require(p && path, "NULL argument");
    xling::write_text_file(path, xling::peak_report_tsv(p->report, n, p->header));
  });
}

// ---- compare / export

xling_status xling_compare(const xling_ilo_run* baseline, const xling_ilo_run* candidate,
                           double threshold, xling_delta** out) {
  return guarded([&] {
    require(baseline && candidate && out, "NULL argument");
    *out = nullptr;
    *out = new xling_delta{xling::compare(baseline->run, candidate->run, threshold),
                           baseline->run.header, candidate->run.header};
  });
}

void xling_delta_free(xling_delta* delta) { delete delta; }
size_t xling_delta_num_layers(const xling_delta* d) { return d ? d->delta.layers.size() : 0; }

xling_status xling_delta_layer(const xling_delta* d, size_t index, uint32_t* layer, double* value) {
  return guarded([&] {
    require(d != nullptr, "NULL argument");
    if (index >= d->delta.layers.size()) {
      throw xling::Error(xling::ErrorCode::kOutOfRange, "layer index out of range");
    }
    if (layer) *layer = d->delta.layers[index].layer;
    if (value) *value = d->delta.layers[index].delta;
  });
}

int xling_delta_first_exceeding(const xling_delta* d, uint32_t* layer) {
  if (!d || !d->delta.first_exceeding_layer) return 0;
  if (layer) *layer = *d->delta.first_exceeding_layer;
  return 1;
}

xling_status xling_delta_write_json(const xling_delta* d, const char* path) {
  return guarded([&] {
    require(d && path, "NULL argument");
    xling::write_text_file(path, xling::delta_json(d->delta, d->baseline_header, d->candidate_header));
  });
}

xling_status xling_delta_write_csv(const xling_delta* d, const char* path) {
  return guarded([&] {
    require(d && path, "NULL argument");
    xling::write_text_file(path, xling::delta_csv(d->delta, d->baseline_header, d->candidate_header));
  });
}

xling_status xling_export_projection(const xling_corpus* corpus, uint32_t layer_index,
                                     uint64_t max_samples, const char* path) {
  return guarded([&] {
    require(corpus && path, "NULL argument");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw xling::Error(xling::ErrorCode::kIoError,
                         std::string("cannot open '") + path + "' for writing");
    }
    std::optional<std::size_t> limit;
    if (max_samples > 0) limit = max_samples;
    xling::export_projection_data(corpus->corpus, layer_index, limit, out);
  });
}

}  // extern "C"
