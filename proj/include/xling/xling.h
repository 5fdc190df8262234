/*
 * Copyright 2026 The xling Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * xling: interlingual alignment analysis of multilingual hidden states.
 *
 * Every fallible call returns an xling_status. On failure the calling
 * thread's last-error slot holds a message and a JSON description
 * ({"error": name, "message": ..., "language": ..., "layer": ...}) until the
 * next failing call on that thread. Handles are opaque; each *_free accepts
 * NULL. Strings returned by accessors are owned by the handle and stay valid
 * until it is freed. Handles are immutable after creation and may be read
 * from several threads at once.
 */

#ifndef XLING_XLING_H
#define XLING_XLING_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(XLING_BUILDING_LIBRARY)
#    define XLING_API __declspec(dllexport)
#  else
#    define XLING_API __declspec(dllimport)
#  endif
#else
#  define XLING_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xling_status {
  XLING_OK = 0,

  XLING_E_DUPLICATE_LANGUAGE = 10,
  XLING_E_INVALID_METADATA = 11,
  XLING_E_PARSE_ERROR = 12,
  XLING_E_SELF_PAIR = 13,
  XLING_E_UNKNOWN_LANGUAGE = 14,

  XLING_E_NON_FINITE_INPUT = 20,
  XLING_E_IO_ERROR = 21,
  XLING_E_BAD_MAGIC = 22,
  XLING_E_UNSUPPORTED_VERSION = 23,
  XLING_E_CORRUPT_DUMP = 24,
  XLING_E_TRUNCATED_DUMP = 25,
  XLING_E_MISSING_DUMP = 26,
  XLING_E_SHAPE_MISMATCH = 27,
  XLING_E_INCOMPLETE_GRID = 28,
  XLING_E_INVALID_MANIFEST = 29,

  XLING_E_ZERO_VECTOR = 30,
  XLING_E_INVALID_K = 31,
  XLING_E_EMPTY_INPUT = 32,
  XLING_E_OUT_OF_RANGE = 33,
  XLING_E_INVALID_PARAMS = 34,

  XLING_E_INSUFFICIENT_SAMPLES = 40,
  XLING_E_INSUFFICIENT_LAYERS = 41,

  XLING_E_INVALID_CONFIG = 50,

  XLING_E_PARAM_MISMATCH = 60,
  XLING_E_DUPLICATE_LAYER = 61,
  XLING_E_NO_OVERLAP = 62,
  XLING_E_INVALID_REPORT = 63,

  XLING_E_INVALID_ARGUMENT = 90,
  XLING_E_INTERNAL = 99
} xling_status;

typedef enum xling_metric {
  XLING_METRIC_EUCLIDEAN = 0,
  XLING_METRIC_COSINE = 1
} xling_metric;

typedef enum xling_resource_group {
  XLING_GROUP_HH = 0,
  XLING_GROUP_HL = 1,
  XLING_GROUP_LL = 2
} xling_resource_group;

typedef struct xling_ilo_params {
  uint32_t k;
  uint32_t tau;
  xling_metric metric;
} xling_ilo_params;

typedef struct xling_pair_group {
  xling_resource_group resource_group;
  int same_region;
  int same_family;
} xling_pair_group;

typedef struct xling_registry xling_registry;
typedef struct xling_layer xling_layer;
typedef struct xling_corpus xling_corpus;
typedef struct xling_ilo_run xling_ilo_run;
typedef struct xling_anc_run xling_anc_run;
typedef struct xling_peaks xling_peaks;
typedef struct xling_delta xling_delta;

/* ---- diagnostics ------------------------------------------------------ */

XLING_API const char* xling_version(void);
XLING_API const char* xling_status_name(xling_status status);
/* Process exit code for a status: 0 ok, 1 usage, 2 data, 3 internal. */
XLING_API int xling_status_exit_code(xling_status status);
XLING_API const char* xling_last_error_message(void);
XLING_API const char* xling_last_error_json(void);

/* ---- language registry ------------------------------------------------ */

/* source: "builtin" or a TSV path with header
 * code<TAB>name<TAB>script<TAB>region<TAB>family<TAB>resource. */
XLING_API xling_status xling_registry_load(const char* source, xling_registry** out);
XLING_API void xling_registry_free(xling_registry* registry);
XLING_API size_t xling_registry_size(const xling_registry* registry);
XLING_API const char* xling_registry_code(const xling_registry* registry, size_t index);
XLING_API xling_status xling_registry_classify(const xling_registry* registry, const char* a,
                                               const char* b, xling_pair_group* out);

/* ---- layer dumps ------------------------------------------------------ */

XLING_API xling_status xling_dump_write(const char* path, const char* language,
                                        uint32_t layer_index, const float* values,
                                        uint64_t rows, uint64_t cols, uint64_t* checksum);
XLING_API xling_status xling_dump_read(const char* path, xling_layer** out);
XLING_API void xling_layer_free(xling_layer* layer);
XLING_API const char* xling_layer_language(const xling_layer* layer);
XLING_API uint32_t xling_layer_index(const xling_layer* layer);
XLING_API uint64_t xling_layer_rows(const xling_layer* layer);
XLING_API uint64_t xling_layer_cols(const xling_layer* layer);
/* rows * cols floats, row-major. */
XLING_API const float* xling_layer_data(const xling_layer* layer);
XLING_API uint64_t xling_layer_checksum(const xling_layer* layer);

/* ---- corpora ---------------------------------------------------------- */

XLING_API xling_status xling_corpus_open(const char* manifest_path, unsigned workers,
                                         xling_corpus** out);
/* In-memory synthetic world from a JSON world config. */
XLING_API xling_status xling_synth_generate(const char* config_json, unsigned workers,
                                            xling_corpus** out);
/* JSON of the bundled demonstration world config. */
XLING_API const char* xling_synth_demo_config(void);
/* Writes dumps plus manifest.json into dir. */
XLING_API xling_status xling_corpus_write(const xling_corpus* corpus, const char* dir,
                                          unsigned workers);
XLING_API void xling_corpus_free(xling_corpus* corpus);
XLING_API size_t xling_corpus_num_languages(const xling_corpus* corpus);
/* Canonical (sorted) order. */
XLING_API const char* xling_corpus_language(const xling_corpus* corpus, size_t index);
XLING_API uint32_t xling_corpus_num_layers(const xling_corpus* corpus);
XLING_API uint64_t xling_corpus_num_samples(const xling_corpus* corpus);
XLING_API uint64_t xling_corpus_dim(const xling_corpus* corpus);
XLING_API const char* xling_corpus_model_name(const xling_corpus* corpus);
XLING_API const char* xling_corpus_pooling(const xling_corpus* corpus);
XLING_API const char* xling_corpus_manifest_checksum(const xling_corpus* corpus);

/* ---- interlingual local overlap --------------------------------------- */

XLING_API xling_status xling_ilo_score(double bridge, double reachability, double* out);

/* One report per (layer, params), layers outer. max_samples 0 keeps all
 * samples. label names the run for later comparison. */
XLING_API xling_status xling_ilo_compute(const xling_corpus* corpus, const uint32_t* layers,
                                         size_t num_layers, const xling_ilo_params* params,
                                         size_t num_params, uint64_t max_samples,
                                         unsigned workers, const char* label,
                                         xling_ilo_run** out);
XLING_API xling_status xling_ilo_run_read(const char* path, xling_ilo_run** out);
XLING_API void xling_ilo_run_free(xling_ilo_run* run);
XLING_API const char* xling_ilo_run_label(const xling_ilo_run* run);
XLING_API size_t xling_ilo_run_count(const xling_ilo_run* run);
XLING_API xling_status xling_ilo_run_report(const xling_ilo_run* run, size_t index,
                                            uint32_t* layer, xling_ilo_params* params,
                                            double* aggregate);
XLING_API size_t xling_ilo_run_num_languages(const xling_ilo_run* run, size_t index);
XLING_API xling_status xling_ilo_run_language(const xling_ilo_run* run, size_t index,
                                              size_t language_index, const char** language,
                                              double* bridge, double* reachability,
                                              double* ilo);
XLING_API xling_status xling_ilo_run_write_json(const xling_ilo_run* run, const char* path);
XLING_API xling_status xling_ilo_run_write_layer_json(const xling_ilo_run* run, size_t index,
                                                      const char* path);
XLING_API xling_status xling_ilo_run_write_csv(const xling_ilo_run* run, const char* path);
XLING_API xling_status xling_ilo_run_write_aggregates_csv(const xling_ilo_run* run,
                                                          const char* path);
/* Requires a single params setting across the run. */
XLING_API xling_status xling_ilo_run_write_curve_csv(const xling_ilo_run* run, const char* path);

/* ---- average neuron-wise correlation ---------------------------------- */

/* num_layers 0 selects every layer. */
XLING_API xling_status xling_anc_compute(const xling_corpus* corpus, const uint32_t* layers,
                                         size_t num_layers, unsigned workers,
                                         xling_anc_run** out);
XLING_API void xling_anc_run_free(xling_anc_run* run);
XLING_API size_t xling_anc_run_count(const xling_anc_run* run);
XLING_API uint32_t xling_anc_run_layer(const xling_anc_run* run, size_t index);
XLING_API xling_status xling_anc_run_value(const xling_anc_run* run, size_t index, size_t a,
                                           size_t b, double* out);
XLING_API xling_status xling_anc_run_write_matrix_csv(const xling_anc_run* run, size_t index,
                                                      const char* path);
XLING_API xling_status xling_anc_run_write_groups_csv(const xling_anc_run* run,
                                                      const xling_registry* registry,
                                                      const char* path);
XLING_API xling_status xling_anc_peaks(const xling_anc_run* run, xling_peaks** out);
XLING_API void xling_peaks_free(xling_peaks* peaks);
/* index in [0, 3). */
XLING_API uint32_t xling_peaks_layer(const xling_peaks* peaks, size_t index);
XLING_API size_t xling_peaks_num_top_pairs(const xling_peaks* peaks);
XLING_API xling_status xling_peaks_top_pair(const xling_peaks* peaks, size_t rank,
                                            const char** a, const char** b, double* aggregate);
XLING_API xling_status xling_peaks_write_tsv(const xling_peaks* peaks, size_t n,
                                             const char* path);

/* ---- run comparison and export ---------------------------------------- */

XLING_API xling_status xling_compare(const xling_ilo_run* baseline,
                                     const xling_ilo_run* candidate, double threshold,
                                     xling_delta** out);
XLING_API void xling_delta_free(xling_delta* delta);
XLING_API size_t xling_delta_num_layers(const xling_delta* delta);
XLING_API xling_status xling_delta_layer(const xling_delta* delta, size_t index,
                                         uint32_t* layer, double* value);
/* Returns 1 and sets *layer when some layer's |delta| exceeds the threshold. */
XLING_API int xling_delta_first_exceeding(const xling_delta* delta, uint32_t* layer);
XLING_API xling_status xling_delta_write_json(const xling_delta* delta, const char* path);
XLING_API xling_status xling_delta_write_csv(const xling_delta* delta, const char* path);

/* CSV of one layer for external projection; max_samples 0 keeps all rows. */
XLING_API xling_status xling_export_projection(const xling_corpus* corpus,
                                               uint32_t layer_index, uint64_t max_samples,
                                               const char* path);

#ifdef __cplusplus
}
#endif

#endif /* XLING_XLING_H */
