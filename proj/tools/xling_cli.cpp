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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xling/xling.h"

namespace {

namespace fs = std::filesystem;

// Usage problem detected by the CLI itself, before the library is involved.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Library failure; the thread's last-error slot already describes it.
struct Failure {
  xling_status status;
};

void check(xling_status status) {
  if (status != XLING_OK) throw Failure{status};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Registry = Handle<xling_registry, xling_registry_free>;
using Corpus = Handle<xling_corpus, xling_corpus_free>;
using IloRun = Handle<xling_ilo_run, xling_ilo_run_free>;
using AncRun = Handle<xling_anc_run, xling_anc_run_free>;
using Peaks = Handle<xling_peaks, xling_peaks_free>;
using Delta = Handle<xling_delta, xling_delta_free>;

unsigned default_workers() {
  if (const char* env = std::getenv("ILO_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0 || v > 4096) {
      throw UsageError(std::string("ILO_WORKERS must be a positive integer, got '") + env + "'");
    }
    return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::uint32_t parse_u32(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos ||
      text.size() > 9) {
    throw UsageError("invalid " + what + " '" + text + "'");
  }
  return static_cast<std::uint32_t>(std::stoul(text));
}

// all | i,j,k | a..b
std::vector<std::uint32_t> parse_layers(const std::string& spec, std::uint32_t num_layers) {
  std::vector<std::uint32_t> layers;
  if (spec == "all") {
    for (std::uint32_t l = 0; l < num_layers; ++l) layers.push_back(l);
    return layers;
  }
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const auto lo = parse_u32(spec.substr(0, dots), "layer range");
    const auto hi = parse_u32(spec.substr(dots + 2), "layer range");
    if (lo > hi) throw UsageError("empty layer range '" + spec + "'");
    for (std::uint32_t l = lo; l <= hi; ++l) layers.push_back(l);
    return layers;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) layers.push_back(parse_u32(item, "layer"));
  if (layers.empty()) throw UsageError("empty layer selection");
  return layers;
}

xling_metric parse_metric(const std::string& text) {
  if (text == "euclidean") return XLING_METRIC_EUCLIDEAN;
  if (text == "cosine") return XLING_METRIC_COSINE;
  throw UsageError("unknown metric '" + text + "' (expected euclidean or cosine)");
}

// k:tau[,k:tau...]
std::vector<xling_ilo_params> parse_params(const std::string& spec, xling_metric metric) {
  std::vector<xling_ilo_params> params;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("params entry '" + item + "' is not k:tau");
    params.push_back({parse_u32(item.substr(0, colon), "k"),
                      parse_u32(item.substr(colon + 1), "tau"), metric});
  }
  if (params.empty()) throw UsageError("empty params list");
  return params;
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
}

void open_corpus(const std::string& manifest, unsigned workers, Corpus& corpus) {
  check(xling_corpus_open(manifest.c_str(), workers, corpus.out()));
}

struct Options {
  std::string manifest;
  std::string layers = "all";
  std::uint32_t k = 10;
  std::uint32_t tau = 5;
  std::string metric = "euclidean";
  std::uint64_t max_samples = 0;
  std::string out = ".";
  unsigned workers = 1;
  std::string label;
  std::string registry = "builtin";
  double threshold = 0.05;
  std::string params = "5:3,10:5,20:10";
  std::size_t top = 10;
  std::uint32_t layer = 0;
  std::string config;
  bool demo = false;
  std::optional<std::uint64_t> seed;
  std::string baseline;
  std::string candidate;
};

int cmd_validate(const Options& o) {
  Corpus corpus;
  open_corpus(o.manifest, o.workers, corpus);
  const auto* c = corpus.get();
  const auto n = xling_corpus_num_languages(c);
  std::cout << "manifest: " << o.manifest << "\n"
            << "model_name: " << xling_corpus_model_name(c) << "\n"
            << "pooling: " << xling_corpus_pooling(c) << "\n"
            << "manifest_checksum: " << xling_corpus_manifest_checksum(c) << "\n"
            << "languages: " << n << "\n"
            << "layers: " << xling_corpus_num_layers(c) << "\n"
            << "samples: " << xling_corpus_num_samples(c) << "\n"
            << "dim: " << xling_corpus_dim(c) << "\n"
            << "dumps: " << n * xling_corpus_num_layers(c) << " verified\n"
            << "status: valid\n";
  return 0;
}

int cmd_ilo(const Options& o) {
  Corpus corpus;
  open_corpus(o.manifest, o.workers, corpus);
  const auto layers = parse_layers(o.layers, xling_corpus_num_layers(corpus.get()));
  const xling_ilo_params params{o.k, o.tau, parse_metric(o.metric)};
  IloRun run;
  check(xling_ilo_compute(corpus.get(), layers.data(), layers.size(), &params, 1, o.max_samples,
                          o.workers, o.label.c_str(), run.out()));
  ensure_dir(o.out);
  for (std::size_t i = 0; i < xling_ilo_run_count(run.get()); ++i) {
    std::uint32_t layer = 0;
    double aggregate = 0.0;
    check(xling_ilo_run_report(run.get(), i, &layer, nullptr, &aggregate));
    check(xling_ilo_run_write_layer_json(
        run.get(), i, out_path(o.out, "ilo_layer_" + std::to_string(layer) + ".json").c_str()));
    std::cout << "layer " << layer << " ilo " << aggregate << "\n";
  }
  check(xling_ilo_run_write_csv(run.get(), out_path(o.out, "ilo.csv").c_str()));
  check(xling_ilo_run_write_curve_csv(run.get(), out_path(o.out, "curve.csv").c_str()));
  check(xling_ilo_run_write_json(run.get(), out_path(o.out, "ilo_run.json").c_str()));
  return 0;
}

int cmd_sweep(const Options& o) {
  Corpus corpus;
  open_corpus(o.manifest, o.workers, corpus);
  const auto layers = parse_layers(o.layers, xling_corpus_num_layers(corpus.get()));
  const auto params = parse_params(o.params, parse_metric(o.metric));
  IloRun run;
  check(xling_ilo_compute(corpus.get(), layers.data(), layers.size(), params.data(),
                          params.size(), o.max_samples, o.workers, o.label.c_str(), run.out()));
  ensure_dir(o.out);
  check(xling_ilo_run_write_csv(run.get(), out_path(o.out, "sweep.csv").c_str()));
  check(xling_ilo_run_write_aggregates_csv(run.get(),
                                           out_path(o.out, "sweep_aggregates.csv").c_str()));
  check(xling_ilo_run_write_json(run.get(), out_path(o.out, "sweep_run.json").c_str()));
  std::cout << "sweep: " << xling_ilo_run_count(run.get()) << " reports\n";
  return 0;
}

void compute_anc(const Options& o, Corpus& corpus, AncRun& anc) {
  open_corpus(o.manifest, o.workers, corpus);
  const auto layers = parse_layers(o.layers, xling_corpus_num_layers(corpus.get()));
  check(xling_anc_compute(corpus.get(), layers.data(), layers.size(), o.workers, anc.out()));
}

int cmd_anc(const Options& o) {
  Corpus corpus;
  AncRun anc;
  compute_anc(o, corpus, anc);
  Registry registry;
  check(xling_registry_load(o.registry.c_str(), registry.out()));
  ensure_dir(o.out);
  for (std::size_t i = 0; i < xling_anc_run_count(anc.get()); ++i) {
    const auto layer = xling_anc_run_layer(anc.get(), i);
    check(xling_anc_run_write_matrix_csv(
        anc.get(), i, out_path(o.out, "anc_layer_" + std::to_string(layer) + ".csv").c_str()));
  }
  check(xling_anc_run_write_groups_csv(anc.get(), registry.get(),
                                       out_path(o.out, "anc_groups.csv").c_str()));
  std::cout << "anc: " << xling_anc_run_count(anc.get()) << " layers\n";
  return 0;
}

int cmd_peaks(const Options& o) {
  Corpus corpus;
  AncRun anc;
  compute_anc(o, corpus, anc);
  Peaks peaks;
  check(xling_anc_peaks(anc.get(), peaks.out()));
  ensure_dir(o.out);
  check(xling_peaks_write_tsv(peaks.get(), o.top, out_path(o.out, "peaks.tsv").c_str()));
  std::cout << "peak_layers: " << xling_peaks_layer(peaks.get(), 0) << ","
            << xling_peaks_layer(peaks.get(), 1) << "," << xling_peaks_layer(peaks.get(), 2)
            << "\n";
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_synth(const Options& o) {
  if (o.demo == !o.config.empty()) {
    throw UsageError("synth needs exactly one of --config or --demo");
  }
  std::string config = o.demo ? std::string(xling_synth_demo_config()) : read_file(o.config);
  if (o.seed) {
    auto j = nlohmann::ordered_json::parse(config, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw UsageError("world config is not a JSON object");
    j["seed"] = *o.seed;
    config = j.dump();
  }
  Corpus corpus;
  check(xling_synth_generate(config.c_str(), o.workers, corpus.out()));
  check(xling_corpus_write(corpus.get(), o.out.c_str(), o.workers));
  std::cout << "wrote " << out_path(o.out, "manifest.json") << " ("
            << xling_corpus_num_languages(corpus.get()) << " languages, "
            << xling_corpus_num_layers(corpus.get()) << " layers)\n";
  return 0;
}

int cmd_export(const Options& o) {
  Corpus corpus;
  open_corpus(o.manifest, o.workers, corpus);
  ensure_dir(o.out);
  const auto path = out_path(o.out, "projection_layer_" + std::to_string(o.layer) + ".csv");
  check(xling_export_projection(corpus.get(), o.layer, o.max_samples, path.c_str()));
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_compare(const Options& o) {
  IloRun baseline;
  IloRun candidate;
  check(xling_ilo_run_read(o.baseline.c_str(), baseline.out()));
  check(xling_ilo_run_read(o.candidate.c_str(), candidate.out()));
  Delta delta;
  check(xling_compare(baseline.get(), candidate.get(), o.threshold, delta.out()));
  ensure_dir(o.out);
  check(xling_delta_write_json(delta.get(), out_path(o.out, "delta.json").c_str()));
  check(xling_delta_write_csv(delta.get(), out_path(o.out, "delta.csv").c_str()));
  std::uint32_t first = 0;
  if (xling_delta_first_exceeding(delta.get(), &first) != 0) {
    std::cout << "first_exceeding_layer: " << first << "\n";
  } else {
    std::cout << "first_exceeding_layer: none\n";
  }
  return 0;
}

void print_usage_error(const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = "InvalidArgument";
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  try {
    o.workers = default_workers();
  } catch (const UsageError& e) {
    print_usage_error(e.what());
    return 1;
  }

  CLI::App app{"xling: interlingual alignment analysis of multilingual hidden states"};
  app.set_version_flag("--version", std::string("xling ") + xling_version());
  app.require_subcommand(1);

  const auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "Worker threads (default: ILO_WORKERS or all cores)")
        ->check(CLI::Range(1u, 4096u));
  };
  const auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("manifest", o.manifest, "Corpus manifest.json")->required();
  };
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  };
  const auto add_layers = [&](CLI::App* sub) {
    sub->add_option("--layers", o.layers, "all | i,j,k | a..b")->capture_default_str();
  };
  const auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--max-samples", o.max_samples, "Samples per language (0 = all)");
  };

  auto* validate = app.add_subcommand("validate", "Check a corpus without computing metrics");
  add_manifest(validate);
  add_workers(validate);

  auto* ilo = app.add_subcommand("ilo", "Interlingual local overlap per layer");
  add_manifest(ilo);
  add_layers(ilo);
  ilo->add_option("--k", o.k, "Neighborhood size")->capture_default_str();
  ilo->add_option("--tau", o.tau, "Bridge threshold")->capture_default_str();
  ilo->add_option("--metric", o.metric, "euclidean | cosine")->capture_default_str();
  ilo->add_option("--label", o.label, "Run label used by compare");
  add_sampling(ilo);
  add_out(ilo);
  add_workers(ilo);

  auto* sweep = app.add_subcommand("sweep", "ILO over several (k, tau) settings");
  add_manifest(sweep);
  add_layers(sweep);
  sweep->add_option("--params", o.params, "k:tau list")->capture_default_str();
  sweep->add_option("--metric", o.metric, "euclidean | cosine")->capture_default_str();
  sweep->add_option("--label", o.label, "Run label");
  add_sampling(sweep);
  add_out(sweep);
  add_workers(sweep);

  auto* anc = app.add_subcommand("anc", "Average neuron-wise correlation per layer");
  add_manifest(anc);
  add_layers(anc);
  anc->add_option("--registry", o.registry, "builtin or a language TSV")->capture_default_str();
  add_out(anc);
  add_workers(anc);

  auto* peaks = app.add_subcommand("peaks", "Peak ANC layers and top correlated pairs");
  add_manifest(peaks);
  add_layers(peaks);
  peaks->add_option("--top", o.top, "Pairs to list")->capture_default_str();
  add_out(peaks);
  add_workers(peaks);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--config", o.config, "World config JSON file");
  synth->add_flag("--demo", o.demo, "Use the bundled demonstration world");
  synth->add_option("--seed", o.seed, "Override the config seed");
  add_out(synth);
  add_workers(synth);

  auto* exp = app.add_subcommand("export", "Emit one layer as CSV for external projection");
  add_manifest(exp);
  exp->add_option("--layer", o.layer, "Layer index")->required();
  add_sampling(exp);
  add_out(exp);
  add_workers(exp);

  auto* cmp = app.add_subcommand("compare", "Per-layer deltas between two ILO runs");
  cmp->add_option("baseline", o.baseline, "Baseline ilo_run.json")->required();
  cmp->add_option("candidate", o.candidate, "Candidate ilo_run.json")->required();
  cmp->add_option("--threshold", o.threshold, "Disruption threshold")->capture_default_str();
  add_out(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_usage_error(e.what());
    return 1;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*ilo) return cmd_ilo(o);
    if (*sweep) return cmd_sweep(o);
    if (*anc) return cmd_anc(o);
    if (*peaks) return cmd_peaks(o);
    if (*synth) return cmd_synth(o);
    if (*exp) return cmd_export(o);
    if (*cmp) return cmd_compare(o);
  } catch (const Failure& f) {
    std::cerr << xling_last_error_json() << "\n";
    return xling_status_exit_code(f.status);
  } catch (const UsageError& e) {
    print_usage_error(e.what());
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 3;
  }
  return 1;
}
