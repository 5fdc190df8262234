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

#include "reports_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "text.hpp"

namespace xling {
namespace {

using ojson = nlohmann::ordered_json;

ojson header_json(const ReportHeader& h) {
  ojson j;
  j["engine"] = h.engine;
  j["model_name"] = h.model_name;
  j["manifest_checksum"] = h.manifest_checksum;
  j["num_layers"] = h.num_layers;
  j["num_samples"] = h.num_samples;
  j["pooling"] = h.pooling;
  j["max_samples"] = h.max_samples ? ojson(*h.max_samples) : ojson(nullptr);
  return j;
}

ojson layer_report_body(const IloLayerReport& r) {
  ojson j;
  j["layer"] = r.layer_index;
  j["k"] = r.params.k;
  j["tau"] = r.params.tau;
  j["metric"] = std::string(to_string(r.params.metric));
  j["aggregate"] = r.aggregate;
  j["samples_per_language"] = r.samples_per_language;
  auto langs = ojson::array();
  for (const auto& s : r.per_language) {
    langs.push_back(ojson{{"language", s.language.str()},
                          {"bridge", s.bridge},
                          {"reachability", s.reachability},
                          {"ilo", s.ilo}});
  }
  j["per_language"] = std::move(langs);
  return j;
}

std::string params_text(const IloParams& p) {
  return "k=" + std::to_string(p.k) + " tau=" + std::to_string(p.tau) +
         " metric=" + std::string(to_string(p.metric));
}

[[noreturn]] void bad_report(const std::string& why) {
  throw Error(ErrorCode::kInvalidReport, "malformed ILO run file: " + why);
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_report(std::string("missing '") + key + "'");
  return j.at(key);
}

std::string require_string(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_string()) bad_report(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t require_count(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_unsigned()) bad_report(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double require_unit(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number()) bad_report(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) bad_report(std::string("'") + key + "' outside [0, 1]");
  return x;
}

ReportHeader parse_header(const nlohmann::json& j) {
  ReportHeader h;
  h.engine = require_string(j, "engine");
  h.model_name = require_string(j, "model_name");
  h.manifest_checksum = require_string(j, "manifest_checksum");
  h.num_layers = static_cast<std::uint32_t>(require_count(j, "num_layers"));
  h.num_samples = require_count(j, "num_samples");
  h.pooling = require_string(j, "pooling");
  const auto& ms = require(j, "max_samples");
  if (!ms.is_null()) {
    if (!ms.is_number_unsigned()) bad_report("'max_samples' must be null or an integer");
    h.max_samples = ms.get<std::size_t>();
  }
  return h;
}

IloLayerReport parse_layer_report(const nlohmann::json& j) {
  IloLayerReport r;
  r.layer_index = static_cast<std::uint32_t>(require_count(j, "layer"));
  r.params.k = require_count(j, "k");
  r.params.tau = require_count(j, "tau");
  try {
    r.params.metric = parse_metric(require_string(j, "metric"));
  } catch (const Error& e) {
    bad_report(e.what());
  }
  r.aggregate = require_unit(j, "aggregate");
  r.samples_per_language = require_count(j, "samples_per_language");
  const auto& langs = require(j, "per_language");
  if (!langs.is_array()) bad_report("'per_language' must be an array");
  for (const auto& s : langs) {
    const auto code = require_string(s, "language");
    if (!LanguageId::is_valid(code)) bad_report("malformed language code '" + code + "'");
    r.per_language.push_back(IloLanguageScore{LanguageId(code), require_unit(s, "bridge"),
                                              require_unit(s, "reachability"),
                                              require_unit(s, "ilo")});
  }
  return r;
}

}  // namespace

std::string ilo_layer_report_json(const IloLayerReport& report, const ReportHeader& header) {
  ojson j;
  j["header"] = header_json(header);
  const ojson body = layer_report_body(report);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string ilo_reports_csv(std::span<const IloLayerReport> reports, const ReportHeader& header) {
  std::string out = comment_block(header);
  out += "layer,k,tau,metric,language,bridge,reachability,ilo\n";
  for (const auto& r : reports) {
    const std::string prefix = std::to_string(r.layer_index) + ',' + std::to_string(r.params.k) +
                               ',' + std::to_string(r.params.tau) + ',' +
                               std::string(to_string(r.params.metric)) + ',';
    for (const auto& s : r.per_language) {
      out += prefix + s.language.str() + ',' + format_double(s.bridge) + ',' +
             format_double(s.reachability) + ',' + format_double(s.ilo) + '\n';
    }
  }
  return out;
}

std::string ilo_aggregates_csv(std::span<const IloLayerReport> reports, const ReportHeader& header) {
  std::string out = comment_block(header);
  out += "layer,k,tau,metric,aggregate\n";
  for (const auto& r : reports) {
    out += std::to_string(r.layer_index) + ',' + std::to_string(r.params.k) + ',' +
           std::to_string(r.params.tau) + ',' + std::string(to_string(r.params.metric)) + ',' +
           format_double(r.aggregate) + '\n';
  }
  return out;
}

std::string curve_csv(const CurveSeries& curve, const IloParams& params,
                      const ReportHeader& header) {
  std::string out = comment_block(header, {{"label", curve.label}, {"params", params_text(params)}});
  out += "layer,aggregate\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.layer) + ',' + format_double(p.value) + '\n';
  }
  return out;
}

std::string ilo_run_json(const IloRun& run) {
  ojson j;
  j["header"] = header_json(run.header);
  j["label"] = run.label;
  auto reports = ojson::array();
  for (const auto& r : run.reports) reports.push_back(layer_report_body(r));
  j["reports"] = std::move(reports);
  return j.dump(2) + "\n";
}

IloRun parse_ilo_run_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_report(std::string("not valid JSON: ") + e.what());
  }
  IloRun run;
  run.header = parse_header(require(j, "header"));
  run.label = require_string(j, "label");
  const auto& reports = require(j, "reports");
  if (!reports.is_array()) bad_report("'reports' must be an array");
  for (const auto& r : reports) run.reports.push_back(parse_layer_report(r));
  return run;
}

IloRun read_ilo_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ilo_run_json(ss.str());
}

std::string anc_matrix_csv(const AncMatrix& matrix, const ReportHeader& header) {
  std::string zero_var;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (i > 0) zero_var += ';';
    zero_var += matrix.languages[i].str() + '=' + std::to_string(matrix.zero_variance_neurons[i]);
  }
  std::string out = comment_block(header, {{"layer", std::to_string(matrix.layer_index)},
                                           {"zero_variance_neurons", zero_var}});
  out += "language";
  for (const auto& l : matrix.languages) out += ',' + l.str();
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += matrix.languages[i].str();
    for (std::size_t j = 0; j < matrix.size(); ++j) out += ',' + format_double(matrix.at(i, j));
    out += '\n';
  }
  return out;
}

std::string group_summary_csv(std::span<const GroupSummary> summaries,
                              const ReportHeader& header) {
  std::string out = comment_block(header);
  out += "layer,group,pairs,mean\n";
  for (const auto& s : summaries) {
    for (std::size_t g = 0; g < kGroupLabelCount; ++g) {
      const auto& stat = s.groups[g];
      out += std::to_string(s.layer_index) + ',' +
             std::string(to_string(static_cast<GroupLabel>(g))) + ',' +
             std::to_string(stat.pairs) + ',' +
             (stat.mean ? format_double(*stat.mean) : std::string("NA")) + '\n';
    }
  }
  return out;
}

std::string peak_report_tsv(const PeakReport& report, std::size_t n, const ReportHeader& header) {
  return comment_block(header) + top_pairs_table(report, n);
}

std::string delta_json(const DeltaReport& delta, const ReportHeader& baseline,
                       const ReportHeader& candidate) {
  ojson j;
  j["baseline_label"] = delta.baseline_label;
  j["candidate_label"] = delta.candidate_label;
  j["baseline_header"] = header_json(baseline);
  j["candidate_header"] = header_json(candidate);
  j["k"] = delta.params.k;
  j["tau"] = delta.params.tau;
  j["metric"] = std::string(to_string(delta.params.metric));
  j["threshold"] = delta.threshold;
  j["first_exceeding_layer"] =
      delta.first_exceeding_layer ? ojson(*delta.first_exceeding_layer) : ojson(nullptr);
  j["early_window_end"] = delta.early_window_end;
  j["early_mean_delta"] = delta.early_mean_delta ? ojson(*delta.early_mean_delta) : ojson(nullptr);
  auto layers = ojson::array();
  for (const auto& ld : delta.layers) {
    ojson l;
    l["layer"] = ld.layer;
    l["baseline"] = ld.baseline;
    l["candidate"] = ld.candidate;
    l["delta"] = ld.delta;
    auto langs = ojson::array();
    for (const auto& d : ld.per_language) {
      langs.push_back(ojson{{"language", d.language.str()},
                            {"baseline", d.baseline},
                            {"candidate", d.candidate},
                            {"delta", d.delta}});
    }
    l["per_language"] = std::move(langs);
    layers.push_back(std::move(l));
  }
  j["per_layer"] = std::move(layers);
  return j.dump(2) + "\n";
}

std::string delta_csv(const DeltaReport& delta, const ReportHeader& baseline,
                      const ReportHeader& candidate) {
  std::string out = "# engine: " + baseline.engine + "\n";
  out += "# baseline: " + delta.baseline_label + "\n";
  out += "# baseline_model_name: " + baseline.model_name + "\n";
  out += "# baseline_manifest_checksum: " + baseline.manifest_checksum + "\n";
  out += "# candidate: " + delta.candidate_label + "\n";
  out += "# candidate_model_name: " + candidate.model_name + "\n";
  out += "# candidate_manifest_checksum: " + candidate.manifest_checksum + "\n";
  out += "# params: " + params_text(delta.params) + "\n";
  out += "# threshold: " + format_double(delta.threshold) + "\n";
  out += "layer,scope,baseline,candidate,delta\n";
  for (const auto& ld : delta.layers) {
    out += std::to_string(ld.layer) + ",aggregate," + format_double(ld.baseline) + ',' +
           format_double(ld.candidate) + ',' + format_double(ld.delta) + '\n';
    for (const auto& d : ld.per_language) {
      out += std::to_string(ld.layer) + ',' + d.language.str() + ',' + format_double(d.baseline) +
             ',' + format_double(d.candidate) + ',' + format_double(d.delta) + '\n';
    }
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
}

}  // namespace xling
