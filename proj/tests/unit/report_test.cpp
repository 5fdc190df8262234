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

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checksum.hpp"
#include "report.hpp"
#include "reports_io.hpp"
#include "synth.hpp"
#include "test_support.hpp"

namespace xling {
namespace {

using testing::code_of;

IloLayerReport report(std::uint32_t layer, double aggregate, IloParams params = {},
                      std::vector<std::pair<const char*, double>> langs = {}) {
  IloLayerReport r;
  r.layer_index = layer;
  r.params = params;
  r.aggregate = aggregate;
  r.samples_per_language = 10;
  for (const auto& [code, ilo] : langs) {
    r.per_language.push_back(IloLanguageScore{LanguageId(code), ilo, ilo, ilo});
  }
  return r;
}

IloRun run(std::string label, std::vector<IloLayerReport> reports) {
  IloRun r;
  r.label = std::move(label);
  r.header.engine = "xling test";
  r.header.model_name = "m";
  r.header.manifest_checksum = "0000000000000000";
  r.reports = std::move(reports);
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

TEST(Curve, SortsLayers) {
  const std::vector<IloLayerReport> rs = {report(32, 0.3), report(0, 0.1), report(16, 0.2)};
  const auto c = assemble_curve(rs, "base");
  EXPECT_EQ(c.label, "base");
  EXPECT_EQ(c.points, (std::vector<CurvePoint>{{0, 0.1}, {16, 0.2}, {32, 0.3}}));
}

TEST(Curve, Errors) {
  const std::vector<IloLayerReport> mixed = {report(0, 0.1, {10, 5, Metric::kEuclidean}),
                                             report(1, 0.1, {20, 5, Metric::kEuclidean})};
  EXPECT_EQ(code_of([&] { assemble_curve(mixed, "x"); }), ErrorCode::kParamMismatch);
  const std::vector<IloLayerReport> dup = {report(3, 0.1), report(3, 0.2)};
  EXPECT_EQ(code_of([&] { assemble_curve(dup, "x"); }), ErrorCode::kDuplicateLayer);
  EXPECT_TRUE(assemble_curve({}, "x").points.empty());
}

TEST(Compare, IdentityIsZero) {
  const auto a = run("a", {report(0, 0.8, {}, {{"eng_Latn", 0.9}, {"deu_Latn", 0.7}}),
                           report(1, 0.6, {}, {{"eng_Latn", 0.5}, {"deu_Latn", 0.7}})});
  const auto d = compare(a, a);
  ASSERT_EQ(d.layers.size(), 2u);
  for (const auto& l : d.layers) {
    EXPECT_EQ(l.delta, 0.0);
    for (const auto& pl : l.per_language) EXPECT_EQ(pl.delta, 0.0);
  }
  EXPECT_FALSE(d.first_exceeding_layer.has_value());
}

TEST(Compare, Subtraction) {
  const auto base = run("base", {report(4, 0.8)});
  const auto cand = run("cand", {report(4, 0.5)});
  const auto d = compare(base, cand);
  ASSERT_EQ(d.layers.size(), 1u);
  EXPECT_EQ(d.layers[0].layer, 4u);
  EXPECT_DOUBLE_EQ(d.layers[0].delta, -0.3);
  EXPECT_EQ(d.first_exceeding_layer, 4u);
  EXPECT_EQ(d.baseline_label, "base");
  EXPECT_EQ(d.candidate_label, "cand");
}

TEST(Compare, AntiSymmetric) {
  const auto a = run("a", {report(0, 0.8, {}, {{"eng_Latn", 0.25}}), report(2, 0.3), report(5, 0.1)});
  const auto b = run("b", {report(0, 0.6, {}, {{"eng_Latn", 0.5}}), report(2, 0.9), report(7, 0.1)});
  const auto ab = compare(a, b);
  const auto ba = compare(b, a);
  ASSERT_EQ(ab.layers.size(), 2u);
  ASSERT_EQ(ba.layers.size(), 2u);
  for (std::size_t i = 0; i < ab.layers.size(); ++i) {
    EXPECT_EQ(ab.layers[i].layer, ba.layers[i].layer);
    EXPECT_EQ(ab.layers[i].delta, -ba.layers[i].delta);
  }
  EXPECT_EQ(ab.layers[0].per_language[0].delta, 0.25);
}

TEST(Compare, ThresholdAndEarlyWindow) {
  std::vector<IloLayerReport> base, cand;
  const double drops[] = {0.0, 0.01, 0.02, 0.04, 0.2, 0.3, 0.3, 0.3, 0.3};
  for (std::uint32_t l = 0; l < 9; ++l) {
    base.push_back(report(l, 0.9));
    cand.push_back(report(l, 0.9 - drops[l]));
  }
  const auto d = compare(run("b", base), run("c", cand), 0.05);
  EXPECT_EQ(d.first_exceeding_layer, 4u);
  EXPECT_EQ(d.early_window_end, 3u);
  ASSERT_TRUE(d.early_mean_delta.has_value());
  EXPECT_NEAR(*d.early_mean_delta, -(0.0 + 0.01 + 0.02) / 3.0, 1e-15);
  const auto strict = compare(run("b", base), run("c", cand), 0.5);
  EXPECT_FALSE(strict.first_exceeding_layer.has_value());
}

TEST(Compare, Errors) {
  const auto a = run("a", {report(0, 0.1)});
  const auto b = run("b", {report(1, 0.1)});
  EXPECT_EQ(code_of([&] { compare(a, b); }), ErrorCode::kNoOverlap);
  const auto c = run("c", {report(0, 0.1, {20, 5, Metric::kEuclidean})});
  EXPECT_EQ(code_of([&] { compare(a, c); }), ErrorCode::kParamMismatch);
  EXPECT_EQ(code_of([&] { compare(a, a, -1.0); }), ErrorCode::kInvalidArgument);
}

TEST(Export, ShapeAndTruncation) {
  const std::vector<LanguageId> langs = {LanguageId("eng_Latn"), LanguageId("deu_Latn")};
  const auto corpus = EmbeddingCorpus::from_layers(
      testing::manifest_for(langs, 1, 3, 2),
      {EmbeddingLayer(langs[0], 0, 3, 2, {1, 2, 3, 4, 5, 6}),
       EmbeddingLayer(langs[1], 0, 3, 2, {0.5f, -1, 0.25f, 1e-7f, 3, 4})});
  std::ostringstream all;
  export_projection_data(corpus, 0, std::nullopt, all);
  const auto rows = data_lines(all.str());
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "language,sample_index,v0,v1");
  EXPECT_EQ(rows[1], "deu_Latn,0,0.5,-1");
  EXPECT_EQ(rows[2], "deu_Latn,1,0.25,1e-07");
  EXPECT_EQ(rows[4], "eng_Latn,0,1,2");
  std::ostringstream one;
  export_projection_data(corpus, 0, 1, one);
  EXPECT_EQ(data_lines(one.str()).size(), 3u);
  std::ostringstream sink;
  EXPECT_EQ(code_of([&] { export_projection_data(corpus, 1, 1, sink); }), ErrorCode::kIncompleteGrid);
  EXPECT_EQ(code_of([&] { export_projection_data(corpus, 0, 0, sink); }), ErrorCode::kInvalidArgument);
}

TEST(Export, FullRegistryRowCount) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(31), 1, 7, 2, 3);
  for (std::size_t cap : {1u, 5u, 7u, 100u}) {
    std::ostringstream out;
    export_projection_data(corpus, 0, cap, out);
    EXPECT_EQ(data_lines(out.str()).size(), 1 + 31 * std::min<std::size_t>(7, cap));
  }
}

TEST(Export, FloatsRoundTrip) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(2), 1, 20, 6, 4);
  std::ostringstream out;
  export_projection_data(corpus, 0, std::nullopt, out);
  const auto rows = data_lines(out.str());
  const auto layer = corpus.layer(corpus.languages()[0], 0);
  for (std::size_t r = 0; r < 20; ++r) {
    std::istringstream in(rows[1 + r]);
    std::string cell;
    std::getline(in, cell, ',');
    std::getline(in, cell, ',');
    for (std::size_t c = 0; c < 6; ++c) {
      std::getline(in, cell, ',');
      EXPECT_EQ(std::stof(cell), layer->row(r)[c]);
    }
  }
}

TEST(Header, ForCorpusCarriesProvenance) {
  const auto corpus = generate_world(WorldConfig::demo());
  const auto h = ReportHeader::for_corpus(corpus, 16);
  EXPECT_EQ(h.engine, "xling 1.0.0");
  EXPECT_EQ(h.model_name, "synthetic-demo");
  EXPECT_EQ(h.manifest_checksum, checksum_to_hex(corpus.manifest_checksum()));
  EXPECT_EQ(h.max_samples, 16u);
  const auto block = comment_block(h, {{"layer", "3"}});
  EXPECT_NE(block.find("# engine: xling 1.0.0\n"), std::string::npos);
  EXPECT_NE(block.find("# manifest_checksum: " + h.manifest_checksum + "\n"), std::string::npos);
  EXPECT_NE(block.find("# max_samples: 16\n"), std::string::npos);
  EXPECT_NE(block.find("# layer: 3\n"), std::string::npos);
}

TEST(ReportsIo, LayerJsonFields) {
  const auto corpus = generate_world(WorldConfig::demo());
  const auto r = layer_ilo_report(corpus, 1, IloParams{10, 3, Metric::kEuclidean});
  const auto j = nlohmann::json::parse(ilo_layer_report_json(r, ReportHeader::for_corpus(corpus)));
  EXPECT_EQ(j["layer"], 1);
  EXPECT_EQ(j["k"], 10);
  EXPECT_EQ(j["tau"], 3);
  EXPECT_EQ(j["metric"], "euclidean");
  EXPECT_EQ(j["aggregate"].get<double>(), r.aggregate);
  EXPECT_EQ(j["per_language"].size(), 8u);
  EXPECT_EQ(j["per_language"][0]["language"], "ban_Latn");
  EXPECT_EQ(j["header"]["engine"], "xling 1.0.0");
  EXPECT_TRUE(j["header"]["max_samples"].is_null());
}

TEST(ReportsIo, RunJsonRoundTripIsExact) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(5), 3, 12, 4, 5);
  IloRun r;
  r.label = "pretrained";
  r.header = ReportHeader::for_corpus(corpus, 9);
  const std::vector<std::uint32_t> layers = {0, 2};
  const std::vector<IloParams> params = {{5, 2, Metric::kCosine}};
  r.reports = sweep(corpus, layers, params, {1, 9});
  const auto text = ilo_run_json(r);
  const auto back = parse_ilo_run_json(text);
  EXPECT_EQ(back.label, r.label);
  EXPECT_EQ(back.header, r.header);
  EXPECT_EQ(back.reports, r.reports);
  EXPECT_EQ(ilo_run_json(back), text);
}

TEST(ReportsIo, RunJsonErrors) {
  EXPECT_EQ(code_of([] { parse_ilo_run_json("nope"); }), ErrorCode::kInvalidReport);
  EXPECT_EQ(code_of([] { parse_ilo_run_json("{}"); }), ErrorCode::kInvalidReport);
  testing::TempDir dir;
  EXPECT_EQ(code_of([&] { read_ilo_run(dir / "none.json"); }), ErrorCode::kIoError);
}

TEST(ReportsIo, CsvLayouts) {
  const auto corpus = generate_world(WorldConfig::demo());
  const auto header = ReportHeader::for_corpus(corpus);
  const std::vector<std::uint32_t> layers = {0, 1};
  const std::vector<IloParams> params = {{10, 3, Metric::kEuclidean}};
  const auto reports = sweep(corpus, layers, params);

  const auto per_lang = data_lines(ilo_reports_csv(reports, header));
  EXPECT_EQ(per_lang[0], "layer,k,tau,metric,language,bridge,reachability,ilo");
  EXPECT_EQ(per_lang.size(), 1u + 2 * 8);
  const auto agg = data_lines(ilo_aggregates_csv(reports, header));
  EXPECT_EQ(agg[0], "layer,k,tau,metric,aggregate");
  EXPECT_EQ(agg.size(), 3u);
  const auto curve = data_lines(curve_csv(assemble_curve(reports, "demo"), params[0], header));
  EXPECT_EQ(curve[0], "layer,aggregate");
  EXPECT_EQ(curve.size(), 3u);

  const auto m = layer_anc_matrix(corpus, 0);
  const auto anc = data_lines(anc_matrix_csv(m, header));
  EXPECT_EQ(anc.size(), 9u);
  EXPECT_EQ(anc[0].substr(0, 18), "language,ban_Latn,");
  const std::vector<GroupSummary> gs = {group_summary(m, LanguageRegistry::builtin())};
  const auto groups = data_lines(group_summary_csv(gs, header));
  EXPECT_EQ(groups[0], "layer,group,pairs,mean");
  EXPECT_EQ(groups.size(), 8u);
}

TEST(ReportsIo, EmptyGroupWrittenAsNa) {
  AncMatrix m;
  m.languages = {LanguageId("eng_Latn"), LanguageId("fra_Latn")};
  m.values = {1, 0.5, 0.5, 1};
  m.zero_variance_neurons = {0, 0};
  const std::vector<GroupSummary> gs = {group_summary(m, LanguageRegistry::builtin())};
  const auto text = group_summary_csv(gs, ReportHeader{});
  EXPECT_NE(text.find("0,LL,0,NA\n"), std::string::npos);
  EXPECT_NE(text.find("0,HH,1,0.5\n"), std::string::npos);
}

TEST(ReportsIo, DeltaOutputs) {
  const auto a = run("a", {report(0, 0.8, {}, {{"eng_Latn", 0.9}}), report(3, 0.5)});
  const auto b = run("b", {report(0, 0.7, {}, {{"eng_Latn", 0.6}}), report(3, 0.5)});
  const auto d = compare(a, b);
  const auto j = nlohmann::json::parse(delta_json(d, a.header, b.header));
  EXPECT_EQ(j["baseline_label"], "a");
  EXPECT_EQ(j["first_exceeding_layer"], 0);
  EXPECT_EQ(j["per_layer"].size(), 2u);
  const auto rows = data_lines(delta_csv(d, a.header, b.header));
  EXPECT_EQ(rows[0], "layer,scope,baseline,candidate,delta");
  EXPECT_EQ(rows.size(), 4u);
}

}  // namespace
}  // namespace xling
