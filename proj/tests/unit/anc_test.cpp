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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "anc.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace xling {
namespace {

using testing::code_of;

EmbeddingLayer transformed(const EmbeddingLayer& l, const LanguageId& as,
                           const std::vector<double>& gain, const std::vector<double>& offset) {
  std::vector<float> v(l.values().begin(), l.values().end());
  for (std::size_t r = 0; r < l.rows(); ++r) {
    for (std::size_t c = 0; c < l.cols(); ++c) {
      v[r * l.cols() + c] = static_cast<float>(gain[c] * v[r * l.cols() + c] + offset[c]);
    }
  }
  return EmbeddingLayer(as, l.layer_index(), l.rows(), l.cols(), std::move(v));
}

TEST(Pearson, Examples) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_DOUBLE_EQ(pearson(x, std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_EQ(pearson(x, std::vector<double>{2, 2, 2}), 0.0);
  EXPECT_EQ(code_of([&] { pearson(x, std::vector<double>{1, 2}); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([] { pearson(std::vector<double>{1}, std::vector<double>{1}); }),
            ErrorCode::kInsufficientSamples);
}

TEST(Pearson, MatchesTwoPassOracle) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(3.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = nd(rng);
      y[i] = 0.3 * x[i] + nd(rng);
    }
    EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-12);
  }
}

TEST(AncPair, CopyIsOne) {
  std::mt19937_64 rng(1);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 100, 16, rng);
  const EmbeddingLayer b(LanguageId("deu_Latn"), 0, 100, 16,
                         std::vector<float>(a.values().begin(), a.values().end()));
  EXPECT_NEAR(anc_pair(a, b), 1.0, 1e-9);
}

TEST(AncPair, NegationIsMinusOne) {
  std::mt19937_64 rng(2);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 100, 16, rng);
  std::vector<float> neg(a.values().begin(), a.values().end());
  for (auto& x : neg) x = -x;
  EXPECT_NEAR(anc_pair(a, EmbeddingLayer(LanguageId("deu_Latn"), 0, 100, 16, neg)), -1.0, 1e-9);
}

TEST(AncPair, IndependentGaussiansNearZero) {
  std::mt19937_64 rng(20240917);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 1000, 64, rng);
  const auto b = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 1000, 64, rng);
  EXPECT_LT(std::abs(anc_pair(a, b)), 0.1);
}

TEST(AncPair, PositiveAffineInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> g(0.2, 5.0), o(-50.0, 50.0);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 200, 24, rng);
  auto b0 = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 200, 24, rng);
  const std::vector<double> zero(24, 0.0), one(24, 1.0);
  const auto b = transformed(a, LanguageId("deu_Latn"), one, zero);
  std::vector<float> mix(b.values().begin(), b.values().end());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.6f * mix[i] + 0.8f * b0.values()[i];
  const EmbeddingLayer partner(LanguageId("deu_Latn"), 0, 200, 24, mix);
  const double base = anc_pair(a, partner);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> gain(24), off(24);
    for (std::size_t c = 0; c < 24; ++c) {
      gain[c] = g(rng);
      off[c] = o(rng);
    }
    EXPECT_NEAR(anc_pair(a, transformed(partner, partner.language(), gain, off)), base, 1e-7);
    EXPECT_NEAR(anc_pair(transformed(a, a.language(), gain, off), partner), base, 1e-7);
  }
}

TEST(AncPair, MatchesOracle) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 30, 9, rng);
    const auto b = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 30, 9, rng);
    const std::vector<float> av(a.values().begin(), a.values().end());
    const std::vector<float> bv(b.values().begin(), b.values().end());
    EXPECT_NEAR(anc_pair(a, b), oracle::anc(av, bv, 30, 9), 1e-12);
  }
}

TEST(AncPair, ZeroVarianceNeuronsContributeZero) {
  // Column 0 is constant in a; column 1 is identical in both.
  const EmbeddingLayer a(LanguageId("eng_Latn"), 0, 3, 2, {5, 1, 5, 2, 5, 3});
  const EmbeddingLayer b(LanguageId("deu_Latn"), 0, 3, 2, {1, 1, 2, 2, 3, 3});
  const auto r = anc_pair_detail(a, b);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_EQ(r.zero_variance_neurons, 1u);
}

TEST(AncPair, Errors) {
  std::mt19937_64 rng(5);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 10, 4, rng);
  const auto same = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 10, 4, rng);
  const auto rows = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 11, 4, rng);
  const auto cols = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 10, 5, rng);
  const auto layer = testing::gaussian_layer(LanguageId("deu_Latn"), 1, 10, 4, rng);
  const auto one = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 1, 4, rng);
  const auto one_a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 1, 4, rng);
  EXPECT_EQ(code_of([&] { anc_pair(a, same); }), ErrorCode::kSelfPair);
  EXPECT_EQ(code_of([&] { anc_pair(a, rows); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { anc_pair(a, cols); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { anc_pair(a, layer); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { anc_pair(one_a, one); }), ErrorCode::kInsufficientSamples);
}

TEST(AncMatrix, CopiesGiveOnes) {
  std::mt19937_64 rng(6);
  const auto base = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 20, 5, rng);
  std::vector<EmbeddingLayer> ls;
  for (const auto& c : testing::builtin_codes(3)) {
    ls.emplace_back(c, 0, 20, 5, std::vector<float>(base.values().begin(), base.values().end()));
  }
  const auto m = anc_matrix_from_layers(testing::share(ls));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m.at(i, j), 1.0, 1e-9);
  }
}

TEST(AncMatrix, TwoLanguageStructure) {
  std::mt19937_64 rng(7);
  const auto a = testing::gaussian_layer(LanguageId("eng_Latn"), 0, 20, 5, rng);
  const auto b = testing::gaussian_layer(LanguageId("deu_Latn"), 0, 20, 5, rng);
  const auto m = anc_matrix_from_layers(testing::share({a, b}));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.languages[0].str(), "deu_Latn");
  EXPECT_EQ(m.at(0, 0), 1.0);
  EXPECT_EQ(m.at(1, 1), 1.0);
  EXPECT_EQ(m.at(0, 1), m.at(1, 0));
  EXPECT_EQ(m.at(0, 1), anc_pair(b, a));
}

TEST(AncMatrix, FullRegistryHas465Pairs) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(31), 1, 12, 4, 8);
  const auto m = layer_anc_matrix(corpus, 0, 4);
  ASSERT_EQ(m.size(), 31u);
  std::size_t off = 0;
  for (std::size_t i = 0; i < 31; ++i) {
    for (std::size_t j = 0; j < 31; ++j) {
      if (i < j) ++off;
      EXPECT_EQ(m.at(i, j), m.at(j, i));
      EXPECT_GE(m.at(i, j), -1.0);
      EXPECT_LE(m.at(i, j), 1.0);
    }
  }
  EXPECT_EQ(off, 465u);
}

TEST(AncMatrix, DeterministicAcrossWorkers) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(9), 2, 25, 6, 9);
  const auto ref = layer_anc_matrix(corpus, 1, 1);
  for (unsigned w : {2u, 4u, 8u}) EXPECT_EQ(layer_anc_matrix(corpus, 1, w), ref);
}

TEST(AncMatrix, ReportsConstantNeurons) {
  const auto codes = testing::builtin_codes(2);
  const EmbeddingLayer a(codes[0], 0, 3, 2, {5, 1, 5, 2, 5, 3});
  const EmbeddingLayer b(codes[1], 0, 3, 2, {1, 1, 2, 2, 3, 3});
  const auto m = anc_matrix_from_layers(testing::share({a, b}));
  EXPECT_EQ(m.zero_variance_neurons, (std::vector<std::size_t>{1, 0}));
}

AncMatrix constant_matrix(const std::vector<LanguageId>& langs, double c, std::uint32_t layer = 0) {
  AncMatrix m;
  m.layer_index = layer;
  m.languages = langs;
  m.values.assign(langs.size() * langs.size(), c);
  for (std::size_t i = 0; i < langs.size(); ++i) m.values[i * langs.size() + i] = 1.0;
  m.zero_variance_neurons.assign(langs.size(), 0);
  return m;
}

TEST(GroupSummary, BuiltinCensusAndConstantMeans) {
  const auto reg = LanguageRegistry::builtin();
  auto langs = testing::builtin_codes(31);
  const auto s = group_summary(constant_matrix(langs, 0.25), reg);
  EXPECT_EQ(s[GroupLabel::kHH].pairs, 153u);
  EXPECT_EQ(s[GroupLabel::kHL].pairs, 234u);
  EXPECT_EQ(s[GroupLabel::kLL].pairs, 78u);
  EXPECT_EQ(s[GroupLabel::kWithinRegion].pairs + s[GroupLabel::kCrossRegion].pairs, 465u);
  EXPECT_EQ(s[GroupLabel::kWithinFamily].pairs + s[GroupLabel::kCrossFamily].pairs, 465u);
  for (const auto& g : s.groups) {
    ASSERT_TRUE(g.mean.has_value());
    EXPECT_DOUBLE_EQ(*g.mean, 0.25);
  }
}

TEST(GroupSummary, EmptyGroupsAreAbsent) {
  const auto reg = LanguageRegistry::builtin();
  AncMatrix m = constant_matrix({LanguageId("eng_Latn"), LanguageId("fra_Latn")}, 0.7);
  const auto s = group_summary(m, reg);
  EXPECT_EQ(s[GroupLabel::kHH].mean, 0.7);
  EXPECT_EQ(s[GroupLabel::kWithinRegion].mean, 0.7);
  EXPECT_EQ(s[GroupLabel::kWithinFamily].mean, 0.7);
  EXPECT_FALSE(s[GroupLabel::kLL].mean.has_value());
  EXPECT_FALSE(s[GroupLabel::kHL].mean.has_value());
  EXPECT_FALSE(s[GroupLabel::kCrossRegion].mean.has_value());
  EXPECT_FALSE(s[GroupLabel::kCrossFamily].mean.has_value());
  EXPECT_EQ(s[GroupLabel::kLL].pairs, 0u);
}

TEST(GroupSummary, MeansAreConvexCombinations) {
  const auto reg = LanguageRegistry::builtin();
  const auto corpus = testing::random_corpus(testing::builtin_codes(12), 1, 15, 5, 10);
  const auto m = layer_anc_matrix(corpus, 0);
  double lo = 1.0, hi = -1.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      lo = std::min(lo, m.at(i, j));
      hi = std::max(hi, m.at(i, j));
    }
  }
  for (const auto& g : group_summary(m, reg).groups) {
    if (!g.mean) continue;
    EXPECT_GE(*g.mean, lo - 1e-15);
    EXPECT_LE(*g.mean, hi + 1e-15);
  }
}

TEST(GroupSummary, UnknownLanguage) {
  const auto reg = LanguageRegistry::builtin();
  EXPECT_EQ(code_of([&] {
              group_summary(constant_matrix({LanguageId("eng_Latn"), LanguageId("xxx_Latn")}, 0.1),
                            reg);
            }),
            ErrorCode::kUnknownLanguage);
}

TEST(Percentile, Type7) {
  EXPECT_EQ(percentile({1, 2, 3, 4}, 0.75), 3.25);
  EXPECT_EQ(percentile({5}, 0.75), 5.0);
  EXPECT_EQ(percentile({4, 1, 3, 2, 5}, 0.5), 3.0);
  EXPECT_EQ(percentile({1, 2}, 0.0), 1.0);
  EXPECT_EQ(percentile({1, 2}, 1.0), 2.0);
  EXPECT_EQ(code_of([] { percentile({}, 0.5); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(code_of([] { percentile({1}, 1.5); }), ErrorCode::kOutOfRange);
}

std::vector<AncMatrix> two_language_layers(const std::vector<double>& values) {
  const std::vector<LanguageId> langs = {LanguageId("deu_Latn"), LanguageId("eng_Latn")};
  std::vector<AncMatrix> out;
  for (std::size_t l = 0; l < values.size(); ++l) {
    out.push_back(constant_matrix(langs, values[l], static_cast<std::uint32_t>(l)));
  }
  return out;
}

TEST(Peaks, TopThreeLayers) {
  const auto r = peak_layers(two_language_layers({0.2, 0.9, 0.8, 0.85}));
  EXPECT_EQ(r.peak_layers, (std::vector<std::uint32_t>{1, 3, 2}));
  ASSERT_EQ(r.per_pair_aggregate.size(), 1u);
  EXPECT_DOUBLE_EQ(r.per_pair_aggregate[0].aggregate, (0.9 + 0.85 + 0.8) / 3.0);
}

TEST(Peaks, TiesPreferLowerLayers) {
  const auto langs = testing::builtin_codes(4);
  std::vector<AncMatrix> ms;
  for (std::uint32_t l = 0; l < 6; ++l) ms.push_back(constant_matrix(langs, 0.4, l));
  const auto r = peak_layers(ms);
  EXPECT_EQ(r.peak_layers, (std::vector<std::uint32_t>{0, 1, 2}));
  for (const auto& p : r.per_pair_aggregate) EXPECT_DOUBLE_EQ(p.aggregate, 0.4);
}

TEST(Peaks, UnsortedLayerIndicesUseLayerNumbers) {
  auto ms = two_language_layers({0.2, 0.9, 0.8, 0.85});
  std::reverse(ms.begin(), ms.end());
  EXPECT_EQ(peak_layers(ms).peak_layers, (std::vector<std::uint32_t>{1, 3, 2}));
}

TEST(Peaks, Errors) {
  EXPECT_EQ(code_of([] { peak_layers(two_language_layers({0.1, 0.2})); }),
            ErrorCode::kInsufficientLayers);
  auto dup = two_language_layers({0.1, 0.2, 0.3});
  dup[2].layer_index = 0;
  EXPECT_EQ(code_of([&] { peak_layers(dup); }), ErrorCode::kDuplicateLayer);
  auto mixed = two_language_layers({0.1, 0.2, 0.3});
  mixed[1].languages[1] = LanguageId("fra_Latn");
  EXPECT_EQ(code_of([&] { peak_layers(mixed); }), ErrorCode::kShapeMismatch);
}

TEST(Peaks, MatchesOracleOnRandomTensors) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> layers_d(5, 40), langs_d(4, 10);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const auto layers = static_cast<std::size_t>(layers_d(rng));
    const auto codes = testing::builtin_codes(static_cast<std::size_t>(langs_d(rng)));
    const std::size_t n = codes.size();
    std::vector<std::vector<std::vector<double>>> tensor(layers,
                                                         std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0)));
    std::vector<AncMatrix> ms;
    for (std::size_t l = 0; l < layers; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          // Coarse values so that ties in percentiles and aggregates occur.
          const double x = std::round(v(rng) * 4.0) / 4.0;
          tensor[l][i][j] = tensor[l][j][i] = x;
        }
      }
      AncMatrix m = constant_matrix(codes, 0.0, static_cast<std::uint32_t>(l));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.values[i * n + j] = tensor[l][i][j];
      }
      ms.push_back(m);
    }
    std::vector<std::string> names;
    for (const auto& c : codes) names.push_back(c.str());
    const auto expected = oracle::peaks(tensor, names);
    const auto got = peak_layers(ms);
    EXPECT_EQ(got.peak_layers, expected.layers);
    EXPECT_EQ(got.peak_percentiles, expected.percentiles);
    ASSERT_EQ(got.per_pair_aggregate.size(), expected.aggregate.size());
    for (const auto& p : got.per_pair_aggregate) {
      EXPECT_EQ(p.aggregate, expected.aggregate.at({p.a.str(), p.b.str()}));
    }
    ASSERT_EQ(got.ranked_pairs.size(), expected.ranked.size());
    for (std::size_t i = 0; i < got.ranked_pairs.size(); ++i) {
      EXPECT_EQ(got.ranked_pairs[i].a.str(), expected.ranked[i].first);
      EXPECT_EQ(got.ranked_pairs[i].b.str(), expected.ranked[i].second);
    }
    EXPECT_EQ(got.top_pairs.size(), std::min<std::size_t>(10, n * (n - 1) / 2));
  }
}

TEST(TopPairs, TiesBrokenLexicographically) {
  const std::vector<LanguageId> langs = {LanguageId("aaa_Latn"), LanguageId("bbb_Latn"),
                                         LanguageId("ccc_Latn")};
  std::vector<AncMatrix> ms;
  for (std::uint32_t l = 0; l < 3; ++l) ms.push_back(constant_matrix(langs, 0.5, l));
  const auto r = peak_layers(ms);
  ASSERT_EQ(r.ranked_pairs.size(), 3u);
  EXPECT_EQ(r.ranked_pairs[0].a.str() + r.ranked_pairs[0].b.str(), "aaa_Latnbbb_Latn");
  EXPECT_EQ(r.ranked_pairs[1].a.str() + r.ranked_pairs[1].b.str(), "aaa_Latnccc_Latn");
  EXPECT_EQ(r.ranked_pairs[2].a.str() + r.ranked_pairs[2].b.str(), "bbb_Latnccc_Latn");
}

TEST(TopPairs, TableShape) {
  const auto corpus = testing::random_corpus(testing::builtin_codes(31), 4, 10, 3, 13);
  std::vector<AncMatrix> ms;
  for (std::uint32_t l = 0; l < 4; ++l) ms.push_back(layer_anc_matrix(corpus, l, 4));
  const auto r = peak_layers(ms);
  ASSERT_EQ(r.top_pairs.size(), 10u);
  const auto table = top_pairs_table(r, 10);
  std::size_t rows = 0;
  std::istringstream in(table);
  std::string line;
  bool header = false;
  std::string unique_line;
  while (std::getline(in, line)) {
    if (line.rfind("rank\t", 0) == 0) {
      header = true;
    } else if (line.rfind("# unique_languages\t", 0) == 0) {
      unique_line = line;
    } else if (!line.empty() && line[0] != '#') {
      ++rows;
    }
  }
  EXPECT_TRUE(header);
  EXPECT_EQ(rows, 10u);
  std::string expected = "# unique_languages\t";
  for (std::size_t i = 0; i < r.unique_languages.size(); ++i) {
    expected += (i ? "," : "") + r.unique_languages[i].str();
  }
  EXPECT_EQ(unique_line, expected);
  EXPECT_EQ(r.unique_languages, unique_languages(r.top_pairs));
}

TEST(TopPairs, MoreRowsThanPairs) {
  const auto r = peak_layers(two_language_layers({0.3, 0.2, 0.1}));
  const auto table = top_pairs_table(r, 10);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
}

TEST(UniqueLanguages, FirstAppearanceOrder) {
  const std::vector<PairScore> pairs = {{LanguageId("eng_Latn"), LanguageId("fra_Latn"), 0.9},
                                        {LanguageId("deu_Latn"), LanguageId("eng_Latn"), 0.8},
                                        {LanguageId("deu_Latn"), LanguageId("fra_Latn"), 0.7}};
  const auto u = unique_languages(pairs);
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0].str(), "eng_Latn");
  EXPECT_EQ(u[1].str(), "fra_Latn");
  EXPECT_EQ(u[2].str(), "deu_Latn");
}

}  // namespace
}  // namespace xling
