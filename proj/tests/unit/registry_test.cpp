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

#include <map>
#include <string>

#include "error.hpp"
#include "registry.hpp"
#include "test_support.hpp"

namespace xling {
namespace {

constexpr const char* kHeader = "code\tname\tscript\tregion\tfamily\tresource\n";

using testing::code_of;

TEST(LanguageId, AcceptsFloresCodes) {
  EXPECT_TRUE(LanguageId::is_valid("eng_Latn"));
  EXPECT_TRUE(LanguageId::is_valid("yue_Hant"));
  EXPECT_FALSE(LanguageId::is_valid("en_Latn"));
  EXPECT_FALSE(LanguageId::is_valid("ENG_Latn"));
  EXPECT_FALSE(LanguageId::is_valid("eng-Latn"));
  EXPECT_FALSE(LanguageId::is_valid("eng_Lat1"));
  EXPECT_FALSE(LanguageId::is_valid(""));
  EXPECT_EQ(code_of([] { LanguageId("english"); }), ErrorCode::kInvalidMetadata);
}

TEST(Registry, BuiltinHas31LanguagesSplit18High13Low) {
  const auto reg = LanguageRegistry::builtin();
  ASSERT_EQ(reg.size(), 31u);
  int high = 0;
  for (const auto& m : reg.entries()) high += m.resource == Resource::kHigh ? 1 : 0;
  EXPECT_EQ(high, 18);
  EXPECT_EQ(static_cast<int>(reg.size()) - high, 13);
}

TEST(Registry, BuiltinFamilyCensus) {
  const auto reg = LanguageRegistry::builtin();
  std::map<Family, int> count;
  for (const auto& m : reg.entries()) ++count[m.family];
  EXPECT_EQ(count[Family::kIndoEuropean], 18);
  EXPECT_EQ(count[Family::kAustronesian], 7);
  EXPECT_EQ(count[Family::kSinoTibetan], 2);
  EXPECT_EQ(count[Family::kJaponic], 1);
  EXPECT_EQ(count[Family::kNigerCongo], 1);
  EXPECT_EQ(count[Family::kDravidian], 1);
  EXPECT_EQ(count[Family::kKraDai], 1);
}

TEST(Registry, PairPartitionCounts) {
  const auto reg = LanguageRegistry::builtin();
  std::map<ResourceGroup, int> count;
  int total = 0;
  const auto e = reg.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      ++count[reg.classify_pair(e[i].id, e[j].id).resource_group];
      ++total;
    }
  }
  EXPECT_EQ(total, 465);
  EXPECT_EQ(count[ResourceGroup::kHH], 153);
  EXPECT_EQ(count[ResourceGroup::kHL], 234);
  EXPECT_EQ(count[ResourceGroup::kLL], 78);
}

TEST(Registry, ClassifyIsSymmetric) {
  const auto reg = LanguageRegistry::builtin();
  const auto e = reg.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      EXPECT_EQ(reg.classify_pair(e[i].id, e[j].id), reg.classify_pair(e[j].id, e[i].id));
    }
  }
}

TEST(Registry, ClassifyEnglishFrench) {
  const auto reg = LanguageRegistry::builtin();
  const auto g = reg.classify_pair(LanguageId("eng_Latn"), LanguageId("fra_Latn"));
  EXPECT_EQ(g.resource_group, ResourceGroup::kHH);
  EXPECT_TRUE(g.same_region);
  EXPECT_TRUE(g.same_family);
}

TEST(Registry, ClassifyBengaliThai) {
  const auto reg = LanguageRegistry::builtin();
  const auto g = reg.classify_pair(LanguageId("ben_Beng"), LanguageId("tha_Thai"));
  EXPECT_EQ(g.resource_group, ResourceGroup::kHL);
  EXPECT_FALSE(g.same_region);
  EXPECT_FALSE(g.same_family);
}

TEST(Registry, SelfPairRejected) {
  const auto reg = LanguageRegistry::builtin();
  EXPECT_EQ(code_of([&] { reg.classify_pair(LanguageId("eng_Latn"), LanguageId("eng_Latn")); }),
            ErrorCode::kSelfPair);
}

TEST(Registry, UnknownLanguage) {
  const auto reg = LanguageRegistry::builtin();
  EXPECT_FALSE(reg.contains(LanguageId("xxx_Latn")));
  EXPECT_EQ(code_of([&] { reg.at(LanguageId("xxx_Latn")); }), ErrorCode::kUnknownLanguage);
  EXPECT_EQ(code_of([&] { reg.classify_pair(LanguageId("xxx_Latn"), LanguageId("eng_Latn")); }),
            ErrorCode::kUnknownLanguage);
}

TEST(Registry, SingleRowTsv) {
  const auto reg = LanguageRegistry::from_tsv(std::string(kHeader) +
                                              "eng_Latn\tEnglish\tLatin\tEurope\tIndoEuropean\tHigh\n");
  ASSERT_EQ(reg.size(), 1u);
  const auto& m = reg.at(LanguageId("eng_Latn"));
  EXPECT_EQ(m.name, "English");
  EXPECT_EQ(m.region, Region::kEurope);
  EXPECT_EQ(m.family, Family::kIndoEuropean);
  EXPECT_EQ(m.resource, Resource::kHigh);
}

TEST(Registry, DisplayFormsAccepted) {
  const auto reg = LanguageRegistry::from_tsv(
      std::string(kHeader) + "tha_Thai\tThai\tThai\tSoutheast Asia\tKra-Dai\tLow\r\n");
  const auto& m = reg.at(LanguageId("tha_Thai"));
  EXPECT_EQ(m.region, Region::kSoutheastAsia);
  EXPECT_EQ(m.family, Family::kKraDai);
}

TEST(Registry, DuplicateCodeRejected) {
  const std::string row = "eng_Latn\tEnglish\tLatin\tEurope\tIndoEuropean\tHigh\n";
  EXPECT_EQ(code_of([&] { LanguageRegistry::from_tsv(std::string(kHeader) + row + row); }),
            ErrorCode::kDuplicateLanguage);
}

TEST(Registry, MalformedInputs) {
  EXPECT_EQ(code_of([] { LanguageRegistry::from_tsv(""); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { LanguageRegistry::from_tsv("code,name\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] {
              LanguageRegistry::from_tsv(std::string(kHeader) + "eng_Latn\tEnglish\tLatin\n");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] {
              LanguageRegistry::from_tsv(std::string(kHeader) +
                                         "eng_Latn\tEnglish\tLatin\tMars\tIndoEuropean\tHigh\n");
            }),
            ErrorCode::kInvalidMetadata);
  EXPECT_EQ(code_of([] {
              LanguageRegistry::from_tsv(std::string(kHeader) +
                                         "eng_Latn\tEnglish\tLatin\tEurope\tKlingon\tHigh\n");
            }),
            ErrorCode::kInvalidMetadata);
  EXPECT_EQ(code_of([] {
              LanguageRegistry::from_tsv(std::string(kHeader) +
                                         "eng_Latn\tEnglish\tLatin\tEurope\tIndoEuropean\tMedium\n");
            }),
            ErrorCode::kInvalidMetadata);
  EXPECT_EQ(code_of([] {
              LanguageRegistry::from_tsv(std::string(kHeader) +
                                         "english\tEnglish\tLatin\tEurope\tIndoEuropean\tHigh\n");
            }),
            ErrorCode::kInvalidMetadata);
}

TEST(Registry, LoadFromFileAndBuiltin) {
  testing::TempDir dir;
  const auto path = dir / "langs.tsv";
  testing::spit(path, std::string(kHeader) +
                          "eng_Latn\tEnglish\tLatin\tEurope\tIndoEuropean\tHigh\n"
                          "ban_Latn\tBalinese\tLatin\tSoutheastAsia\tAustronesian\tLow\n");
  EXPECT_EQ(LanguageRegistry::load(path.string()).size(), 2u);
  EXPECT_EQ(LanguageRegistry::load("builtin").size(), 31u);
  EXPECT_EQ(code_of([&] { LanguageRegistry::load((dir / "missing.tsv").string()); }),
            ErrorCode::kIoError);
}

}  // namespace
}  // namespace xling
