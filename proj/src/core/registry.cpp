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

#include "registry.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "error.hpp"

namespace xling {
namespace {

constexpr std::string_view kHeader = "code\tname\tscript\tregion\tfamily\tresource";

// Flores-200 subset: code, name, script, region, family, resource level.
constexpr std::string_view kBuiltinTsv =
    "code\tname\tscript\tregion\tfamily\tresource\n"
    "ban_Latn\tBalinese\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "ben_Beng\tBengali\tBengali\tSouthAsia\tIndoEuropean\tHigh\n"
    "bjn_Latn\tBanjar\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "ces_Latn\tCzech\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "dan_Latn\tDanish\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "deu_Latn\tGerman\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "eng_Latn\tEnglish\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "fra_Latn\tFrench\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "gle_Latn\tIrish\tLatin\tEurope\tIndoEuropean\tLow\n"
    "hin_Deva\tHindi\tDevanagari\tSouthAsia\tIndoEuropean\tHigh\n"
    "ind_Latn\tIndonesian\tLatin\tSoutheastAsia\tAustronesian\tHigh\n"
    "jav_Latn\tJavanese\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "jpn_Jpan\tJapanese\tJapanese\tEastAsia\tJaponic\tHigh\n"
    "min_Latn\tMinangkabau\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "nld_Latn\tDutch\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "pol_Latn\tPolish\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "rus_Cyrl\tRussian\tCyrillic\tEurope\tIndoEuropean\tHigh\n"
    "sin_Sinh\tSinhala\tSinhala\tSouthAsia\tIndoEuropean\tLow\n"
    "slv_Latn\tSlovenian\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "spa_Latn\tSpanish\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "srp_Cyrl\tSerbian\tCyrillic\tEurope\tIndoEuropean\tLow\n"
    "sun_Latn\tSundanese\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "swe_Latn\tSwedish\tLatin\tEurope\tIndoEuropean\tHigh\n"
    "swh_Latn\tSwahili\tLatin\tAfrica\tNigerCongo\tHigh\n"
    "tel_Telu\tTelugu\tTelugu\tSouthAsia\tDravidian\tLow\n"
    "tgl_Latn\tTagalog\tLatin\tSoutheastAsia\tAustronesian\tLow\n"
    "tha_Thai\tThai\tThai\tSoutheastAsia\tKraDai\tLow\n"
    "ukr_Cyrl\tUkrainian\tCyrillic\tEurope\tIndoEuropean\tHigh\n"
    "urd_Arab\tUrdu\tArabic\tSouthAsia\tIndoEuropean\tLow\n"
    "yue_Hant\tYue Chinese\tHan (Traditional)\tEastAsia\tSinoTibetan\tLow\n"
    "zho_Hans\tChinese (Simplified)\tHan (Simplified)\tEastAsia\tSinoTibetan\tHigh\n";

// Canonical token first, then the spelled-out form used in published tables.
template <typename E>
struct Token {
  std::string_view canonical;
  std::string_view display;
  E value;
};

constexpr std::array<Token<Region>, 5> kRegions{{
    {"Europe", "Europe", Region::kEurope},
    {"SoutheastAsia", "Southeast Asia", Region::kSoutheastAsia},
    {"SouthAsia", "South Asia", Region::kSouthAsia},
    {"EastAsia", "East Asia", Region::kEastAsia},
    {"Africa", "Africa", Region::kAfrica},
}};

constexpr std::array<Token<Family>, 7> kFamilies{{
    {"IndoEuropean", "Indo-European", Family::kIndoEuropean},
    {"Austronesian", "Austronesian", Family::kAustronesian},
    {"SinoTibetan", "Sino-Tibetan", Family::kSinoTibetan},
    {"Japonic", "Japonic", Family::kJaponic},
    {"NigerCongo", "Niger-Congo", Family::kNigerCongo},
    {"Dravidian", "Dravidian", Family::kDravidian},
    {"KraDai", "Kra-Dai", Family::kKraDai},
}};

constexpr std::array<Token<Resource>, 2> kResources{{
    {"High", "High", Resource::kHigh},
    {"Low", "Low", Resource::kLow},
}};

template <typename E, std::size_t N>
E parse_token(const std::array<Token<E>, N>& table, std::string_view text,
              std::string_view what, std::size_t line) {
  for (const auto& t : table) {
    if (text == t.canonical || text == t.display) return t.value;
  }
  throw Error(ErrorCode::kInvalidMetadata,
              "line " + std::to_string(line) + ": unknown " + std::string(what) +
                  " '" + std::string(text) + "'");
}

template <typename E, std::size_t N>
std::string_view token_name(const std::array<Token<E>, N>& table, E value) {
  for (const auto& t : table) {
    if (t.value == value) return t.canonical;
  }
  return "?";
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

LanguageId::LanguageId(std::string code) : code_(std::move(code)) {
  if (!is_valid(code_)) {
    throw Error(ErrorCode::kInvalidMetadata,
                "malformed language code '" + code_ + "'");
  }
}

bool LanguageId::is_valid(std::string_view code) noexcept {
  if (code.size() != 8 || code[3] != '_') return false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (code[i] < 'a' || code[i] > 'z') return false;
  }
  for (std::size_t i = 4; i < 8; ++i) {
    const char c = code[i];
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  }
  return true;
}

std::string_view to_string(Region r) noexcept { return token_name(kRegions, r); }
std::string_view to_string(Family f) noexcept { return token_name(kFamilies, f); }
std::string_view to_string(Resource r) noexcept { return token_name(kResources, r); }

std::string_view to_string(ResourceGroup g) noexcept {
  switch (g) {
    case ResourceGroup::kHH: return "HH";
    case ResourceGroup::kHL: return "HL";
    case ResourceGroup::kLL: return "LL";
  }
  return "?";
}

LanguageRegistry::LanguageRegistry(std::vector<LanguageMeta> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& code = entries_[i].id.str();
    if (!index_.emplace(code, i).second) {
      throw Error(ErrorCode::kDuplicateLanguage,
                  "duplicate language code '" + code + "'", code, std::nullopt);
    }
  }
}

LanguageRegistry LanguageRegistry::builtin() { return from_tsv(kBuiltinTsv); }

LanguageRegistry LanguageRegistry::from_tsv(std::string_view text) {
  auto lines = split(text, '\n');
  std::vector<LanguageMeta> entries;
  bool seen_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_no = i + 1;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kHeader) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) +
                        ": expected header 'code name script region family resource'");
      }
      seen_header = true;
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected 6 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    for (auto f : fields) {
      if (f.empty()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": empty field");
      }
    }
    if (!LanguageId::is_valid(fields[0])) {
      throw Error(ErrorCode::kInvalidMetadata,
                  "line " + std::to_string(line_no) + ": malformed language code '" +
                      std::string(fields[0]) + "'");
    }
    entries.push_back(LanguageMeta{
        LanguageId(std::string(fields[0])),
        std::string(fields[1]),
        std::string(fields[2]),
        parse_token(kRegions, fields[3], "region", line_no),
        parse_token(kFamilies, fields[4], "family", line_no),
        parse_token(kResources, fields[5], "resource level", line_no),
    });
  }
  if (!seen_header) {
    throw Error(ErrorCode::kParseError, "line 1: missing header row");
  }
  return LanguageRegistry(std::move(entries));
}

LanguageRegistry LanguageRegistry::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open registry file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_tsv(ss.str());
}

LanguageRegistry LanguageRegistry::load(const std::string& source) {
  if (source == "builtin") return builtin();
  return from_file(source);
}

bool LanguageRegistry::contains(const LanguageId& id) const {
  return index_.find(id.str()) != index_.end();
}

const LanguageMeta& LanguageRegistry::at(const LanguageId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownLanguage,
                "language '" + id.str() + "' is not in the registry", id.str(),
                std::nullopt);
  }
  return entries_[it->second];
}

PairGroup LanguageRegistry::classify_pair(const LanguageId& a,
                                          const LanguageId& b) const {
  if (a == b) {
    throw Error(ErrorCode::kSelfPair, "cannot classify '" + a.str() + "' against itself",
                a.str(), std::nullopt);
  }
  const auto& ma = at(a);
  const auto& mb = at(b);
  ResourceGroup rg = ResourceGroup::kHL;
  if (ma.resource == Resource::kHigh && mb.resource == Resource::kHigh) {
    rg = ResourceGroup::kHH;
  } else if (ma.resource == Resource::kLow && mb.resource == Resource::kLow) {
    rg = ResourceGroup::kLL;
  }
  return PairGroup{rg, ma.region == mb.region, ma.family == mb.family};
}

}  // namespace xling
