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

#ifndef XLING_CORE_REGISTRY_HPP
#define XLING_CORE_REGISTRY_HPP

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xling {

// ISO-639-3 code plus script tag, e.g. "eng_Latn".
class LanguageId {
 public:
  LanguageId() = default;
  // Throws Error(kInvalidMetadata) when the code is malformed.
  explicit LanguageId(std::string code);

  static bool is_valid(std::string_view code) noexcept;

  const std::string& str() const noexcept { return code_; }

  friend bool operator==(const LanguageId&, const LanguageId&) = default;
  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;

 private:
  std::string code_;
};

enum class Region { kEurope, kSoutheastAsia, kSouthAsia, kEastAsia, kAfrica };

enum class Family {
  kIndoEuropean,
  kAustronesian,
  kSinoTibetan,
  kJaponic,
  kNigerCongo,
  kDravidian,
  kKraDai,
};

enum class Resource { kHigh, kLow };

enum class ResourceGroup { kHH, kHL, kLL };

std::string_view to_string(Region r) noexcept;
std::string_view to_string(Family f) noexcept;
std::string_view to_string(Resource r) noexcept;
std::string_view to_string(ResourceGroup g) noexcept;

struct LanguageMeta {
  LanguageId id;
  std::string name;
  std::string script;
  Region region;
  Family family;
  Resource resource;
};

struct PairGroup {
  ResourceGroup resource_group;
  bool same_region;
  bool same_family;

  friend bool operator==(const PairGroup&, const PairGroup&) = default;
};

// Immutable after construction.
class LanguageRegistry {
 public:
  LanguageRegistry() = default;
  explicit LanguageRegistry(std::vector<LanguageMeta> entries);

  // The 31 Flores-200 languages used for the reference analysis.
  static LanguageRegistry builtin();
  static LanguageRegistry from_tsv(std::string_view text);
  static LanguageRegistry from_file(const std::string& path);
  // "builtin" or a TSV path.
  static LanguageRegistry load(const std::string& source);

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const LanguageMeta> entries() const noexcept { return entries_; }
  bool contains(const LanguageId& id) const;
  const LanguageMeta& at(const LanguageId& id) const;

  PairGroup classify_pair(const LanguageId& a, const LanguageId& b) const;

 private:
  std::vector<LanguageMeta> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace xling

#endif  // XLING_CORE_REGISTRY_HPP
