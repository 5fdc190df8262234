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

#ifndef XLING_CORE_SYNTH_HPP
#define XLING_CORE_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dumpio.hpp"
#include "registry.hpp"

namespace xling {

// A world of parallel samples: sample i of every language sits at a shared
// anchor mu_i ~ N(0, anchor_spread^2 I) plus N(0, noise^2 I) jitter. Core
// languages stay on the anchors; every other language is displaced by its own
// fixed vector of norm fragment_offset.
struct WorldConfig {
  std::size_t num_languages = 6;
  std::size_t num_samples = 64;
  std::size_t dim = 16;
  std::uint32_t num_layers = 1;
  // Empty: the first num_languages codes of the builtin registry.
  std::vector<LanguageId> languages;
  std::vector<LanguageId> core_languages;
  double anchor_spread = 1.0;
  double noise = 0.01;
  double fragment_offset = 100.0;
  std::uint64_t seed = 0;
  std::string model_name = "synthetic";

  // Sorted language codes the world will contain.
  std::vector<LanguageId> resolved_languages() const;
  // Throws kInvalidConfig.
  void validate() const;

  std::string to_json() const;
  // Strict: unknown keys are rejected. "core_languages" may also be "all" or
  // "none".
  static WorldConfig from_json(std::string_view text);

  // Eight languages, six of them core, four layers.
  static WorldConfig demo();
};

enum class WorldRole { kCore, kFragmented };
std::string_view to_string(WorldRole role) noexcept;

// Layer l is drawn from its own seed stream, so layer 0 of a multi-layer
// world equals the single-layer world with the same seed. Only the offsets
// depend on core membership: two configs differing in core_languages alone
// produce identical anchors and noise.
EmbeddingCorpus generate_world(const WorldConfig& cfg, unsigned workers = 1);

std::map<LanguageId, WorldRole> world_truth(const WorldConfig& cfg);

inline constexpr std::string_view kSyntheticTimestamp = "1970-01-01T00:00:00Z";

}  // namespace xling

#endif  // XLING_CORE_SYNTH_HPP
