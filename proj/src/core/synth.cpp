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

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "parallel.hpp"

namespace xling {
namespace {

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint32_t layer, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    layer, stream};
  return std::mt19937_64(seq);
}

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, "invalid world config: " + why);
}

std::vector<LanguageId> parse_language_list(const nlohmann::json& v, const char* key) {
  if (!v.is_array()) invalid(std::string("'") + key + "' must be an array of language codes");
  std::vector<LanguageId> out;
  for (const auto& item : v) {
    if (!item.is_string() || !LanguageId::is_valid(item.get<std::string>())) {
      invalid(std::string("'") + key + "' holds a malformed language code");
    }
    out.emplace_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(WorldRole role) noexcept {
  return role == WorldRole::kCore ? "core" : "fragmented";
}

std::vector<LanguageId> WorldConfig::resolved_languages() const {
  std::vector<LanguageId> out;
  if (languages.empty()) {
    const auto reg = LanguageRegistry::builtin();
    if (num_languages > reg.size()) {
      invalid("num_languages = " + std::to_string(num_languages) +
              " exceeds the builtin registry; list 'languages' explicitly");
    }
    for (std::size_t i = 0; i < num_languages; ++i) out.push_back(reg.entries()[i].id);
  } else {
    out = languages;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void WorldConfig::validate() const {
  if (num_languages < 1) invalid("num_languages must be at least 1");
  if (num_samples < 2) invalid("num_samples must be at least 2");
  if (dim < 2) invalid("dim must be at least 2");
  if (num_layers < 1) invalid("num_layers must be at least 1");
  if (!languages.empty() && languages.size() != num_languages) {
    invalid("'languages' lists " + std::to_string(languages.size()) + " codes but num_languages is " +
            std::to_string(num_languages));
  }
  const auto langs = resolved_languages();
  if (std::adjacent_find(langs.begin(), langs.end()) != langs.end()) {
    invalid("'languages' contains duplicates");
  }
  std::set<LanguageId> core;
  for (const auto& c : core_languages) {
    if (!std::binary_search(langs.begin(), langs.end(), c)) {
      invalid("core language '" + c.str() + "' is not part of the world");
    }
    if (!core.insert(c).second) invalid("core language '" + c.str() + "' listed twice");
  }
  if (!(std::isfinite(anchor_spread) && anchor_spread > 0.0)) {
    invalid("anchor_spread must be positive");
  }
  if (!(std::isfinite(noise) && noise >= 0.0)) invalid("noise must be non-negative");
  if (!(std::isfinite(fragment_offset) && fragment_offset >= 0.0)) {
    invalid("fragment_offset must be non-negative");
  }
}

std::string WorldConfig::to_json() const {
  nlohmann::ordered_json j;
  j["num_languages"] = num_languages;
  j["num_samples"] = num_samples;
  j["dim"] = dim;
  j["num_layers"] = num_layers;
  auto langs = nlohmann::ordered_json::array();
  for (const auto& l : languages) langs.push_back(l.str());
  j["languages"] = std::move(langs);
  auto core = nlohmann::ordered_json::array();
  for (const auto& l : core_languages) core.push_back(l.str());
  j["core_languages"] = std::move(core);
  j["anchor_spread"] = anchor_spread;
  j["noise"] = noise;
  j["fragment_offset"] = fragment_offset;
  j["seed"] = seed;
  j["model_name"] = model_name;
  return j.dump(2) + "\n";
}

WorldConfig WorldConfig::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("top level must be an object");

  static const std::set<std::string> kKeys = {
      "num_languages", "num_samples",   "dim",   "num_layers",      "languages",
      "core_languages", "anchor_spread", "noise", "fragment_offset", "seed",
      "model_name"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) invalid("unknown key '" + key + "'");
  }

  WorldConfig cfg;
  auto count = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) invalid(std::string("'") + key + "' must be a non-negative integer");
    dst = j[key].get<std::remove_reference_t<decltype(dst)>>();
  };
  auto real = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) invalid(std::string("'") + key + "' must be a number");
    dst = j[key].get<double>();
  };
  count("num_languages", cfg.num_languages);
  count("num_samples", cfg.num_samples);
  count("dim", cfg.dim);
  count("num_layers", cfg.num_layers);
  count("seed", cfg.seed);
  real("anchor_spread", cfg.anchor_spread);
  real("noise", cfg.noise);
  real("fragment_offset", cfg.fragment_offset);
  if (j.contains("model_name")) {
    if (!j["model_name"].is_string()) invalid("'model_name' must be a string");
    cfg.model_name = j["model_name"].get<std::string>();
  }
  if (j.contains("languages")) {
    cfg.languages = parse_language_list(j["languages"], "languages");
    if (!j.contains("num_languages")) cfg.num_languages = cfg.languages.size();
  }
  if (j.contains("core_languages")) {
    const auto& core = j["core_languages"];
    if (core.is_string()) {
      const auto mode = core.get<std::string>();
      if (mode == "all") {
        cfg.core_languages = cfg.resolved_languages();
      } else if (mode != "none") {
        invalid("'core_languages' must be a list, \"all\" or \"none\"");
      }
    } else {
      cfg.core_languages = parse_language_list(core, "core_languages");
    }
  }
  cfg.validate();
  return cfg;
}

WorldConfig WorldConfig::demo() {
  WorldConfig cfg;
  cfg.num_languages = 8;
  cfg.num_samples = 64;
  cfg.dim = 16;
  cfg.num_layers = 4;
  cfg.seed = 20240917;
  cfg.model_name = "synthetic-demo";
  for (const char* code : {"ben_Beng", "ces_Latn", "dan_Latn", "deu_Latn", "eng_Latn", "fra_Latn"}) {
    cfg.core_languages.emplace_back(code);
  }
  return cfg;
}

EmbeddingCorpus generate_world(const WorldConfig& cfg, unsigned workers) {
  cfg.validate();
  const auto langs = cfg.resolved_languages();
  const std::set<LanguageId> core(cfg.core_languages.begin(), cfg.core_languages.end());
  const std::size_t n = cfg.num_samples;
  const std::size_t d = cfg.dim;

  std::vector<EmbeddingLayer> layers(langs.size() * cfg.num_layers);
  for (std::uint32_t layer = 0; layer < cfg.num_layers; ++layer) {
    std::vector<double> anchors(n * d);
    {
      auto rng = stream_engine(cfg.seed, layer, 0);
      std::normal_distribution<double> normal;
      for (auto& a : anchors) a = cfg.anchor_spread * normal(rng);
    }

    parallel_for(langs.size(), workers, [&](std::size_t slot) {
      auto rng = stream_engine(cfg.seed, layer, static_cast<std::uint32_t>(slot + 1));
      std::normal_distribution<double> normal;

      // The direction is drawn for core languages too, so that core
      // membership never shifts the noise stream.
      std::vector<double> offset(d);
      double norm = 0.0;
      for (auto& o : offset) {
        o = normal(rng);
        norm += o * o;
      }
      norm = std::sqrt(norm);
      const bool fragmented = !core.contains(langs[slot]);
      for (auto& o : offset) o = fragmented && norm > 0.0 ? cfg.fragment_offset * o / norm : 0.0;

      std::vector<float> values(n * d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
          const double jitter = cfg.noise * normal(rng);
          values[i * d + c] = static_cast<float>(anchors[i * d + c] + offset[c] + jitter);
        }
      }
      layers[layer * langs.size() + slot] =
          EmbeddingLayer(langs[slot], layer, n, d, std::move(values));
    });
  }

  CorpusManifest m;
  m.model_name = cfg.model_name;
  m.num_layers = cfg.num_layers;
  m.dim = d;
  m.num_samples = n;
  m.pooling = "synthetic";
  m.languages = langs;
  m.created_at = std::string(kSyntheticTimestamp);
  return EmbeddingCorpus::from_layers(std::move(m), std::move(layers));
}

std::map<LanguageId, WorldRole> world_truth(const WorldConfig& cfg) {
  cfg.validate();
  const std::set<LanguageId> core(cfg.core_languages.begin(), cfg.core_languages.end());
  std::map<LanguageId, WorldRole> out;
  for (const auto& l : cfg.resolved_languages()) {
    out.emplace(l, core.contains(l) ? WorldRole::kCore : WorldRole::kFragmented);
  }
  return out;
}

}  // namespace xling
