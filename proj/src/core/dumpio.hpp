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

#ifndef XLING_CORE_DUMPIO_HPP
#define XLING_CORE_DUMPIO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "registry.hpp"

namespace xling {

// One (language, layer) matrix: `rows` parallel samples by `cols` hidden
// dimensions, row-major. Row i is the embedding of parallel sample i.
class EmbeddingLayer {
 public:
  EmbeddingLayer() = default;
  // Throws kShapeMismatch if values.size() != rows * cols, kInvalidArgument
  // for an empty shape.
  EmbeddingLayer(LanguageId language, std::uint32_t layer_index, std::size_t rows,
                 std::size_t cols, std::vector<float> values);

  const LanguageId& language() const noexcept { return language_; }
  std::uint32_t layer_index() const noexcept { return layer_index_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const float> values() const noexcept { return values_; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(values_).subspan(i * cols_, cols_);
  }

  // Throws kNonFiniteInput naming the first offending (row, col).
  void require_finite() const;

  friend bool operator==(const EmbeddingLayer&, const EmbeddingLayer&) = default;

 private:
  LanguageId language_;
  std::uint32_t layer_index_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

// Dump file layout, all integers little-endian:
//   magic "IEMB" | u16 version = 1 | u8 dtype = 1 (f32) | u8 reserved = 0 |
//   u16 code length | code bytes | u32 layer_index | u64 N | u64 d |
//   N*d f32 payload, row-major | u64 CRC-64 over everything before it
inline constexpr std::uint16_t kDumpVersion = 1;
inline constexpr std::uint8_t kDumpDtypeF32 = 1;

struct DumpHeader {
  std::string language;
  std::uint32_t layer_index = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

std::vector<std::byte> encode_layer_dump(const EmbeddingLayer& layer);
EmbeddingLayer decode_layer_dump(std::span<const std::byte> bytes,
                                 std::uint64_t* checksum = nullptr);

// Returns the trailer checksum.
std::uint64_t write_layer_dump(const EmbeddingLayer& layer,
                               const std::filesystem::path& path);
EmbeddingLayer read_layer_dump(const std::filesystem::path& path,
                               std::uint64_t* checksum = nullptr);

struct DumpRef {
  std::string path;  // relative paths resolve against the manifest directory
  std::uint64_t checksum = 0;
};

using GridKey = std::pair<LanguageId, std::uint32_t>;

struct CorpusManifest {
  std::string model_name;
  std::uint32_t num_layers = 0;
  std::uint64_t dim = 0;
  std::uint64_t num_samples = 0;
  std::string pooling;
  std::vector<LanguageId> languages;
  std::map<GridKey, DumpRef> files;
  std::string created_at;

  // Deterministic: keys in fixed order, files sorted by (language, layer).
  std::string to_json() const;
  static CorpusManifest from_json(std::string_view text);
};

// A validated language x layer grid of embeddings with shared N and d.
// Disk-backed corpora load layer payloads on demand; in-memory corpora keep
// them resident.
class EmbeddingCorpus {
 public:
  static EmbeddingCorpus load(const std::filesystem::path& manifest_path,
  // An empty file table is filled with the names and checksums write_corpus
  // would produce, so the manifest checksum survives a write and reload.
                              unsigned workers = 1);
  static EmbeddingCorpus from_layers(CorpusManifest manifest,
                                     std::vector<EmbeddingLayer> layers);

  const CorpusManifest& manifest() const noexcept { return manifest_; }
  // Sorted by code; this is the canonical language order everywhere.
  const std::vector<LanguageId>& languages() const noexcept { return languages_; }
  std::uint32_t num_layers() const noexcept { return manifest_.num_layers; }
  std::size_t num_samples() const noexcept { return manifest_.num_samples; }
  std::size_t dim() const noexcept { return manifest_.dim; }
  std::uint64_t manifest_checksum() const noexcept { return manifest_checksum_; }
  bool has_layer(std::uint32_t layer_index) const noexcept {
    return layer_index < manifest_.num_layers;
  }

  std::shared_ptr<const EmbeddingLayer> layer(const LanguageId& language,
                                              std::uint32_t layer_index) const;
  // All languages of one layer in canonical order.
  std::vector<std::shared_ptr<const EmbeddingLayer>> layer_slice(
      std::uint32_t layer_index, unsigned workers = 1) const;

 private:
  CorpusManifest manifest_;
  std::vector<LanguageId> languages_;
  std::filesystem::path base_dir_;
  std::uint64_t manifest_checksum_ = 0;
  std::map<GridKey, std::shared_ptr<const EmbeddingLayer>> resident_;
};

// Writes one dump per layer plus manifest.json (last) into `dir`. The
// manifest's files map and checksums are filled in from what was written.
CorpusManifest write_corpus(const std::filesystem::path& dir, CorpusManifest manifest,
                            std::span<const EmbeddingLayer> layers,
                            unsigned workers = 1);

CorpusManifest write_corpus(const std::filesystem::path& dir, const EmbeddingCorpus& corpus,
                            unsigned workers = 1);

std::string dump_file_name(const LanguageId& language, std::uint32_t layer_index);

}  // namespace xling

#endif  // XLING_CORE_DUMPIO_HPP
