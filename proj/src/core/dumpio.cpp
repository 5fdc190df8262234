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

#include "dumpio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "checksum.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace xling {
namespace {

constexpr std::array<std::byte, 4> kMagic{std::byte{'I'}, std::byte{'E'},
                                          std::byte{'M'}, std::byte{'B'}};
// magic + version + dtype + reserved + code length
constexpr std::size_t kFixedPrefix = 4 + 2 + 1 + 1 + 2;

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::byte>& out) : out_(out) {}

  void bytes(std::span<const std::byte> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(std::byte{v}); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) {
      out_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
    }
  }
  std::vector<std::byte>& out_;
};

std::uint64_t read_le(std::span<const std::byte> bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + static_cast<std::size_t>(i)]) << (8 * i);
  }
  return v;
}

std::string cell_name(const LanguageId& language, std::uint32_t layer) {
  return "(" + language.str() + ", layer " + std::to_string(layer) + ")";
}

[[noreturn]] void rethrow_for_cell(const Error& e, const LanguageId& language,
                                   std::uint32_t layer) {
  throw Error(e.code(), cell_name(language, layer) + ": " + e.what(), language.str(), layer);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::byte> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<std::byte> data(size);
  in.seekg(0);
  if (size > 0 && !in.read(reinterpret_cast<char*>(data.data()),
                           static_cast<std::streamsize>(size))) {
    throw Error(ErrorCode::kIoError, "failed reading '" + path.string() + "'");
  }
  return data;
}

// Writes to a sibling temporary and renames, so a reader never sees a
// half-written file.
void write_file_atomically(const std::filesystem::path& path, std::span<const std::byte> data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

bool parse_grid_key(const std::string& key, GridKey& out) {
  const auto colon = key.rfind(':');
  if (colon == std::string::npos) return false;
  const std::string code = key.substr(0, colon);
  const std::string layer = key.substr(colon + 1);
  if (!LanguageId::is_valid(code) || layer.empty() || layer.size() > 9) return false;
  if (!std::all_of(layer.begin(), layer.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  out = GridKey{LanguageId(code), static_cast<std::uint32_t>(std::stoul(layer))};
  return true;
}

std::vector<LanguageId> canonical_languages(const CorpusManifest& m) {
  if (m.languages.empty()) {
    throw Error(ErrorCode::kInvalidManifest, "manifest lists no languages");
  }
  std::vector<LanguageId> sorted = m.languages;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw Error(ErrorCode::kInvalidManifest,
                "language '" + dup->str() + "' listed twice in manifest", dup->str(),
                std::nullopt);
  }
  if (m.num_layers == 0 || m.dim == 0 || m.num_samples == 0) {
    throw Error(ErrorCode::kInvalidManifest,
                "manifest num_layers, dim and num_samples must all be positive");
  }
  return sorted;
}

void require_complete_file_grid(const CorpusManifest& m, const std::vector<LanguageId>& langs) {
  for (const auto& lang : langs) {
    for (std::uint32_t layer = 0; layer < m.num_layers; ++layer) {
      if (!m.files.contains(GridKey{lang, layer})) {
        throw Error(ErrorCode::kIncompleteGrid,
                    "manifest has no dump for " + cell_name(lang, layer), lang.str(), layer);
      }
    }
  }
  for (const auto& [key, ref] : m.files) {
    const bool known = std::binary_search(langs.begin(), langs.end(), key.first);
    if (!known || key.second >= m.num_layers) {
      throw Error(ErrorCode::kIncompleteGrid,
                  "manifest entry " + cell_name(key.first, key.second) +
                      " lies outside the declared language x layer grid",
                  key.first.str(), key.second);
    }
  }
}

void require_layer_shape(const CorpusManifest& m, const EmbeddingLayer& layer) {
  if (layer.rows() != m.num_samples || layer.cols() != m.dim) {
    throw Error(ErrorCode::kShapeMismatch,
                cell_name(layer.language(), layer.layer_index()) + " has shape " +
                    std::to_string(layer.rows()) + "x" + std::to_string(layer.cols()) +
                    ", expected " + std::to_string(m.num_samples) + "x" +
                    std::to_string(m.dim),
                layer.language().str(), layer.layer_index());
  }
}

// Checks that `layers` covers the manifest's grid exactly once with matching
// shapes, and returns the layers' positions in canonical order.
std::vector<std::size_t> require_complete_layer_grid(const CorpusManifest& m,
                                                     const std::vector<LanguageId>& langs,
                                                     std::span<const EmbeddingLayer> layers) {
  std::map<GridKey, std::size_t> seen;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    GridKey key{l.language(), l.layer_index()};
    if (!std::binary_search(langs.begin(), langs.end(), key.first) ||
        key.second >= m.num_layers) {
      throw Error(ErrorCode::kIncompleteGrid,
                  cell_name(key.first, key.second) + " lies outside the declared grid",
                  key.first.str(), key.second);
    }
    if (!seen.emplace(key, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  cell_name(key.first, key.second) + " supplied twice", key.first.str(),
                  key.second);
    }
    require_layer_shape(m, l);
  }
  std::vector<std::size_t> order;
  order.reserve(langs.size() * m.num_layers);
  for (const auto& lang : langs) {
    for (std::uint32_t layer = 0; layer < m.num_layers; ++layer) {
      auto it = seen.find(GridKey{lang, layer});
      if (it == seen.end()) {
        throw Error(ErrorCode::kIncompleteGrid, "no layer supplied for " + cell_name(lang, layer),
                    lang.str(), layer);
      }
      order.push_back(it->second);
    }
  }
  return order;
}

}  // namespace

EmbeddingLayer::EmbeddingLayer(LanguageId language, std::uint32_t layer_index,
                               std::size_t rows, std::size_t cols, std::vector<float> values)
    : language_(std::move(language)),
      layer_index_(layer_index),
      rows_(rows),
      cols_(cols),
      values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding layer must have N >= 1 and d >= 1");
  }
  if (values_.size() / cols_ != rows_ || values_.size() % cols_ != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "embedding layer holds " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

void EmbeddingLayer::require_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteInput,
                  "non-finite value at row " + std::to_string(i / cols_) + ", column " +
                      std::to_string(i % cols_) + " of " +
                      cell_name(language_, layer_index_),
                  language_.str(), layer_index_);
    }
  }
}

std::vector<std::byte> encode_layer_dump(const EmbeddingLayer& layer) {
  layer.require_finite();
  const auto& code = layer.language().str();
  std::vector<std::byte> out;
  out.reserve(kFixedPrefix + code.size() + 20 + layer.values().size() * 4 + 8);
  ByteWriter w(out);
  w.bytes(kMagic);
  w.u16(kDumpVersion);
  w.u8(kDumpDtypeF32);
  w.u8(0);
  w.u16(static_cast<std::uint16_t>(code.size()));
  w.bytes(std::as_bytes(std::span(code.data(), code.size())));
  w.u32(layer.layer_index());
  w.u64(layer.rows());
  w.u64(layer.cols());
  for (float v : layer.values()) w.f32(v);
  w.u64(crc64(out));
  return out;
}

EmbeddingLayer decode_layer_dump(std::span<const std::byte> bytes, std::uint64_t* checksum) {
  if (bytes.size() < kMagic.size()) {
    throw Error(ErrorCode::kTruncatedDump, "dump shorter than its magic number");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kBadMagic, "not an IEMB dump (bad magic)");
  }
  if (bytes.size() < kFixedPrefix + 8) {
    throw Error(ErrorCode::kTruncatedDump, "dump header truncated");
  }
  // A file whose trailer matches its own contents is intact; otherwise every
  // header field is suspect and only a clean header with a short body is
  // reported as truncation.
  const std::uint64_t stored = read_le(bytes, bytes.size() - 8, 8);
  const std::uint64_t actual = crc64(bytes.first(bytes.size() - 8));
  const bool intact = stored == actual;
  auto damaged = [&](ErrorCode code, const std::string& message) {
    if (intact) throw Error(code, message);
    throw Error(ErrorCode::kCorruptDump, message + " (checksum mismatch: stored " +
                                             checksum_to_hex(stored) + ", computed " +
                                             checksum_to_hex(actual) + ")");
  };

  const auto version = static_cast<std::uint16_t>(read_le(bytes, 4, 2));
  if (version != kDumpVersion) {
    damaged(ErrorCode::kUnsupportedVersion, "unsupported dump version " + std::to_string(version));
  }
  const auto dtype = static_cast<std::uint8_t>(bytes[6]);
  if (dtype != kDumpDtypeF32) {
    damaged(ErrorCode::kUnsupportedVersion, "unsupported dump dtype " + std::to_string(dtype));
  }
  if (bytes[7] != std::byte{0}) damaged(ErrorCode::kCorruptDump, "reserved header byte is not zero");
  const std::size_t code_len = read_le(bytes, 8, 2);
  const std::size_t header_len = kFixedPrefix + code_len + 4 + 8 + 8;
  if (bytes.size() < header_len + 8) {
    throw Error(intact ? ErrorCode::kCorruptDump : ErrorCode::kTruncatedDump,
                "dump header overruns the file");
  }
  const std::string code(reinterpret_cast<const char*>(bytes.data() + kFixedPrefix), code_len);
  if (!LanguageId::is_valid(code)) {
    damaged(ErrorCode::kCorruptDump, "dump carries malformed language code '" + code + "'");
  }
  std::size_t off = kFixedPrefix + code_len;
  const auto layer_index = static_cast<std::uint32_t>(read_le(bytes, off, 4));
  const std::uint64_t rows = read_le(bytes, off + 4, 8);
  const std::uint64_t cols = read_le(bytes, off + 12, 8);
  if (rows == 0 || cols == 0) damaged(ErrorCode::kCorruptDump, "dump declares an empty matrix");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (rows > kMax / cols || rows * cols > (kMax - header_len - 8) / 4) {
    damaged(ErrorCode::kCorruptDump, "dump declares an impossible matrix size");
  }
  const std::uint64_t payload_len = rows * cols * 4;
  const std::uint64_t expected = header_len + payload_len + 8;
  if (bytes.size() < expected) {
    throw Error(intact ? ErrorCode::kCorruptDump : ErrorCode::kTruncatedDump,
                "dump has " + std::to_string(bytes.size()) + " bytes, header implies " +
                    std::to_string(expected));
  }
  if (bytes.size() > expected) {
    damaged(ErrorCode::kCorruptDump, "dump has trailing bytes after its checksum");
  }
  if (!intact) damaged(ErrorCode::kCorruptDump, "dump payload damaged");

  std::vector<float> values(rows * cols);
  off = header_len;
  for (auto& v : values) {
    v = std::bit_cast<float>(static_cast<std::uint32_t>(read_le(bytes, off, 4)));
    off += 4;
  }
  EmbeddingLayer layer(LanguageId(code), layer_index, rows, cols, std::move(values));
  layer.require_finite();
  if (checksum != nullptr) *checksum = stored;
  return layer;
}

std::uint64_t write_layer_dump(const EmbeddingLayer& layer, const std::filesystem::path& path) {
  auto bytes = encode_layer_dump(layer);
  write_file_atomically(path, bytes);
  return read_le(bytes, bytes.size() - 8, 8);
}

EmbeddingLayer read_layer_dump(const std::filesystem::path& path, std::uint64_t* checksum) {
  auto bytes = read_binary_file(path);
  return decode_layer_dump(bytes, checksum);
}

std::string CorpusManifest::to_json() const {
  nlohmann::ordered_json j;
  j["model_name"] = model_name;
  j["num_layers"] = num_layers;
  j["dim"] = dim;
  j["num_samples"] = num_samples;
  j["pooling"] = pooling;
  auto langs = nlohmann::ordered_json::array();
  for (const auto& l : languages) langs.push_back(l.str());
  j["languages"] = std::move(langs);
  auto files_json = nlohmann::ordered_json::object();
  for (const auto& [key, ref] : files) {
    files_json[key.first.str() + ":" + std::to_string(key.second)] = {
        {"path", ref.path}, {"checksum", checksum_to_hex(ref.checksum)}};
  }
  j["files"] = std::move(files_json);
  j["created_at"] = created_at;
  return j.dump(2) + "\n";
}

CorpusManifest CorpusManifest::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidManifest, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidManifest, "manifest must be a JSON object");

  auto field = [&](const char* name) -> const nlohmann::json& {
    auto it = j.find(name);
    if (it == j.end()) {
      throw Error(ErrorCode::kInvalidManifest, std::string("manifest lacks '") + name + "'");
    }
    return *it;
  };
  auto string_field = [&](const char* name) {
    const auto& v = field(name);
    if (!v.is_string()) {
      throw Error(ErrorCode::kInvalidManifest, std::string("'") + name + "' must be a string");
    }
    return v.get<std::string>();
  };
  auto count_field = [&](const char* name) {
    const auto& v = field(name);
    if (!v.is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidManifest,
                  std::string("'") + name + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  CorpusManifest m;
  m.model_name = string_field("model_name");
  const auto layers = count_field("num_layers");
  if (layers > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidManifest, "'num_layers' out of range");
  }
  m.num_layers = static_cast<std::uint32_t>(layers);
  m.dim = count_field("dim");
  m.num_samples = count_field("num_samples");
  m.pooling = string_field("pooling");
  m.created_at = string_field("created_at");

  const auto& langs = field("languages");
  if (!langs.is_array()) throw Error(ErrorCode::kInvalidManifest, "'languages' must be an array");
  for (const auto& l : langs) {
    if (!l.is_string() || !LanguageId::is_valid(l.get<std::string>())) {
      throw Error(ErrorCode::kInvalidManifest, "'languages' holds a malformed language code");
    }
    m.languages.emplace_back(l.get<std::string>());
  }

  const auto& files = field("files");
  if (!files.is_object()) throw Error(ErrorCode::kInvalidManifest, "'files' must be an object");
  for (const auto& [key, value] : files.items()) {
    GridKey gk;
    if (!parse_grid_key(key, gk)) {
      throw Error(ErrorCode::kInvalidManifest, "bad files key '" + key + "', expected 'lang:layer'");
    }
    if (!value.is_object() || !value.contains("path") || !value["path"].is_string() ||
        !value.contains("checksum") || !value["checksum"].is_string()) {
      throw Error(ErrorCode::kInvalidManifest, "files['" + key + "'] needs string path and checksum");
    }
    DumpRef ref;
    ref.path = value["path"].get<std::string>();
    if (!checksum_from_hex(value["checksum"].get<std::string>(), ref.checksum)) {
      throw Error(ErrorCode::kInvalidManifest,
                  "files['" + key + "'].checksum must be 16 hex digits");
    }
    m.files.emplace(std::move(gk), std::move(ref));
  }
  return m;
}

EmbeddingCorpus EmbeddingCorpus::load(const std::filesystem::path& manifest_path,
                                      unsigned workers) {
  if (!std::filesystem::exists(manifest_path)) {
    throw Error(ErrorCode::kIoError, "manifest '" + manifest_path.string() + "' does not exist");
  }
  const std::string text = read_text_file(manifest_path);

  EmbeddingCorpus corpus;
  corpus.manifest_ = CorpusManifest::from_json(text);
  corpus.manifest_checksum_ = crc64(text);
  corpus.base_dir_ = manifest_path.parent_path();
  corpus.languages_ = canonical_languages(corpus.manifest_);
  require_complete_file_grid(corpus.manifest_, corpus.languages_);

  const auto& m = corpus.manifest_;
  const auto& langs = corpus.languages_;
  const std::size_t cells = langs.size() * m.num_layers;
  parallel_for(cells, workers, [&](std::size_t i) {
    const auto& lang = langs[i / m.num_layers];
    const auto layer_index = static_cast<std::uint32_t>(i % m.num_layers);
    // Reading through layer() applies the same checks as on-demand loads.
    corpus.layer(lang, layer_index);
  });
  return corpus;
}

EmbeddingCorpus EmbeddingCorpus::from_layers(CorpusManifest manifest,
                                             std::vector<EmbeddingLayer> layers) {
  EmbeddingCorpus corpus;
  corpus.languages_ = canonical_languages(manifest);
  require_complete_layer_grid(manifest, corpus.languages_, layers);
  const bool describe_files = manifest.files.empty();
  for (auto& l : layers) {
    l.require_finite();
    GridKey key{l.language(), l.layer_index()};
    if (describe_files) {
      const auto bytes = encode_layer_dump(l);
      manifest.files.emplace(key, DumpRef{dump_file_name(l.language(), l.layer_index()),
                                          read_le(bytes, bytes.size() - 8, 8)});
    }
    corpus.resident_.emplace(std::move(key), std::make_shared<const EmbeddingLayer>(std::move(l)));
  }
  corpus.manifest_ = std::move(manifest);
  corpus.manifest_checksum_ = crc64(corpus.manifest_.to_json());
  return corpus;
}

std::shared_ptr<const EmbeddingLayer> EmbeddingCorpus::layer(const LanguageId& language,
                                                             std::uint32_t layer_index) const {
  if (!std::binary_search(languages_.begin(), languages_.end(), language) ||
      layer_index >= manifest_.num_layers) {
    throw Error(ErrorCode::kIncompleteGrid,
                "corpus has no " + cell_name(language, layer_index), language.str(), layer_index);
  }
  GridKey key{language, layer_index};
  if (auto it = resident_.find(key); it != resident_.end()) return it->second;

  const auto fit = manifest_.files.find(key);
  if (fit == manifest_.files.end()) {
    throw Error(ErrorCode::kIncompleteGrid, "manifest has no dump for " + cell_name(language, layer_index),
                language.str(), layer_index);
  }
  std::filesystem::path path = fit->second.path;
  if (path.is_relative()) path = base_dir_ / path;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingDump,
                "dump for " + cell_name(language, layer_index) + " not found at '" +
                    path.string() + "'",
                language.str(), layer_index);
  }

  std::uint64_t checksum = 0;
  EmbeddingLayer loaded;
  try {
    loaded = read_layer_dump(path, &checksum);
  } catch (const Error& e) {
    rethrow_for_cell(e, language, layer_index);
  }
  if (loaded.language() != language || loaded.layer_index() != layer_index) {
    throw Error(ErrorCode::kShapeMismatch,
                "dump at '" + path.string() + "' holds " +
                    cell_name(loaded.language(), loaded.layer_index()) + ", manifest expects " +
                    cell_name(language, layer_index),
                language.str(), layer_index);
  }
  if (checksum != fit->second.checksum) {
    throw Error(ErrorCode::kCorruptDump,
                cell_name(language, layer_index) + ": dump checksum " + checksum_to_hex(checksum) +
                    " differs from manifest " + checksum_to_hex(fit->second.checksum),
                language.str(), layer_index);
  }
  require_layer_shape(manifest_, loaded);
  return std::make_shared<const EmbeddingLayer>(std::move(loaded));
}

std::vector<std::shared_ptr<const EmbeddingLayer>> EmbeddingCorpus::layer_slice(
    std::uint32_t layer_index, unsigned workers) const {
  if (!has_layer(layer_index)) {
    throw Error(ErrorCode::kIncompleteGrid,
                "corpus has no layer " + std::to_string(layer_index), "", layer_index);
  }
  std::vector<std::shared_ptr<const EmbeddingLayer>> out(languages_.size());
  parallel_for(languages_.size(), workers,
               [&](std::size_t i) { out[i] = layer(languages_[i], layer_index); });
  return out;
}

std::string dump_file_name(const LanguageId& language, std::uint32_t layer_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03u", layer_index);
  return language.str() + ".L" + buf + ".iemb";
}

namespace {

CorpusManifest write_layers(const std::filesystem::path& dir, CorpusManifest manifest,
                            const std::vector<const EmbeddingLayer*>& ordered, unsigned workers) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create '" + dir.string() + "': " + ec.message());
  }

  std::vector<std::uint64_t> checksums(ordered.size());
  parallel_for(ordered.size(), workers, [&](std::size_t i) {
    const auto& l = *ordered[i];
    checksums[i] = write_layer_dump(l, dir / dump_file_name(l.language(), l.layer_index()));
  });

  manifest.files.clear();
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& l = *ordered[i];
    manifest.files.emplace(GridKey{l.language(), l.layer_index()},
                           DumpRef{dump_file_name(l.language(), l.layer_index()), checksums[i]});
  }
  const std::string text = manifest.to_json();
  write_file_atomically(dir / "manifest.json",
                        std::as_bytes(std::span(text.data(), text.size())));
  return manifest;
}

}  // namespace

CorpusManifest write_corpus(const std::filesystem::path& dir, CorpusManifest manifest,
                            std::span<const EmbeddingLayer> layers, unsigned workers) {
  const auto langs = canonical_languages(manifest);
  const auto order = require_complete_layer_grid(manifest, langs, layers);
  std::vector<const EmbeddingLayer*> ordered;
  ordered.reserve(order.size());
  for (auto i : order) ordered.push_back(&layers[i]);
  return write_layers(dir, std::move(manifest), ordered, workers);
}

CorpusManifest write_corpus(const std::filesystem::path& dir, const EmbeddingCorpus& corpus,
                            unsigned workers) {
  std::vector<std::shared_ptr<const EmbeddingLayer>> keep;
  std::vector<const EmbeddingLayer*> ordered;
  for (const auto& lang : corpus.languages()) {
    for (std::uint32_t layer = 0; layer < corpus.num_layers(); ++layer) {
      keep.push_back(corpus.layer(lang, layer));
      ordered.push_back(keep.back().get());
    }
  }
  return write_layers(dir, corpus.manifest(), ordered, workers);
}

}  // namespace xling
