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

#ifndef XLING_CORE_ERROR_HPP
#define XLING_CORE_ERROR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xling {

// Numeric values are mirrored by xling_status in the C header and must stay
// in sync with it.
enum class ErrorCode : int {
  kOk = 0,
  // registry
  kDuplicateLanguage = 10,
  kInvalidMetadata = 11,
  kParseError = 12,
  kSelfPair = 13,
  kUnknownLanguage = 14,
  // dumpio
  kNonFiniteInput = 20,
  kIoError = 21,
  kBadMagic = 22,
  kUnsupportedVersion = 23,
  kCorruptDump = 24,
  kTruncatedDump = 25,
  kMissingDump = 26,
  kShapeMismatch = 27,
  kIncompleteGrid = 28,
  kInvalidManifest = 29,
  // knn / ilo
  kZeroVector = 30,
  kInvalidK = 31,
  kEmptyInput = 32,
  kOutOfRange = 33,
  kInvalidParams = 34,
  // anc
  kInsufficientSamples = 40,
  kInsufficientLayers = 41,
  // synth
  kInvalidConfig = 50,
  // report
  kParamMismatch = 60,
  kDuplicateLayer = 61,
  kNoOverlap = 62,
  kInvalidReport = 63,
  // generic
  kInvalidArgument = 90,
  kInternal = 99,
};

enum class ErrorCategory { kUsage, kData, kInternal };

std::string_view error_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

// Single exception type for the core. The optional language/layer fields let
// callers report which grid cell of a corpus was at fault.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Error(ErrorCode code, const std::string& message, std::string language,
        std::optional<std::uint32_t> layer)
      : std::runtime_error(message),
        code_(code),
        language_(std::move(language)),
        layer_(layer) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& language() const noexcept { return language_; }
  std::optional<std::uint32_t> layer() const noexcept { return layer_; }
  std::optional<std::uint64_t> index() const noexcept { return index_; }

  Error& with_index(std::uint64_t index) {
    index_ = index;
    return *this;
  }

 private:
  ErrorCode code_;
  std::string language_;
  std::optional<std::uint32_t> layer_;
  std::optional<std::uint64_t> index_;
};

}  // namespace xling

#endif  // XLING_CORE_ERROR_HPP
