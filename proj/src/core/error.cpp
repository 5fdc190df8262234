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

#include "error.hpp"

namespace xling {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kDuplicateLanguage: return "DuplicateLanguage";
    case ErrorCode::kInvalidMetadata: return "InvalidMetadata";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSelfPair: return "SelfPair";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kCorruptDump: return "CorruptDump";
    case ErrorCode::kTruncatedDump: return "TruncatedDump";
    case ErrorCode::kMissingDump: return "MissingDump";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kIncompleteGrid: return "IncompleteGrid";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kInsufficientLayers: return "InsufficientLayers";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kDuplicateLayer: return "DuplicateLayer";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kInvalidReport: return "InvalidReport";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidK:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kUsage;
    case ErrorCode::kInternal:
      return ErrorCategory::kInternal;
    default:
      return ErrorCategory::kData;
  }
}

}  // namespace xling
