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

#include "checksum.hpp"

#include <boost/crc.hpp>
#include <charconv>

namespace xling {

using Crc64Engine = boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL,
                                       0xFFFFFFFFFFFFFFFFULL,
                                       0xFFFFFFFFFFFFFFFFULL, true, true>;

struct Crc64::Impl {
  Crc64Engine engine;
};

Crc64::Crc64() : impl_(std::make_unique<Impl>()) {}
Crc64::~Crc64() = default;

void Crc64::update(std::span<const std::byte> bytes) {
  impl_->engine.process_bytes(bytes.data(), bytes.size());
}

std::uint64_t Crc64::value() const { return impl_->engine.checksum(); }

std::uint64_t crc64(std::span<const std::byte> bytes) {
  Crc64 crc;
  crc.update(bytes);
  return crc.value();
}

std::uint64_t crc64(std::string_view text) {
  return crc64(std::as_bytes(std::span(text.data(), text.size())));
}

std::string checksum_to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

bool checksum_from_hex(std::string_view text, std::uint64_t& out) {
  if (text.starts_with("0x")) text.remove_prefix(2);
  if (text.size() != 16) return false;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  out = v;
  return true;
}

}  // namespace xling
