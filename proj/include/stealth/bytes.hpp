// Copyright (c) 2026 The stealth-toolkit Authors.
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

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stealth {

using Bytes = std::vector<uint8_t>;

// Malformed serialized data (wire transactions, state files, ledger files,
// point/scalar encodings). Distinct from a clean protocol no-match, which is
// reported through std::optional.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void put_u16_be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32_be(Bytes& out, uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64_be(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// Cursor over an immutable byte buffer; every read checks the remaining
// length and throws CodecError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  std::span<const uint8_t> take(size_t n) {
    if (remaining() < n) throw CodecError("truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  uint8_t u8() { return take(1)[0]; }

  uint16_t u16_be() {
    auto b = take(2);
    return static_cast<uint16_t>((b[0] << 8) | b[1]);
  }

  uint32_t u32_be() {
    auto b = take(4);
    uint32_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
  }

  uint64_t u64_be() {
    auto b = take(8);
    uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
  }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);  // throws CodecError

struct BytesHash {
  size_t operator()(const Bytes& b) const {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(b.data()), b.size()));
  }
};

}  // namespace stealth
