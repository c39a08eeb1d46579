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

#include "stealth/rng.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "stealth/bytes.hpp"
#include "stealth/hash.hpp"

namespace stealth {

void SystemRng::fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("system entropy source failed");
  }
}

DeterministicRng::DeterministicRng(uint64_t seed) {
  Bytes material;
  const char* tag = "stealth-drbg";
  material.insert(material.end(), tag, tag + std::strlen(tag));
  put_u64_be(material, seed);
  key_ = sha256(material);
}

void DeterministicRng::fill(std::span<uint8_t> out) {
  size_t i = 0;
  while (i < out.size()) {
    if (pos_ == block_.size()) {
      Bytes material(key_.begin(), key_.end());
      put_u64_be(material, counter_++);
      block_ = sha256(material);
      pos_ = 0;
    }
    size_t n = std::min(out.size() - i, block_.size() - pos_);
    std::memcpy(out.data() + i, block_.data() + pos_, n);
    i += n;
    pos_ += n;
  }
}

}  // namespace stealth
