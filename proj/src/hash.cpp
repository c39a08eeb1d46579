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

#include "stealth/hash.hpp"

#include <openssl/sha.h>

#include <stdexcept>

namespace stealth {

// Hashing sits on the scan hot path (one per processed transaction), so this
// calls the digest primitive directly rather than going through the
// provider-dispatch layer, whose per-call setup costs more than hashing a
// short message does.
Digest32 sha256(std::span<const uint8_t> data) {
  Digest32 out;
  if (SHA256(data.data(), data.size(), out.data()) == nullptr) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

}  // namespace stealth
