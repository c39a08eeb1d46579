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

#include <array>
#include <cstdint>
#include <span>

namespace stealth {

class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<uint8_t> out) = 0;
};

// OS entropy via the crypto library CSPRNG. Throws std::runtime_error if the
// entropy source fails.
class SystemRng final : public Rng {
 public:
  void fill(std::span<uint8_t> out) override;
};

// Deterministic stream keyed by a 64-bit seed: block i is
// SHA-256(SHA-256("stealth-drbg" || seed_be) || i_be). Identical seeds yield
// identical streams on every platform; used for reproducible traffic and
// tests, never for real keys.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(uint64_t seed);
  void fill(std::span<uint8_t> out) override;

 private:
  std::array<uint8_t, 32> key_;
  std::array<uint8_t, 32> block_{};
  uint64_t counter_ = 0;
  size_t pos_ = 32;  // forces a refill on first use
};

}  // namespace stealth
