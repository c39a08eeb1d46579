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
#include <functional>

#include "stealth/bytes.hpp"

namespace stealth {

using Digest32 = std::array<uint8_t, 32>;

// Any 256-bit hash usable as the protocol hash H. Must be collision
// resistant; the toolkit treats it as a black box.
using HashFn = std::function<Digest32(std::span<const uint8_t>)>;

Digest32 sha256(std::span<const uint8_t> data);

}  // namespace stealth
