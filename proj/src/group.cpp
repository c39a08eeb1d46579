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

#include "stealth/group.hpp"

#include <cstdio>

namespace stealth {

std::string to_string(const OpCounters& c) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "{rp=%llu fp=%llu h=%llu}",
                static_cast<unsigned long long>(c.rp), static_cast<unsigned long long>(c.fp),
                static_cast<unsigned long long>(c.h));
  return buf;
}

Bytes Group::scalar_encode(const Scalar& a) const {
  if (a.bytes().size() != params().scalar_size) {
    throw std::invalid_argument("scalar is null or from another backend");
  }
  return a.bytes();
}

}  // namespace stealth
