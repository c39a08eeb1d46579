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
//
// Prime-order group abstraction with separately priced operation classes:
//
//   RP — random-point scalar multiplication  k*P, generic double-and-add
//   FP — fixed-base scalar multiplication    k*G, precomputed-table walk
//   H  — hash of a group element or byte string onto a nonzero scalar
//
// Point addition, negation, scalar arithmetic and (de)serialization are
// treated as free. Counting happens per GroupSession, never globally, so
// independent protocol actors sharing one Group get independent tallies.
//
// Backends (all wrap the system crypto library's curve arithmetic; the
// fixed-base table is built here, not borrowed):
//
//   secp256k1  (default)  wire element: 33-byte compressed SEC1
//                         scalar: 32-byte big-endian, cofactor 1
//   sect283k1             wire element: 72-byte raw x||y coordinates
//                         scalar: 36-byte big-endian, cofactor 4
//                         (decode enforces membership in the prime-order
//                         subgroup: n*P must be the identity)
//
// Fixed-base tables use a fixed-window decomposition: table[w][d] holds
// (d+1)*2^(w*width)*G, so k*G is a sum of at most ceil(bits/width) stored
// points. Window widths are implementation constants: 8 for secp256k1
// (32 windows x 255 points), 10 for sect283k1 (29 windows x 1023 points).
// Building the table costs one-time work at Group construction; after that
// an FP multiply is a few dozen additions and measurably cheaper than RP.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stealth/bytes.hpp"
#include "stealth/hash.hpp"
#include "stealth/rng.hpp"

namespace stealth {

namespace detail {
struct RawAccess;
}

// Scalar in [0, n). Canonical fixed-length big-endian bytes; produced only
// by Group operations, which enforce reduction mod n at construction.
class Scalar {
 public:
  Scalar() = default;  // null (no value); group ops reject it

  const Bytes& bytes() const { return b_; }
  bool is_null() const { return b_.empty(); }

  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  explicit Scalar(Bytes b) : b_(std::move(b)) {}
  friend struct detail::RawAccess;
  Bytes b_;
};

// Group element. Default-constructed is the identity; otherwise holds the
// backend's canonical internal encoding (not the wire form — use
// Group::encode for that). Byte-wise equality is value equality.
class GroupElement {
 public:
  GroupElement() = default;  // identity

  bool is_identity() const { return b_.empty(); }
  const Bytes& internal_bytes() const { return b_; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  explicit GroupElement(Bytes b) : b_(std::move(b)) {}
  friend struct detail::RawAccess;
  Bytes b_;
};

struct GroupParams {
  std::string name;
  size_t element_size = 0;  // wire encoding length in bytes
  size_t scalar_size = 0;   // scalar encoding length in bytes
  Bytes order_be;           // subgroup order n, big-endian, scalar_size bytes
  unsigned cofactor = 0;
  GroupElement generator;
};

// Tally of priced operations. Everything else is free.
struct OpCounters {
  uint64_t rp = 0;  // random-point multiplies
  uint64_t fp = 0;  // fixed-base multiplies
  uint64_t h = 0;   // hashes onto scalars

  friend bool operator==(const OpCounters&, const OpCounters&) = default;

  OpCounters& operator+=(const OpCounters& o) {
    rp += o.rp;
    fp += o.fp;
    h += o.h;
    return *this;
  }
  friend OpCounters operator+(OpCounters a, const OpCounters& b) { return a += b; }
  // Delta between two snapshots; requires *this >= o component-wise.
  friend OpCounters operator-(const OpCounters& a, const OpCounters& b) {
    return {a.rp - b.rp, a.fp - b.fp, a.h - b.h};
  }
};

std::string to_string(const OpCounters& c);

// Immutable once constructed; safe to share across threads. All scalar and
// element arguments must come from the same Group instance family (same
// backend); mixing backends is undefined.
//
// Error idiom: std::invalid_argument for contract violations (null/zero
// scalar where nonzero required, identity where a proper point is required,
// wrong-size input), CodecError for malformed serialized data.
class Group {
 public:
  virtual ~Group() = default;

  virtual const GroupParams& params() const = 0;

  // --- scalars -----------------------------------------------------------
  // Reduces arbitrary big-endian bytes mod n.
  virtual Scalar scalar_from_bytes(std::span<const uint8_t> be) const = 0;
  virtual Scalar scalar_from_u64(uint64_t v) const = 0;
  virtual Scalar scalar_add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar scalar_negate(const Scalar& a) const = 0;
  virtual bool scalar_is_zero(const Scalar& a) const = 0;
  // Uniform in [1, n) by rejection sampling on the masked top byte.
  virtual Scalar random_scalar(Rng& rng) const = 0;
  // Strict: input must be exactly scalar_size bytes and < n, else CodecError.
  virtual Scalar scalar_decode(std::span<const uint8_t> in) const = 0;
  // Fixed-length big-endian, scalar_size bytes.
  Bytes scalar_encode(const Scalar& a) const;

  // --- elements ----------------------------------------------------------
  const GroupElement& generator() const { return params().generator; }
  static GroupElement identity() { return {}; }

  // k*P by generic multiplication. P must not be the identity, k nonzero.
  virtual GroupElement mul(const Scalar& k, const GroupElement& p) const = 0;
  // k*G through the precomputed table. k nonzero.
  virtual GroupElement mul_base(const Scalar& k) const = 0;
  virtual GroupElement add(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement negate(const GroupElement& a) const = 0;

  // Wire encoding, element_size bytes. The identity has no wire form and is
  // rejected with std::invalid_argument.
  virtual Bytes encode(const GroupElement& p) const = 0;
  // Strict decode: exact length, on curve, in the prime-order subgroup, not
  // the identity; anything else throws CodecError.
  virtual GroupElement decode(std::span<const uint8_t> in) const = 0;

  // Digest of `data` mapped to a scalar in [1, n): big-endian digest reduced
  // mod n; in the negligible zero case, re-hash with a one-byte counter
  // appended. Rejects empty input.
  virtual Scalar hash_to_scalar(std::span<const uint8_t> data) const = 0;
};

// Fresh group with the default hash (SHA-256) or a caller-supplied hash.
// Building a group pays the one-time fixed-base table cost.
// Backends: "secp256k1", "sect283k1". Unknown names throw std::invalid_argument.
std::shared_ptr<const Group> make_group(std::string_view backend);
std::shared_ptr<const Group> make_group(std::string_view backend, HashFn hash);
// Process-wide memoized instance per backend (default hash), so the table
// is built once per process.
std::shared_ptr<const Group> shared_group(std::string_view backend);
std::vector<std::string> group_backends();

// Per-actor view of a Group that prices operations. Cheap to construct; one
// per protocol participant (or per benchmark run). Not thread-safe; distinct
// sessions over one shared Group are independent.
class GroupSession {
 public:
  explicit GroupSession(std::shared_ptr<const Group> g) : g_(std::move(g)) {
    if (!g_) throw std::invalid_argument("null group");
  }

  const Group& group() const { return *g_; }
  const std::shared_ptr<const Group>& group_ptr() const { return g_; }
  const GroupParams& params() const { return g_->params(); }

  // Priced.
  GroupElement mul(const Scalar& k, const GroupElement& p) {
    ++c_.rp;
    return g_->mul(k, p);
  }
  GroupElement mul_base(const Scalar& k) {
    ++c_.fp;
    return g_->mul_base(k);
  }
  Scalar hash_to_scalar(std::span<const uint8_t> data) {
    ++c_.h;
    return g_->hash_to_scalar(data);
  }

  // Free.
  GroupElement add(const GroupElement& a, const GroupElement& b) const { return g_->add(a, b); }
  GroupElement negate(const GroupElement& a) const { return g_->negate(a); }
  Scalar scalar_add(const Scalar& a, const Scalar& b) const { return g_->scalar_add(a, b); }
  Scalar scalar_negate(const Scalar& a) const { return g_->scalar_negate(a); }
  Scalar random_scalar(Rng& rng) const { return g_->random_scalar(rng); }
  Bytes encode(const GroupElement& p) const { return g_->encode(p); }
  GroupElement decode(std::span<const uint8_t> in) const { return g_->decode(in); }
  const GroupElement& generator() const { return g_->generator(); }

  OpCounters counters() const { return c_; }
  void reset_counters() { c_ = {}; }

 private:
  std::shared_ptr<const Group> g_;
  OpCounters c_;
};

namespace detail {
// Construction backdoor for backends and codecs. Not for protocol code.
struct RawAccess {
  static Scalar scalar(Bytes b) { return Scalar(std::move(b)); }
  static GroupElement element(Bytes b) { return GroupElement(std::move(b)); }
};
}  // namespace detail

}  // namespace stealth
