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
// Group backends over OpenSSL's curve arithmetic. The fixed-base table and
// everything above raw point math (encodings, subgroup checks, counting,
// scalar mapping) lives here.

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "stealth/group.hpp"

namespace stealth {
namespace {

struct BnFree {
  void operator()(BIGNUM* p) const { BN_free(p); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnFree>;

struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
using PointPtr = std::unique_ptr<EC_POINT, PointFree>;

struct EcGroupFree {
  void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
using EcGroupPtr = std::unique_ptr<EC_GROUP, EcGroupFree>;

struct CtxFree {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};

// One scratch context per thread; EC point operations need one and creating
// it per call is measurable.
BN_CTX* tls_ctx() {
  thread_local std::unique_ptr<BN_CTX, CtxFree> ctx(BN_CTX_new());
  if (!ctx) throw std::bad_alloc();
  return ctx.get();
}

[[noreturn]] void fail(const char* what) {
  throw std::runtime_error(std::string("curve backend: ") + what);
}

class OpensslGroup final : public Group {
 public:
  OpensslGroup(int nid, std::string name, size_t element_size, size_t scalar_size,
               unsigned window_bits, bool compressed_wire, HashFn hash)
      : window_bits_(window_bits), compressed_wire_(compressed_wire), hash_(std::move(hash)) {
    grp_.reset(EC_GROUP_new_by_curve_name(nid));
    if (!grp_) fail("curve unavailable");
    BN_CTX* ctx = tls_ctx();

    order_.reset(BN_new());
    if (!order_ || EC_GROUP_get_order(grp_.get(), order_.get(), ctx) != 1) fail("order");

    BnPtr cof(BN_new());
    if (!cof || EC_GROUP_get_cofactor(grp_.get(), cof.get(), ctx) != 1) fail("cofactor");

    params_.name = std::move(name);
    params_.element_size = element_size;
    params_.scalar_size = scalar_size;
    params_.cofactor = static_cast<unsigned>(BN_get_word(cof.get()));
    params_.order_be.resize(scalar_size);
    if (BN_bn2binpad(order_.get(), params_.order_be.data(), static_cast<int>(scalar_size)) < 0) {
      fail("order wider than scalar size");
    }

    const EC_POINT* gen = EC_GROUP_get0_generator(grp_.get());
    internal_size_ =
        EC_POINT_point2oct(grp_.get(), gen, POINT_CONVERSION_UNCOMPRESSED, nullptr, 0, ctx);
    if (internal_size_ == 0) fail("generator encoding");
    params_.generator = to_element(gen);

    build_table(gen, ctx);
  }

  const GroupParams& params() const override { return params_; }

  Scalar scalar_from_bytes(std::span<const uint8_t> be) const override {
    BnPtr b(BN_new());
    if (!b) throw std::bad_alloc();
    if (!be.empty() && !BN_bin2bn(be.data(), static_cast<int>(be.size()), b.get())) {
      fail("bin2bn");
    }
    BnPtr r(BN_new());
    if (!r || BN_nnmod(r.get(), b.get(), order_.get(), tls_ctx()) != 1) fail("mod");
    return to_scalar(r.get());
  }

  Scalar scalar_from_u64(uint64_t v) const override {
    BnPtr b(BN_new());
    if (!b || BN_set_word(b.get(), v) != 1) fail("set_word");
    // v < n for both backends, but reduce anyway for uniformity.
    BnPtr r(BN_new());
    if (!r || BN_nnmod(r.get(), b.get(), order_.get(), tls_ctx()) != 1) fail("mod");
    return to_scalar(r.get());
  }

  Scalar scalar_add(const Scalar& a, const Scalar& b) const override {
    BnPtr ba = parse_scalar(a, true), bb = parse_scalar(b, true);
    BnPtr r(BN_new());
    if (!r || BN_mod_add(r.get(), ba.get(), bb.get(), order_.get(), tls_ctx()) != 1) {
      fail("mod_add");
    }
    return to_scalar(r.get());
  }

  Scalar scalar_negate(const Scalar& a) const override {
    BnPtr ba = parse_scalar(a, true);
    BnPtr r(BN_new());
    if (!r) throw std::bad_alloc();
    if (BN_is_zero(ba.get())) {
      BN_zero(r.get());
    } else if (BN_sub(r.get(), order_.get(), ba.get()) != 1) {
      fail("sub");
    }
    return to_scalar(r.get());
  }

  bool scalar_is_zero(const Scalar& a) const override {
    BnPtr ba = parse_scalar(a, true);
    return BN_is_zero(ba.get());
  }

  Scalar random_scalar(Rng& rng) const override {
    const unsigned bits = static_cast<unsigned>(BN_num_bits(order_.get()));
    const unsigned excess = static_cast<unsigned>(params_.scalar_size * 8) - bits;
    const uint8_t mask = static_cast<uint8_t>(0xFFu >> excess);
    Bytes buf(params_.scalar_size);
    // Rejection sampling; acceptance probability is > 1/2 per draw.
    for (int attempt = 0; attempt < 10000; ++attempt) {
      rng.fill(buf);
      buf[0] &= mask;
      BnPtr b(BN_bin2bn(buf.data(), static_cast<int>(buf.size()), nullptr));
      if (!b) fail("bin2bn");
      if (!BN_is_zero(b.get()) && BN_cmp(b.get(), order_.get()) < 0) {
        return to_scalar(b.get());
      }
    }
    throw std::runtime_error("random scalar rejection loop exhausted (broken rng?)");
  }

  Scalar scalar_decode(std::span<const uint8_t> in) const override {
    if (in.size() != params_.scalar_size) throw CodecError("bad scalar length");
    BnPtr b(BN_bin2bn(in.data(), static_cast<int>(in.size()), nullptr));
    if (!b) fail("bin2bn");
    if (BN_cmp(b.get(), order_.get()) >= 0) throw CodecError("scalar out of range");
    return to_scalar(b.get());
  }

  GroupElement mul(const Scalar& k, const GroupElement& p) const override {
    if (p.is_identity()) throw std::invalid_argument("cannot multiply the identity");
    BnPtr kb = parse_scalar(k, false);
    PointPtr pp = parse_internal(p);
    PointPtr r(EC_POINT_new(grp_.get()));
    if (!r || EC_POINT_mul(grp_.get(), r.get(), nullptr, pp.get(), kb.get(), tls_ctx()) != 1) {
      fail("point mul");
    }
    return to_element(r.get());
  }

  GroupElement mul_base(const Scalar& k) const override {
    BnPtr kb = parse_scalar(k, false);
    BN_CTX* ctx = tls_ctx();
    PointPtr acc(EC_POINT_new(grp_.get()));
    if (!acc || EC_POINT_set_to_infinity(grp_.get(), acc.get()) != 1) fail("infinity");
    const unsigned windows = static_cast<unsigned>(table_.size());
    for (unsigned w = 0; w < windows; ++w) {
      unsigned digit = 0;
      for (unsigned b = 0; b < window_bits_; ++b) {
        if (BN_is_bit_set(kb.get(), static_cast<int>(w * window_bits_ + b))) {
          digit |= 1u << b;
        }
      }
      if (digit != 0 &&
          EC_POINT_add(grp_.get(), acc.get(), acc.get(), table_[w][digit - 1].get(), ctx) != 1) {
        fail("table add");
      }
    }
    return to_element(acc.get());
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const override {
    if (a.is_identity()) return b;
    if (b.is_identity()) return a;
    PointPtr pa = parse_internal(a), pb = parse_internal(b);
    PointPtr r(EC_POINT_new(grp_.get()));
    if (!r || EC_POINT_add(grp_.get(), r.get(), pa.get(), pb.get(), tls_ctx()) != 1) {
      fail("point add");
    }
    return to_element(r.get());
  }

  GroupElement negate(const GroupElement& a) const override {
    if (a.is_identity()) return a;
    PointPtr pa = parse_internal(a);
    if (EC_POINT_invert(grp_.get(), pa.get(), tls_ctx()) != 1) fail("invert");
    return to_element(pa.get());
  }

  Bytes encode(const GroupElement& p) const override {
    if (p.is_identity()) throw std::invalid_argument("the identity has no wire encoding");
    PointPtr pp = parse_internal(p);
    BN_CTX* ctx = tls_ctx();
    if (compressed_wire_) {
      Bytes out(params_.element_size);
      if (EC_POINT_point2oct(grp_.get(), pp.get(), POINT_CONVERSION_COMPRESSED, out.data(),
                             out.size(), ctx) != out.size()) {
        fail("point2oct");
      }
      return out;
    }
    // Raw coordinates: uncompressed form without its one-byte type prefix.
    Bytes tmp(internal_size_);
    if (EC_POINT_point2oct(grp_.get(), pp.get(), POINT_CONVERSION_UNCOMPRESSED, tmp.data(),
                           tmp.size(), ctx) != tmp.size()) {
      fail("point2oct");
    }
    return Bytes(tmp.begin() + 1, tmp.end());
  }

  GroupElement decode(std::span<const uint8_t> in) const override {
    if (in.size() != params_.element_size) throw CodecError("bad element length");
    BN_CTX* ctx = tls_ctx();
    PointPtr p(EC_POINT_new(grp_.get()));
    if (!p) throw std::bad_alloc();
    int ok;
    if (compressed_wire_) {
      ok = EC_POINT_oct2point(grp_.get(), p.get(), in.data(), in.size(), ctx);
    } else {
      Bytes buf;
      buf.reserve(in.size() + 1);
      buf.push_back(0x04);
      buf.insert(buf.end(), in.begin(), in.end());
      ok = EC_POINT_oct2point(grp_.get(), p.get(), buf.data(), buf.size(), ctx);
    }
    if (ok != 1) throw CodecError("not a valid curve point");
    if (EC_POINT_is_at_infinity(grp_.get(), p.get())) throw CodecError("identity element");
    if (params_.cofactor != 1) {
      // Membership in the prime-order subgroup: n*P must vanish.
      PointPtr t(EC_POINT_new(grp_.get()));
      if (!t ||
          EC_POINT_mul(grp_.get(), t.get(), nullptr, p.get(), order_.get(), ctx) != 1) {
        fail("subgroup check");
      }
      if (!EC_POINT_is_at_infinity(grp_.get(), t.get())) {
        throw CodecError("point outside the prime-order subgroup");
      }
    }
    return to_element(p.get());
  }

  Scalar hash_to_scalar(std::span<const uint8_t> data) const override {
    if (data.empty()) throw std::invalid_argument("empty hash input");
    Digest32 d = hash_(data);
    // Left-padded to scalar width, the digest is below n for all but a
    // ~2^-128 sliver of inputs (always, when scalars are wider than the
    // digest), making the reduction the identity; use the bytes directly and
    // keep the bignum machinery off the scan hot path.
    if (params_.scalar_size >= d.size()) {
      Bytes out(params_.scalar_size, 0);
      std::copy(d.begin(), d.end(), out.end() - static_cast<ptrdiff_t>(d.size()));
      if (std::lexicographical_compare(out.begin(), out.end(), params_.order_be.begin(),
                                       params_.order_be.end()) &&
          std::any_of(out.begin(), out.end(), [](uint8_t b) { return b != 0; })) {
        return detail::RawAccess::scalar(std::move(out));
      }
    }
    BnPtr r = digest_mod_order(d);
    // Zero is unusable as a key component; negligible case, handled by
    // re-hashing with an appended retry counter.
    for (int counter = 1; BN_is_zero(r.get()); ++counter) {
      if (counter > 255) throw std::runtime_error("hash_to_scalar cannot leave zero");
      Bytes retry(data.begin(), data.end());
      retry.push_back(static_cast<uint8_t>(counter));
      d = hash_(retry);
      r = digest_mod_order(d);
    }
    return to_scalar(r.get());
  }

 private:
  void build_table(const EC_POINT* gen, BN_CTX* ctx) {
    const unsigned bits = static_cast<unsigned>(BN_num_bits(order_.get()));
    const unsigned windows = (bits + window_bits_ - 1) / window_bits_;
    const size_t per_window = (size_t{1} << window_bits_) - 1;
    table_.resize(windows);
    PointPtr base(EC_POINT_dup(gen, grp_.get()));
    if (!base) throw std::bad_alloc();
    for (unsigned w = 0; w < windows; ++w) {
      table_[w].reserve(per_window);
      PointPtr cur(EC_POINT_dup(base.get(), grp_.get()));
      if (!cur) throw std::bad_alloc();
      for (size_t d = 1; d <= per_window; ++d) {
        PointPtr copy(EC_POINT_dup(cur.get(), grp_.get()));
        if (!copy) throw std::bad_alloc();
        table_[w].push_back(std::move(copy));  // holds d * 2^(w*width) * G
        if (EC_POINT_add(grp_.get(), cur.get(), cur.get(), base.get(), ctx) != 1) {
          fail("table build");
        }
      }
      base = std::move(cur);  // now 2^((w+1)*width) * G
    }

    // Batch-normalize the whole table to affine coordinates (one shared
    // inversion), so each table lookup in mul_base hits the mixed-addition
    // fast path instead of a full projective addition.
    std::vector<EC_POINT*> flat;
    flat.reserve(size_t{windows} * per_window);
    for (auto& window : table_) {
      for (auto& p : window) flat.push_back(p.get());
    }
    if (EC_POINTs_make_affine(grp_.get(), flat.size(), flat.data(), ctx) != 1) {
      fail("table normalization");
    }
  }

  BnPtr digest_mod_order(const Digest32& d) const {
    BnPtr b(BN_bin2bn(d.data(), static_cast<int>(d.size()), nullptr));
    if (!b) fail("bin2bn");
    BnPtr r(BN_new());
    if (!r || BN_nnmod(r.get(), b.get(), order_.get(), tls_ctx()) != 1) fail("mod");
    return r;
  }

  BnPtr parse_scalar(const Scalar& k, bool allow_zero) const {
    if (k.bytes().size() != params_.scalar_size) {
      throw std::invalid_argument("scalar is null or from another backend");
    }
    BnPtr b(BN_bin2bn(k.bytes().data(), static_cast<int>(k.bytes().size()), nullptr));
    if (!b) fail("bin2bn");
    if (BN_cmp(b.get(), order_.get()) >= 0) {
      throw std::invalid_argument("scalar out of range");
    }
    if (!allow_zero && BN_is_zero(b.get())) {
      throw std::invalid_argument("zero scalar where nonzero required");
    }
    return b;
  }

  Scalar to_scalar(const BIGNUM* b) const {
    Bytes out(params_.scalar_size);
    if (BN_bn2binpad(b, out.data(), static_cast<int>(out.size())) < 0) fail("bn2binpad");
    return detail::RawAccess::scalar(std::move(out));
  }

  PointPtr parse_internal(const GroupElement& p) const {
    PointPtr pp(EC_POINT_new(grp_.get()));
    if (!pp) throw std::bad_alloc();
    if (p.internal_bytes().size() != internal_size_ ||
        EC_POINT_oct2point(grp_.get(), pp.get(), p.internal_bytes().data(),
                           p.internal_bytes().size(), tls_ctx()) != 1) {
      throw std::invalid_argument("element from another backend or corrupted");
    }
    return pp;
  }

  GroupElement to_element(const EC_POINT* p) const {
    if (EC_POINT_is_at_infinity(grp_.get(), p)) return {};
    Bytes out(internal_size_);
    if (EC_POINT_point2oct(grp_.get(), p, POINT_CONVERSION_UNCOMPRESSED, out.data(), out.size(),
                           tls_ctx()) != out.size()) {
      fail("point2oct");
    }
    return detail::RawAccess::element(std::move(out));
  }

  EcGroupPtr grp_;
  BnPtr order_;
  GroupParams params_;
  unsigned window_bits_;
  bool compressed_wire_;
  HashFn hash_;
  size_t internal_size_ = 0;
  std::vector<std::vector<PointPtr>> table_;
};

}  // namespace

std::shared_ptr<const Group> make_group(std::string_view backend, HashFn hash) {
  if (!hash) throw std::invalid_argument("null hash function");
  if (backend == "secp256k1") {
    return std::make_shared<OpensslGroup>(NID_secp256k1, "secp256k1", 33, 32, 8, true,
                                          std::move(hash));
  }
  if (backend == "sect283k1") {
    return std::make_shared<OpensslGroup>(NID_sect283k1, "sect283k1", 72, 36, 10, false,
                                          std::move(hash));
  }
  throw std::invalid_argument("unknown group backend: " + std::string(backend));
}

std::shared_ptr<const Group> make_group(std::string_view backend) {
  return make_group(backend, [](std::span<const uint8_t> d) { return sha256(d); });
}

std::shared_ptr<const Group> shared_group(std::string_view backend) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const Group>> cache;
  std::string key(backend);
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto g = make_group(backend);
  cache.emplace(std::move(key), g);
  return g;
}

std::vector<std::string> group_backends() { return {"secp256k1", "sect283k1"}; }

}  // namespace stealth
