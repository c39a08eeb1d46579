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

#include "stealth/dksap.hpp"

namespace stealth::dksap {

namespace {

void check_payment(const StealthPayment& pay) {
  if (pay.ephemeral_pub.is_identity() || pay.destination.is_identity()) {
    throw std::invalid_argument("malformed payment: identity point");
  }
}

}  // namespace

KeyBundle keygen(GroupSession& gs, Rng& rng) {
  KeyBundle kb;
  kb.scan_priv = gs.random_scalar(rng);
  kb.scan_pub = gs.mul_base(kb.scan_priv);
  do {
    kb.spend_priv = gs.random_scalar(rng);
  } while (kb.spend_priv == kb.scan_priv);
  kb.spend_pub = gs.mul_base(kb.spend_priv);
  return kb;
}

bool validate_keys(const Group& g, const KeyBundle& kb) {
  if (kb.scan_priv == kb.spend_priv) return false;
  return g.mul(kb.scan_priv, g.generator()) == kb.scan_pub &&
         g.mul(kb.spend_priv, g.generator()) == kb.spend_pub;
}

Scalar shared_secret_from_sender(GroupSession& gs, const Scalar& ephemeral_priv,
                                 const GroupElement& scan_pub) {
  // c = H(rV)
  return gs.hash_to_scalar(gs.encode(gs.mul(ephemeral_priv, scan_pub)));
}

Scalar shared_secret_from_receiver(GroupSession& gs, const Scalar& scan_priv,
                                   const GroupElement& ephemeral_pub) {
  // c = H(vR) = H(vrG) = H(rV)
  return gs.hash_to_scalar(gs.encode(gs.mul(scan_priv, ephemeral_pub)));
}

StealthPayment build_payment(GroupSession& gs, const PublicBundle& to, uint64_t amount,
                             Rng& rng) {
  if (to.scan_pub.is_identity() || to.spend_pub.is_identity()) {
    throw std::invalid_argument("malformed recipient bundle: identity point");
  }
  StealthPayment pay;
  Scalar r = gs.random_scalar(rng);
  pay.ephemeral_pub = gs.mul_base(r);  // R = rG
  Scalar c = shared_secret_from_sender(gs, r, to.scan_pub);
  pay.destination = gs.add(gs.mul_base(c), to.spend_pub);  // T = cG + S
  if (pay.destination.is_identity()) {
    // Only reachable if S == -cG; no honest bundle can arrange this.
    throw std::runtime_error("degenerate destination");
  }
  pay.amount = amount;
  return pay;
}

std::optional<ScanMatch> scan_payment(GroupSession& gs, const KeyBundle& keys,
                                      const StealthPayment& pay) {
  check_payment(pay);
  Scalar c = shared_secret_from_receiver(gs, keys.scan_priv, pay.ephemeral_pub);
  GroupElement expect = gs.add(gs.mul_base(c), keys.spend_pub);
  if (expect != pay.destination) return std::nullopt;
  Scalar t = gs.scalar_add(c, keys.spend_priv);  // t = c + s, tG == T
  if (gs.group().scalar_is_zero(t)) return std::nullopt;  // tG would be the identity
  return ScanMatch{std::move(t)};
}

std::optional<AuditorMatch> auditor_scan_payment(GroupSession& gs, const AuditorBundle& aud,
                                                 const StealthPayment& pay) {
  check_payment(pay);
  Scalar c = shared_secret_from_receiver(gs, aud.scan_priv, pay.ephemeral_pub);
  GroupElement expect = gs.add(gs.mul_base(c), aud.spend_pub);
  if (expect != pay.destination) return std::nullopt;
  return AuditorMatch{};
}

Bytes payment_encode(const Group& g, const StealthPayment& pay) {
  Bytes out = g.encode(pay.ephemeral_pub);
  Bytes dest = g.encode(pay.destination);
  out.insert(out.end(), dest.begin(), dest.end());
  put_u64_be(out, pay.amount);
  return out;
}

StealthPayment payment_decode(const Group& g, std::span<const uint8_t> in) {
  const size_t L = g.params().element_size;
  if (in.size() != 2 * L + 8) throw CodecError("bad payment length");
  ByteReader rd(in);
  StealthPayment pay;
  pay.ephemeral_pub = g.decode(rd.take(L));
  pay.destination = g.decode(rd.take(L));
  pay.amount = rd.u64_be();
  return pay;
}

}  // namespace stealth::dksap
