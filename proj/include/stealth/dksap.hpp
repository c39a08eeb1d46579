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
// Dual-key stealth addresses. The receiver holds a scan pair (v, V) and a
// spend pair (s, S); the published address is (V, S). Per payment the sender
// draws an ephemeral r and publishes R = r*G next to the one-time
// destination
//
//     T = H(r*V)*G + S,
//
// which the receiver recognizes by recomputing c = H(v*R) and spends with
// t = c + s (t*G == T). A delegate holding only (v, S) can recognize
// payments but never derive t.
//
// Per-payment priced cost: sender 1 RP + 2 FP + 1 H, receiver (per scanned
// transaction) 1 RP + 1 FP + 1 H, spend-key recovery free.
//
// Wire form of a payment (2*element_size + 8 bytes):
//
//     encode(R) || encode(T) || amount as 8-byte big-endian

#pragma once

#include <cstdint>
#include <optional>

#include "stealth/group.hpp"

namespace stealth::dksap {

// Receiver's published address: scan and spend public keys.
struct PublicBundle {
  GroupElement scan_pub;   // V = v*G
  GroupElement spend_pub;  // S = s*G
};

// Detection-only credentials for a delegated scanner. Contains the scan
// secret and the spend *public* key; holders can match payments but the
// spend secret is absent by construction, so spend keys cannot leave here.
struct AuditorBundle {
  Scalar scan_priv;        // v
  GroupElement spend_pub;  // S
};

struct KeyBundle {
  Scalar scan_priv;        // v
  GroupElement scan_pub;   // V = v*G
  Scalar spend_priv;       // s
  GroupElement spend_pub;  // S = s*G

  PublicBundle public_bundle() const { return {scan_pub, spend_pub}; }
  AuditorBundle auditor_bundle() const { return {scan_priv, spend_pub}; }
};

struct StealthPayment {
  GroupElement ephemeral_pub;  // R = r*G
  GroupElement destination;    // T = H(r*V)*G + S
  uint64_t amount = 0;
};

// Receiver match: the recovered one-time spend key t with t*G == destination.
struct ScanMatch {
  Scalar spend_key;
};

// Auditor match carries no key material at all.
struct AuditorMatch {
  friend bool operator==(const AuditorMatch&, const AuditorMatch&) = default;
};

// Draws v, s independently from rng; priced 2 FP.
KeyBundle keygen(GroupSession& gs, Rng& rng);

// Definitional consistency: V == v*G, S == s*G, v != s. Unpriced.
bool validate_keys(const Group& g, const KeyBundle& kb);

// c = H(encode(r*V)) — sender side of the shared secret. 1 RP + 1 H.
Scalar shared_secret_from_sender(GroupSession& gs, const Scalar& ephemeral_priv,
                                 const GroupElement& scan_pub);
// c = H(encode(v*R)) — receiver side. 1 RP + 1 H.
Scalar shared_secret_from_receiver(GroupSession& gs, const Scalar& scan_priv,
                                   const GroupElement& ephemeral_pub);

// Fresh ephemeral per call; never reuses r. 1 RP + 2 FP + 1 H.
StealthPayment build_payment(GroupSession& gs, const PublicBundle& to, uint64_t amount,
                             Rng& rng);

// Returns the recovered spend key on match, nullopt otherwise. Malformed
// payments (identity points) throw instead of reporting no-match.
// 1 RP + 1 FP + 1 H per call regardless of outcome.
std::optional<ScanMatch> scan_payment(GroupSession& gs, const KeyBundle& keys,
                                      const StealthPayment& pay);

// Detection with (v, S) only. Same cost shape as scan_payment.
std::optional<AuditorMatch> auditor_scan_payment(GroupSession& gs, const AuditorBundle& aud,
                                                 const StealthPayment& pay);

Bytes payment_encode(const Group& g, const StealthPayment& pay);
StealthPayment payment_decode(const Group& g, std::span<const uint8_t> in);

}  // namespace stealth::dksap
