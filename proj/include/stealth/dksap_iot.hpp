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
// Key-evolving stealth addresses for repeated low-power traffic. One ECDH
// per epoch of N transactions; inside the epoch the shared secret evolves by
// hashing, so warm transactions cost the sender 1 FP + 1 H and the receiver
// a table lookup (+ 1 FP + 1 H of precompute for the next one).
//
// Epoch state machine, counting transactions 1..N (tx i uses chain value
// h_{i-1}):
//
//   cold  (peer unknown or cnt == N): fresh ephemeral r, h_0 = H(r*V)
//         transaction carries R = r*G; destination T = h_0*G + S
//   warm  (0 < cnt < N): h_cnt = H(h_{cnt-1}) evolved on the previous step;
//         transaction omits R; destination T = h_cnt*G + S
//
// Both sides keep a per-peer counter cnt of transactions processed this
// epoch and the chain value needed for the *next* transaction. When cnt
// reaches N no hash is performed and the chain value is erased — nothing
// after the epoch depends on it, and dropping it is what makes compromise
// of a state table useless against already-recorded traffic (the chain
// cannot be run backwards). No chain value h_j with j < cnt is ever
// retained.
//
// The receiver precomputes the next expected destination T' = h*G + S and
// one-time key t' = h + s, and indexes slots by T', so matching a warm
// transaction is a constant-time table hit. A lookahead window W > 1 keeps
// the next W expected destinations live and lets the receiver resynchronize
// across up to W-1 missed transactions; W = 1 (the default) reproduces the
// one-entry behavior and the advertised per-transaction costs.
//
// Wire form of a transaction (flag 0x01 = carries ephemeral):
//
//     flag(1) || [encode(R) if flag] || encode(T) || amount 8-byte BE
//
// i.e. 1 + 2*element_size + 8 bytes cold, 1 + element_size + 8 warm. A
// non-stealth ("regular") transaction uses the identical layout with the
// flag clear, so warm stealth traffic is not distinguishable by format.
//
// State tables serialize to a versioned byte format (see state_format_* in
// dksap_iot.cpp); unknown versions, size mismatches and truncation throw
// CodecError.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "stealth/dksap.hpp"
#include "stealth/group.hpp"

namespace stealth::iot {

struct EpochConfig {
  uint32_t epoch_length = 16;  // N, transactions per ephemeral; >= 1
  uint32_t lookahead = 1;      // W, receiver window size; >= 1
};

// Ledger-level transaction record. Warm transactions have no ephemeral.
struct StealthTx {
  std::optional<GroupElement> ephemeral_pub;  // R, present iff cold
  GroupElement destination;                   // T
  uint64_t amount = 0;
};

Bytes tx_encode(const Group& g, const StealthTx& tx);
StealthTx tx_decode(const Group& g, std::span<const uint8_t> in);

// Baseline payments map onto cold-style records and back.
StealthTx to_tx(const dksap::StealthPayment& pay);
dksap::StealthPayment to_payment(const StealthTx& tx);  // throws if no ephemeral

// i-fold hash-chain image of h0 (i = 0 returns h0 unchanged). Unpriced;
// serves as the independent reference for chain agreement between the two
// sides.
Scalar epoch_chain(const Group& g, const Scalar& h0, uint32_t i);

// Sender-side per-peer table. Keys are caller-chosen labels; a send to a
// label whose stored recipient bundle differs from the one passed in starts
// a fresh epoch for the new bundle.
class SenderTable {
 public:
  struct PeerState {
    dksap::PublicBundle recipient;
    uint32_t cnt = 0;  // transactions sent this epoch
    Scalar chain;      // h_cnt (value for the next send); null once cnt == N
  };

  // Builds and returns the next transaction for `peer`, advancing state.
  // Cold: 1 RP + 2 FP + 2 H (the second H evolves the chain for the next
  // send; skipped when N == 1). Warm: 1 FP + 1 H (hash skipped on the final
  // transaction of the epoch).
  StealthTx send(GroupSession& gs, Rng& rng, std::string_view peer_id,
                 const dksap::PublicBundle& to, uint64_t amount, const EpochConfig& cfg);

  const PeerState* peer(std::string_view peer_id) const;
  size_t size() const { return peers_.size(); }

  Bytes export_state(const Group& g) const;
  static SenderTable import_state(const Group& g, std::span<const uint8_t> in);

 private:
  std::map<std::string, PeerState, std::less<>> peers_;
};

// Receiver-side table. Slots are created on cold matches and keyed by
// synthetic ids; warm matching is a hash lookup on the expected destination.
// One table serves one key bundle; always pass the same keys.
class ReceiverTable {
 public:
  struct Match {
    Scalar spend_key;   // t' with t'*G == destination
    uint64_t peer_slot; // which chain matched
    uint32_t index;     // position in the epoch, 1..N
  };

  // Cold transaction: 1 RP + 1 FP + 1 H to test the match; on match, 1 FP +
  // 1 H per precomputed window entry (W entries, clipped to the epoch end).
  // Warm transaction: free lookup; on match, window extension again at
  // 1 FP + 1 H per entry. Warm misses cost nothing.
  std::optional<Match> process(GroupSession& gs, const dksap::KeyBundle& keys,
                               const StealthTx& tx, const EpochConfig& cfg);

  size_t slot_count() const { return slots_.size(); }

  Bytes export_state(const Group& g) const;
  static ReceiverTable import_state(const Group& g, std::span<const uint8_t> in);

 private:
  struct Entry {
    uint32_t index = 0;  // epoch position this entry expects
    GroupElement expected_destination;
    Scalar spend_key;
  };
  struct Slot {
    uint32_t cnt = 0;  // transactions matched this epoch
    Scalar chain;      // value underlying the last window entry; null at end
    std::vector<Entry> window;
  };

  void index_entry(uint64_t slot_id, const Entry& e);
  void extend_window(GroupSession& gs, const dksap::KeyBundle& keys, uint64_t slot_id,
                     Slot& slot, const EpochConfig& cfg);

  std::map<uint64_t, Slot> slots_;
  uint64_t next_slot_ = 1;
  // expected destination (internal bytes) -> (slot id, epoch index)
  std::unordered_map<Bytes, std::pair<uint64_t, uint32_t>, BytesHash> lookup_;
};

// Detection-only mirror of ReceiverTable driven by an AuditorBundle. Same
// state machine and costs; entries carry no one-time spend keys and matches
// carry no key material.
class AuditorTable {
 public:
  struct Match {
    uint64_t peer_slot;
    uint32_t index;
  };

  std::optional<Match> process(GroupSession& gs, const dksap::AuditorBundle& aud,
                               const StealthTx& tx, const EpochConfig& cfg);

  size_t slot_count() const { return slots_.size(); }

  Bytes export_state(const Group& g) const;
  static AuditorTable import_state(const Group& g, std::span<const uint8_t> in);

 private:
  struct Entry {
    uint32_t index = 0;
    GroupElement expected_destination;
  };
  struct Slot {
    uint32_t cnt = 0;
    Scalar chain;
    std::vector<Entry> window;
  };

  void index_entry(uint64_t slot_id, const Entry& e);
  void extend_window(GroupSession& gs, const dksap::AuditorBundle& aud, uint64_t slot_id,
                     Slot& slot, const EpochConfig& cfg);

  std::map<uint64_t, Slot> slots_;
  uint64_t next_slot_ = 1;
  std::unordered_map<Bytes, std::pair<uint64_t, uint32_t>, BytesHash> lookup_;
};

}  // namespace stealth::iot
