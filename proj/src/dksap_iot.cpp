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
// State file format (all integers big-endian):
//
//   header:  "SKST" || version u8 = 1 || kind u8 (1 sender, 2 receiver,
//            3 auditor) || element_size u16 || scalar_size u16 ||
//            record_count u32
//   record:  id_len u16 || id bytes || cnt u32 || has_chain u8 ||
//            [chain scalar] || kind-specific body
//
//   sender body:    encode(scan_pub) || encode(spend_pub)
//                   (id is the caller's peer label)
//   receiver body:  entry_count u16 || { index u32 || encode(T') || t' }*
//                   (id is the 8-byte slot number)
//   auditor body:   entry_count u16 || { index u32 || encode(T') }*
//
// Wrong magic/version/kind/sizes, truncation, trailing bytes, out-of-range
// scalars and off-curve points all throw CodecError.

#include "stealth/dksap_iot.hpp"

#include <algorithm>

namespace stealth::iot {

namespace {

constexpr uint8_t kFlagCold = 0x01;

constexpr char kStateMagic[4] = {'S', 'K', 'S', 'T'};
constexpr uint8_t kStateVersion = 1;
constexpr uint8_t kKindSender = 1;
constexpr uint8_t kKindReceiver = 2;
constexpr uint8_t kKindAuditor = 3;

void check_cfg(const EpochConfig& cfg) {
  if (cfg.epoch_length < 1) throw std::invalid_argument("epoch length must be >= 1");
  if (cfg.lookahead < 1) throw std::invalid_argument("lookahead must be >= 1");
}

// next chain value: H over the scalar's canonical bytes
Scalar chain_step(GroupSession& gs, const Scalar& h) {
  return gs.hash_to_scalar(gs.group().scalar_encode(h));
}

void put_state_header(const Group& g, Bytes& out, uint8_t kind, uint32_t records) {
  out.insert(out.end(), kStateMagic, kStateMagic + 4);
  out.push_back(kStateVersion);
  out.push_back(kind);
  put_u16_be(out, static_cast<uint16_t>(g.params().element_size));
  put_u16_be(out, static_cast<uint16_t>(g.params().scalar_size));
  put_u32_be(out, records);
}

uint32_t take_state_header(const Group& g, ByteReader& rd, uint8_t want_kind) {
  auto magic = rd.take(4);
  if (!std::equal(magic.begin(), magic.end(), kStateMagic)) throw CodecError("bad state magic");
  if (rd.u8() != kStateVersion) throw CodecError("unknown state version");
  if (rd.u8() != want_kind) throw CodecError("state table kind mismatch");
  if (rd.u16_be() != g.params().element_size || rd.u16_be() != g.params().scalar_size) {
    throw CodecError("state written for another backend");
  }
  return rd.u32_be();
}

void put_chain(const Group& g, Bytes& out, const Scalar& chain) {
  if (chain.is_null()) {
    out.push_back(0);
  } else {
    out.push_back(1);
    Bytes s = g.scalar_encode(chain);
    out.insert(out.end(), s.begin(), s.end());
  }
}

Scalar take_chain(const Group& g, ByteReader& rd) {
  uint8_t present = rd.u8();
  if (present > 1) throw CodecError("bad chain presence byte");
  if (present == 0) return {};
  return g.scalar_decode(rd.take(g.params().scalar_size));
}

void put_element(const Group& g, Bytes& out, const GroupElement& p) {
  Bytes e = g.encode(p);
  out.insert(out.end(), e.begin(), e.end());
}

}  // namespace

Bytes tx_encode(const Group& g, const StealthTx& tx) {
  Bytes out;
  out.push_back(tx.ephemeral_pub ? kFlagCold : 0x00);
  if (tx.ephemeral_pub) put_element(g, out, *tx.ephemeral_pub);
  put_element(g, out, tx.destination);
  put_u64_be(out, tx.amount);
  return out;
}

StealthTx tx_decode(const Group& g, std::span<const uint8_t> in) {
  const size_t L = g.params().element_size;
  ByteReader rd(in);
  uint8_t flag = rd.u8();
  if (flag > kFlagCold) throw CodecError("bad transaction flag");
  StealthTx tx;
  if (flag == kFlagCold) tx.ephemeral_pub = g.decode(rd.take(L));
  tx.destination = g.decode(rd.take(L));
  tx.amount = rd.u64_be();
  if (!rd.done()) throw CodecError("trailing bytes in transaction");
  return tx;
}

StealthTx to_tx(const dksap::StealthPayment& pay) {
  return {pay.ephemeral_pub, pay.destination, pay.amount};
}

dksap::StealthPayment to_payment(const StealthTx& tx) {
  if (!tx.ephemeral_pub) {
    throw std::invalid_argument("transaction carries no ephemeral key");
  }
  return {*tx.ephemeral_pub, tx.destination, tx.amount};
}

Scalar epoch_chain(const Group& g, const Scalar& h0, uint32_t i) {
  Scalar cur = h0;
  for (uint32_t k = 0; k < i; ++k) {
    cur = g.hash_to_scalar(g.scalar_encode(cur));
  }
  return cur;
}

// --- SenderTable -----------------------------------------------------------

StealthTx SenderTable::send(GroupSession& gs, Rng& rng, std::string_view peer_id,
                            const dksap::PublicBundle& to, uint64_t amount,
                            const EpochConfig& cfg) {
  check_cfg(cfg);
  if (to.scan_pub.is_identity() || to.spend_pub.is_identity()) {
    throw std::invalid_argument("malformed recipient bundle: identity point");
  }

  auto it = peers_.find(peer_id);
  const bool warm =
      it != peers_.end() && it->second.recipient.scan_pub == to.scan_pub &&
      it->second.recipient.spend_pub == to.spend_pub && it->second.cnt < cfg.epoch_length;

  StealthTx tx;
  tx.amount = amount;
  if (warm) {
    PeerState& st = it->second;
    // T = h_cnt*G + S; then evolve (or close the epoch)
    tx.destination = gs.add(gs.mul_base(st.chain), to.spend_pub);
    st.cnt += 1;
    st.chain = st.cnt < cfg.epoch_length ? chain_step(gs, st.chain) : Scalar{};
  } else {
    // fresh epoch: R = rG, h_0 = H(rV), T = h_0*G + S
    Scalar r = gs.random_scalar(rng);
    tx.ephemeral_pub = gs.mul_base(r);
    Scalar h0 = gs.hash_to_scalar(gs.encode(gs.mul(r, to.scan_pub)));
    tx.destination = gs.add(gs.mul_base(h0), to.spend_pub);
    PeerState st;
    st.recipient = to;
    st.cnt = 1;
    st.chain = st.cnt < cfg.epoch_length ? chain_step(gs, h0) : Scalar{};
    peers_.insert_or_assign(std::string(peer_id), std::move(st));
  }
  if (tx.destination.is_identity()) throw std::runtime_error("degenerate destination");
  return tx;
}

const SenderTable::PeerState* SenderTable::peer(std::string_view peer_id) const {
  auto it = peers_.find(peer_id);
  return it == peers_.end() ? nullptr : &it->second;
}

Bytes SenderTable::export_state(const Group& g) const {
  Bytes out;
  put_state_header(g, out, kKindSender, static_cast<uint32_t>(peers_.size()));
  for (const auto& [id, st] : peers_) {
    put_u16_be(out, static_cast<uint16_t>(id.size()));
    out.insert(out.end(), id.begin(), id.end());
    put_u32_be(out, st.cnt);
    put_chain(g, out, st.chain);
    put_element(g, out, st.recipient.scan_pub);
    put_element(g, out, st.recipient.spend_pub);
  }
  return out;
}

SenderTable SenderTable::import_state(const Group& g, std::span<const uint8_t> in) {
  const size_t L = g.params().element_size;
  ByteReader rd(in);
  uint32_t records = take_state_header(g, rd, kKindSender);
  SenderTable tab;
  for (uint32_t i = 0; i < records; ++i) {
    uint16_t id_len = rd.u16_be();
    auto id_bytes = rd.take(id_len);
    std::string id(id_bytes.begin(), id_bytes.end());
    PeerState st;
    st.cnt = rd.u32_be();
    st.chain = take_chain(g, rd);
    st.recipient.scan_pub = g.decode(rd.take(L));
    st.recipient.spend_pub = g.decode(rd.take(L));
    if (!tab.peers_.emplace(std::move(id), std::move(st)).second) {
      throw CodecError("duplicate peer record");
    }
  }
  if (!rd.done()) throw CodecError("trailing bytes in state");
  return tab;
}

// --- ReceiverTable ----------------------------------------------------------

void ReceiverTable::index_entry(uint64_t slot_id, const Entry& e) {
  lookup_.insert_or_assign(e.expected_destination.internal_bytes(),
                           std::make_pair(slot_id, e.index));
}

// Precompute expected destinations up to min(cnt + W, N). On entry
// slot.chain is the value underlying the last precomputed entry (or, with an
// empty window, underlying transaction `cnt` itself).
void ReceiverTable::extend_window(GroupSession& gs, const dksap::KeyBundle& keys,
                                  uint64_t slot_id, Slot& slot, const EpochConfig& cfg) {
  uint32_t covered = slot.window.empty() ? slot.cnt : slot.window.back().index;
  uint32_t target = std::min<uint64_t>(uint64_t{slot.cnt} + cfg.lookahead, cfg.epoch_length);
  for (uint32_t idx = covered + 1; idx <= target; ++idx) {
    slot.chain = chain_step(gs, slot.chain);  // h_{idx-1}
    Entry e;
    e.index = idx;
    e.expected_destination = gs.add(gs.mul_base(slot.chain), keys.spend_pub);
    e.spend_key = gs.scalar_add(slot.chain, keys.spend_priv);
    index_entry(slot_id, e);
    slot.window.push_back(std::move(e));
  }
  if (slot.window.empty()) slot.chain = Scalar{};  // epoch over; erase
}

std::optional<ReceiverTable::Match> ReceiverTable::process(GroupSession& gs,
                                                           const dksap::KeyBundle& keys,
                                                           const StealthTx& tx,
                                                           const EpochConfig& cfg) {
  check_cfg(cfg);
  if (tx.destination.is_identity()) throw std::invalid_argument("malformed tx: identity point");

  if (tx.ephemeral_pub) {
    if (tx.ephemeral_pub->is_identity()) {
      throw std::invalid_argument("malformed tx: identity ephemeral");
    }
    // cold: h_0 = H(vR), expect T == h_0*G + S
    Scalar h0 = gs.hash_to_scalar(gs.encode(gs.mul(keys.scan_priv, *tx.ephemeral_pub)));
    GroupElement expect = gs.add(gs.mul_base(h0), keys.spend_pub);
    if (expect != tx.destination) return std::nullopt;
    Scalar t = gs.scalar_add(h0, keys.spend_priv);
    if (gs.group().scalar_is_zero(t)) return std::nullopt;
    uint64_t id = next_slot_++;
    Slot slot;
    slot.cnt = 1;
    slot.chain = h0;
    extend_window(gs, keys, id, slot, cfg);
    slots_.emplace(id, std::move(slot));
    return Match{std::move(t), id, 1};
  }

  // warm: constant-time table hit on the expected destination
  auto found = lookup_.find(tx.destination.internal_bytes());
  if (found == lookup_.end()) return std::nullopt;
  auto [slot_id, index] = found->second;
  Slot& slot = slots_.at(slot_id);
  if (slot.cnt >= cfg.epoch_length) return std::nullopt;

  Scalar t;
  for (auto& e : slot.window) {
    if (e.index == index) {
      t = std::move(e.spend_key);
      break;
    }
  }
  // consume the hit and anything it skipped past
  for (const auto& e : slot.window) {
    if (e.index > index) break;
    auto it = lookup_.find(e.expected_destination.internal_bytes());
    if (it != lookup_.end() && it->second == std::make_pair(slot_id, e.index)) {
      lookup_.erase(it);
    }
  }
  std::erase_if(slot.window, [&](const Entry& e) { return e.index <= index; });
  slot.cnt = index;
  extend_window(gs, keys, slot_id, slot, cfg);
  return Match{std::move(t), slot_id, index};
}

Bytes ReceiverTable::export_state(const Group& g) const {
  Bytes out;
  put_state_header(g, out, kKindReceiver, static_cast<uint32_t>(slots_.size()));
  for (const auto& [id, slot] : slots_) {
    put_u16_be(out, 8);
    put_u64_be(out, id);
    put_u32_be(out, slot.cnt);
    put_chain(g, out, slot.chain);
    put_u16_be(out, static_cast<uint16_t>(slot.window.size()));
    for (const Entry& e : slot.window) {
      put_u32_be(out, e.index);
      put_element(g, out, e.expected_destination);
      Bytes s = g.scalar_encode(e.spend_key);
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

ReceiverTable ReceiverTable::import_state(const Group& g, std::span<const uint8_t> in) {
  const size_t L = g.params().element_size;
  ByteReader rd(in);
  uint32_t records = take_state_header(g, rd, kKindReceiver);
  ReceiverTable tab;
  uint64_t max_id = 0;
  for (uint32_t i = 0; i < records; ++i) {
    if (rd.u16_be() != 8) throw CodecError("bad slot id length");
    uint64_t id = rd.u64_be();
    Slot slot;
    slot.cnt = rd.u32_be();
    slot.chain = take_chain(g, rd);
    uint16_t entries = rd.u16_be();
    for (uint16_t k = 0; k < entries; ++k) {
      Entry e;
      e.index = rd.u32_be();
      e.expected_destination = g.decode(rd.take(L));
      e.spend_key = g.scalar_decode(rd.take(g.params().scalar_size));
      tab.index_entry(id, e);
      slot.window.push_back(std::move(e));
    }
    if (!tab.slots_.emplace(id, std::move(slot)).second) {
      throw CodecError("duplicate slot record");
    }
    max_id = std::max(max_id, id);
  }
  if (!rd.done()) throw CodecError("trailing bytes in state");
  tab.next_slot_ = max_id + 1;
  return tab;
}

// --- AuditorTable -----------------------------------------------------------

void AuditorTable::index_entry(uint64_t slot_id, const Entry& e) {
  lookup_.insert_or_assign(e.expected_destination.internal_bytes(),
                           std::make_pair(slot_id, e.index));
}

void AuditorTable::extend_window(GroupSession& gs, const dksap::AuditorBundle& aud,
                                 uint64_t slot_id, Slot& slot, const EpochConfig& cfg) {
  uint32_t covered = slot.window.empty() ? slot.cnt : slot.window.back().index;
  uint32_t target = std::min<uint64_t>(uint64_t{slot.cnt} + cfg.lookahead, cfg.epoch_length);
  for (uint32_t idx = covered + 1; idx <= target; ++idx) {
    slot.chain = chain_step(gs, slot.chain);
    Entry e;
    e.index = idx;
    e.expected_destination = gs.add(gs.mul_base(slot.chain), aud.spend_pub);
    index_entry(slot_id, e);
    slot.window.push_back(std::move(e));
  }
  if (slot.window.empty()) slot.chain = Scalar{};
}

std::optional<AuditorTable::Match> AuditorTable::process(GroupSession& gs,
                                                         const dksap::AuditorBundle& aud,
                                                         const StealthTx& tx,
                                                         const EpochConfig& cfg) {
  check_cfg(cfg);
  if (tx.destination.is_identity()) throw std::invalid_argument("malformed tx: identity point");

  if (tx.ephemeral_pub) {
    if (tx.ephemeral_pub->is_identity()) {
      throw std::invalid_argument("malformed tx: identity ephemeral");
    }
    Scalar h0 = gs.hash_to_scalar(gs.encode(gs.mul(aud.scan_priv, *tx.ephemeral_pub)));
    GroupElement expect = gs.add(gs.mul_base(h0), aud.spend_pub);
    if (expect != tx.destination) return std::nullopt;
    uint64_t id = next_slot_++;
    Slot slot;
    slot.cnt = 1;
    slot.chain = h0;
    extend_window(gs, aud, id, slot, cfg);
    slots_.emplace(id, std::move(slot));
    return Match{id, 1};
  }

  auto found = lookup_.find(tx.destination.internal_bytes());
  if (found == lookup_.end()) return std::nullopt;
  auto [slot_id, index] = found->second;
  Slot& slot = slots_.at(slot_id);
  if (slot.cnt >= cfg.epoch_length) return std::nullopt;

  for (const auto& e : slot.window) {
    if (e.index > index) break;
    auto it = lookup_.find(e.expected_destination.internal_bytes());
    if (it != lookup_.end() && it->second == std::make_pair(slot_id, e.index)) {
      lookup_.erase(it);
    }
  }
  std::erase_if(slot.window, [&](const Entry& e) { return e.index <= index; });
  slot.cnt = index;
  extend_window(gs, aud, slot_id, slot, cfg);
  return Match{slot_id, index};
}

Bytes AuditorTable::export_state(const Group& g) const {
  Bytes out;
  put_state_header(g, out, kKindAuditor, static_cast<uint32_t>(slots_.size()));
  for (const auto& [id, slot] : slots_) {
    put_u16_be(out, 8);
    put_u64_be(out, id);
    put_u32_be(out, slot.cnt);
    put_chain(g, out, slot.chain);
    put_u16_be(out, static_cast<uint16_t>(slot.window.size()));
    for (const Entry& e : slot.window) {
      put_u32_be(out, e.index);
      put_element(g, out, e.expected_destination);
    }
  }
  return out;
}

AuditorTable AuditorTable::import_state(const Group& g, std::span<const uint8_t> in) {
  const size_t L = g.params().element_size;
  ByteReader rd(in);
  uint32_t records = take_state_header(g, rd, kKindAuditor);
  AuditorTable tab;
  uint64_t max_id = 0;
  for (uint32_t i = 0; i < records; ++i) {
    if (rd.u16_be() != 8) throw CodecError("bad slot id length");
    uint64_t id = rd.u64_be();
    Slot slot;
    slot.cnt = rd.u32_be();
    slot.chain = take_chain(g, rd);
    uint16_t entries = rd.u16_be();
    for (uint16_t k = 0; k < entries; ++k) {
      Entry e;
      e.index = rd.u32_be();
      e.expected_destination = g.decode(rd.take(L));
      tab.index_entry(id, e);
      slot.window.push_back(std::move(e));
    }
    if (!tab.slots_.emplace(id, std::move(slot)).second) {
      throw CodecError("duplicate slot record");
    }
    max_id = std::max(max_id, id);
  }
  if (!rd.done()) throw CodecError("trailing bytes in state");
  tab.next_slot_ = max_id + 1;
  return tab;
}

}  // namespace stealth::iot
