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

#include "stealth/ledger.hpp"

#include <algorithm>
#include <mutex>

namespace stealth::ledger {

namespace {

constexpr char kLedgerMagic[4] = {'S', 'K', 'L', 'G'};
constexpr uint8_t kLedgerVersion = 1;

void check_tx(const StealthTx& tx) {
  if (tx.destination.is_identity() ||
      (tx.ephemeral_pub && tx.ephemeral_pub->is_identity())) {
    throw std::invalid_argument("transaction with identity point");
  }
}

uint64_t rand_u64(Rng& rng) {
  uint8_t buf[8];
  rng.fill(buf);
  uint64_t v = 0;
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

}  // namespace

Ledger::Ledger(Ledger&& o) noexcept {
  std::unique_lock lock(o.mu_);
  blocks_ = std::move(o.blocks_);
}

Ledger& Ledger::operator=(Ledger&& o) noexcept {
  if (this != &o) {
    std::scoped_lock lock(mu_, o.mu_);
    blocks_ = std::move(o.blocks_);
  }
  return *this;
}

uint64_t Ledger::append_block(std::vector<StealthTx> txs) {
  for (const auto& tx : txs) check_tx(tx);
  std::unique_lock lock(mu_);
  uint64_t height = blocks_.size();
  blocks_.push_back(Block{height, std::move(txs)});
  return height;
}

uint64_t Ledger::append_block_wire(const Group& g, const std::vector<Bytes>& wire_txs) {
  std::vector<StealthTx> txs;
  txs.reserve(wire_txs.size());
  for (const auto& w : wire_txs) txs.push_back(iot::tx_decode(g, w));  // throws; no append
  return append_block(std::move(txs));
}

uint64_t Ledger::block_count() const {
  std::shared_lock lock(mu_);
  return blocks_.size();
}

uint64_t Ledger::tx_count() const {
  std::shared_lock lock(mu_);
  uint64_t n = 0;
  for (const auto& b : blocks_) n += b.txs.size();
  return n;
}

Block Ledger::block(uint64_t height) const {
  std::shared_lock lock(mu_);
  if (height >= blocks_.size()) throw std::out_of_range("block height beyond tip");
  return blocks_[height];
}

Bytes Ledger::export_bytes(const Group& g) const {
  std::shared_lock lock(mu_);
  Bytes out;
  out.insert(out.end(), kLedgerMagic, kLedgerMagic + 4);
  out.push_back(kLedgerVersion);
  put_u16_be(out, static_cast<uint16_t>(g.params().element_size));
  put_u64_be(out, blocks_.size());
  for (const auto& blk : blocks_) {
    Bytes payload;
    put_u32_be(payload, static_cast<uint32_t>(blk.txs.size()));
    for (const auto& tx : blk.txs) {
      Bytes w = iot::tx_encode(g, tx);
      put_u32_be(payload, static_cast<uint32_t>(w.size()));
      payload.insert(payload.end(), w.begin(), w.end());
    }
    put_u32_be(out, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

Ledger Ledger::import_bytes(const Group& g, std::span<const uint8_t> in) {
  ByteReader rd(in);
  auto magic = rd.take(4);
  if (!std::equal(magic.begin(), magic.end(), kLedgerMagic)) {
    throw CodecError("bad ledger magic");
  }
  if (rd.u8() != kLedgerVersion) throw CodecError("unknown ledger version");
  if (rd.u16_be() != g.params().element_size) {
    throw CodecError("ledger written for another backend");
  }
  uint64_t blocks = rd.u64_be();
  Ledger led;
  for (uint64_t h = 0; h < blocks; ++h) {
    uint32_t payload_len = rd.u32_be();
    ByteReader body(rd.take(payload_len));
    uint32_t txs = body.u32_be();
    std::vector<StealthTx> list;
    list.reserve(txs);
    for (uint32_t i = 0; i < txs; ++i) {
      uint32_t tx_len = body.u32_be();
      list.push_back(iot::tx_decode(g, body.take(tx_len)));
    }
    if (!body.done()) throw CodecError("trailing bytes in block");
    led.append_block(std::move(list));
  }
  if (!rd.done()) throw CodecError("trailing bytes in ledger");
  return led;
}

// --- actors -----------------------------------------------------------------

std::optional<Scalar> DksapReceiver::process(const StealthTx& tx) {
  if (!tx.ephemeral_pub) return std::nullopt;  // cannot be a baseline payment
  auto m = dksap::scan_payment(gs_, keys_, iot::to_payment(tx));
  if (!m) return std::nullopt;
  return std::move(m->spend_key);
}

bool DksapAuditor::process(const StealthTx& tx) {
  if (!tx.ephemeral_pub) return false;
  return dksap::auditor_scan_payment(gs_, aud_, iot::to_payment(tx)).has_value();
}

std::optional<Scalar> IotReceiver::process(const StealthTx& tx) {
  auto m = table_.process(gs_, keys_, tx, cfg_);
  if (!m) return std::nullopt;
  return std::move(m->spend_key);
}

bool IotAuditor::process(const StealthTx& tx) {
  return table_.process(gs_, aud_, tx, cfg_).has_value();
}

// --- range scans ------------------------------------------------------------

ReceiverScanReport scan_range(ReceiverActor& actor, const Ledger& led, uint64_t from,
                              uint64_t to) {
  if (from > to || to >= led.block_count()) throw std::out_of_range("bad scan range");
  ReceiverScanReport rep;
  OpCounters before = actor.session().counters();
  for (uint64_t h = from; h <= to; ++h) {
    Block blk = led.block(h);
    for (size_t i = 0; i < blk.txs.size(); ++i) {
      ++rep.txs_scanned;
      if (auto key = actor.process(blk.txs[i])) {
        rep.matches.push_back({h, static_cast<uint32_t>(i), std::move(*key)});
      }
    }
  }
  rep.counters = actor.session().counters() - before;
  return rep;
}

AuditorScanReport scan_range(AuditorActor& actor, const Ledger& led, uint64_t from,
                             uint64_t to) {
  if (from > to || to >= led.block_count()) throw std::out_of_range("bad scan range");
  AuditorScanReport rep;
  OpCounters before = actor.session().counters();
  for (uint64_t h = from; h <= to; ++h) {
    Block blk = led.block(h);
    for (size_t i = 0; i < blk.txs.size(); ++i) {
      ++rep.txs_scanned;
      if (actor.process(blk.txs[i])) {
        rep.matches.push_back({h, static_cast<uint32_t>(i)});
      }
    }
  }
  rep.counters = actor.session().counters() - before;
  return rep;
}

ReceiverScanReport scan_all(ReceiverActor& actor, const Ledger& led) {
  uint64_t count = led.block_count();
  if (count == 0) return {};
  return scan_range(actor, led, 0, count - 1);
}

AuditorScanReport scan_all(AuditorActor& actor, const Ledger& led) {
  uint64_t count = led.block_count();
  if (count == 0) return {};
  return scan_range(actor, led, 0, count - 1);
}

// --- deterministic traffic ----------------------------------------------------

std::string to_string(Scheme s) {
  return s == Scheme::dksap ? "dksap" : "dksap-iot";
}

Scheme scheme_from_string(std::string_view s) {
  if (s == "dksap") return Scheme::dksap;
  if (s == "dksap-iot" || s == "dksap_iot") return Scheme::dksap_iot;
  throw std::invalid_argument("unknown scheme: " + std::string(s));
}

GeneratedTraffic traffic_generate(std::shared_ptr<const Group> g, const TrafficSpec& spec) {
  if (spec.pairs < 1 || spec.txs_per_pair < 1 || spec.epoch_length < 1 ||
      spec.txs_per_block < 1) {
    throw std::invalid_argument("traffic spec fields must be >= 1");
  }
  DeterministicRng rng(spec.seed);
  GroupSession gs(g);

  GeneratedTraffic out;
  out.receivers.reserve(spec.pairs);
  for (uint32_t p = 0; p < spec.pairs; ++p) {
    out.receivers.push_back(Party{"party-" + std::to_string(p), dksap::keygen(gs, rng)});
  }

  // One slot per transaction: the owning pair, or -1 for a decoy. The seeded
  // shuffle fixes the interleaving; per-pair order is preserved by drawing
  // each pair's next transaction when its slot comes up.
  std::vector<int> slots;
  slots.reserve(size_t{spec.pairs} * spec.txs_per_pair + spec.regular_txs);
  for (uint32_t p = 0; p < spec.pairs; ++p) {
    slots.insert(slots.end(), spec.txs_per_pair, static_cast<int>(p));
  }
  slots.insert(slots.end(), spec.regular_txs, -1);
  for (size_t i = slots.size(); i > 1; --i) {
    std::swap(slots[i - 1], slots[rand_u64(rng) % i]);
  }

  iot::SenderTable senders;
  iot::EpochConfig cfg{spec.epoch_length, 1};
  std::vector<StealthTx> txs;
  txs.reserve(slots.size());
  for (int owner : slots) {
    uint64_t amount = rand_u64(rng) % 1000000 + 1;
    if (owner < 0) {
      // decoy: same layout, random destination nobody recognizes
      StealthTx tx;
      tx.destination = g->mul_base(g->random_scalar(rng));
      tx.amount = amount;
      txs.push_back(std::move(tx));
    } else {
      const Party& party = out.receivers[static_cast<size_t>(owner)];
      if (spec.scheme == Scheme::dksap) {
        txs.push_back(iot::to_tx(
            dksap::build_payment(gs, party.keys.public_bundle(), amount, rng)));
      } else {
        txs.push_back(senders.send(gs, rng, party.label, party.keys.public_bundle(), amount,
                                   cfg));
      }
    }
  }

  std::vector<StealthTx> block;
  std::vector<int> block_origin;
  for (size_t i = 0; i < txs.size(); ++i) {
    block.push_back(std::move(txs[i]));
    block_origin.push_back(slots[i]);
    if (block.size() == spec.txs_per_block || i + 1 == txs.size()) {
      out.ledger.append_block(std::move(block));
      out.origin.push_back(std::move(block_origin));
      block.clear();
      block_origin.clear();
    }
  }
  return out;
}

}  // namespace stealth::ledger
