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
// Append-only simulated ledger plus the multi-party scan harness: receiver
// and auditor actors that walk block ranges, deterministic traffic
// generation, and per-actor operation accounting.
//
// Ledger file format:
//
//   "SKLG" || version(1)=1 || element_size u16 BE || block_count u64 BE ||
//   blocks, each: payload_len u32 BE || tx_count u32 BE ||
//                 { tx_len u32 BE || wire tx }*
//
// Appends are serialized behind a writer lock; scans take a reader lock per
// block, so concurrent scanners never observe a half-appended block.

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "stealth/dksap.hpp"
#include "stealth/dksap_iot.hpp"
#include "stealth/group.hpp"

namespace stealth::ledger {

using iot::StealthTx;

struct Block {
  uint64_t height = 0;
  std::vector<StealthTx> txs;
};

class Ledger {
 public:
  Ledger() = default;
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  Ledger(Ledger&& o) noexcept;
  Ledger& operator=(Ledger&& o) noexcept;

  // Appends a block of already-validated txs; returns its height.
  // Destinations (and ephemerals, when present) must not be the identity.
  uint64_t append_block(std::vector<StealthTx> txs);
  // Decodes each wire tx with the group codec (off-curve or malformed data
  // throws CodecError and the ledger is left unchanged), then appends.
  uint64_t append_block_wire(const Group& g, const std::vector<Bytes>& wire_txs);

  uint64_t block_count() const;
  uint64_t tx_count() const;
  // Snapshot copy of one block; throws std::out_of_range beyond the tip.
  Block block(uint64_t height) const;

  Bytes export_bytes(const Group& g) const;
  static Ledger import_bytes(const Group& g, std::span<const uint8_t> in);

 private:
  mutable std::shared_mutex mu_;
  std::deque<Block> blocks_;
};

// --- scan actors ----------------------------------------------------------
// An actor owns its keys, its protocol state and its GroupSession, so
// operation tallies are per actor by construction.

class ReceiverActor {
 public:
  virtual ~ReceiverActor() = default;
  // Advances protocol state; returns the recovered one-time spend key on a
  // match.
  virtual std::optional<Scalar> process(const StealthTx& tx) = 0;
  virtual GroupSession& session() = 0;
};

class AuditorActor {
 public:
  virtual ~AuditorActor() = default;
  virtual bool process(const StealthTx& tx) = 0;
  virtual GroupSession& session() = 0;
};

// Baseline receiver: scans only transactions that carry an ephemeral key
// (records without one cannot be baseline payments and cost nothing).
class DksapReceiver final : public ReceiverActor {
 public:
  DksapReceiver(std::shared_ptr<const Group> g, dksap::KeyBundle keys)
      : gs_(std::move(g)), keys_(std::move(keys)) {}
  std::optional<Scalar> process(const StealthTx& tx) override;
  GroupSession& session() override { return gs_; }

 private:
  GroupSession gs_;
  dksap::KeyBundle keys_;
};

class DksapAuditor final : public AuditorActor {
 public:
  DksapAuditor(std::shared_ptr<const Group> g, dksap::AuditorBundle aud)
      : gs_(std::move(g)), aud_(std::move(aud)) {}
  bool process(const StealthTx& tx) override;
  GroupSession& session() override { return gs_; }

 private:
  GroupSession gs_;
  dksap::AuditorBundle aud_;
};

// Key-evolving receiver; owns the per-peer state table, which persists
// across scans (and can be exported/imported for resumption).
class IotReceiver final : public ReceiverActor {
 public:
  IotReceiver(std::shared_ptr<const Group> g, dksap::KeyBundle keys, iot::EpochConfig cfg)
      : gs_(std::move(g)), keys_(std::move(keys)), cfg_(cfg) {}
  std::optional<Scalar> process(const StealthTx& tx) override;
  GroupSession& session() override { return gs_; }

  iot::ReceiverTable& table() { return table_; }
  void set_table(iot::ReceiverTable t) { table_ = std::move(t); }

 private:
  GroupSession gs_;
  dksap::KeyBundle keys_;
  iot::EpochConfig cfg_;
  iot::ReceiverTable table_;
};

class IotAuditor final : public AuditorActor {
 public:
  IotAuditor(std::shared_ptr<const Group> g, dksap::AuditorBundle aud, iot::EpochConfig cfg)
      : gs_(std::move(g)), aud_(std::move(aud)), cfg_(cfg) {}
  bool process(const StealthTx& tx) override;
  GroupSession& session() override { return gs_; }

  iot::AuditorTable& table() { return table_; }
  void set_table(iot::AuditorTable t) { table_ = std::move(t); }

 private:
  GroupSession gs_;
  dksap::AuditorBundle aud_;
  iot::EpochConfig cfg_;
  iot::AuditorTable table_;
};

// --- range scans ----------------------------------------------------------

struct ReceiverMatch {
  uint64_t height = 0;
  uint32_t tx_index = 0;
  Scalar spend_key;

  friend bool operator==(const ReceiverMatch&, const ReceiverMatch&) = default;
};

struct AuditorMatchRecord {
  uint64_t height = 0;
  uint32_t tx_index = 0;

  friend bool operator==(const AuditorMatchRecord&, const AuditorMatchRecord&) = default;
};

struct ReceiverScanReport {
  std::vector<ReceiverMatch> matches;
  OpCounters counters;  // delta attributable to this scan
  uint64_t txs_scanned = 0;
};

struct AuditorScanReport {
  std::vector<AuditorMatchRecord> matches;
  OpCounters counters;
  uint64_t txs_scanned = 0;
};

// Walks blocks [from, to] inclusive in order; throws std::out_of_range on a
// bad range. The report's counters are the actor's session delta across the
// scan.
ReceiverScanReport scan_range(ReceiverActor& actor, const Ledger& led, uint64_t from,
                              uint64_t to);
AuditorScanReport scan_range(AuditorActor& actor, const Ledger& led, uint64_t from,
                             uint64_t to);
ReceiverScanReport scan_all(ReceiverActor& actor, const Ledger& led);
AuditorScanReport scan_all(AuditorActor& actor, const Ledger& led);

// --- deterministic traffic -------------------------------------------------

enum class Scheme { dksap, dksap_iot };

std::string to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);  // throws std::invalid_argument

struct TrafficSpec {
  Scheme scheme = Scheme::dksap_iot;
  uint32_t pairs = 3;          // sender/receiver pairs; >= 1
  uint32_t txs_per_pair = 10;  // stealth txs per pair; >= 1
  uint32_t epoch_length = 8;   // N for key-evolving senders
  uint32_t regular_txs = 0;    // interleaved decoys matching nobody
  uint32_t txs_per_block = 16; // >= 1
  uint64_t seed = 0;           // drives every random choice
};

struct Party {
  std::string label;
  dksap::KeyBundle keys;
};

struct GeneratedTraffic {
  Ledger ledger;
  std::vector<Party> receivers;  // one per pair
  // Ground truth: origin[height][tx_index] = receiver index, or -1 for a
  // regular (decoy) transaction.
  std::vector<std::vector<int>> origin;
};

// Fully reproducible: identical spec (including seed) gives a byte-identical
// ledger. Stealth and regular txs are interleaved by a seeded shuffle.
// Throws std::invalid_argument on zero pairs/txs/epoch/block size.
GeneratedTraffic traffic_generate(std::shared_ptr<const Group> g, const TrafficSpec& spec);

}  // namespace stealth::ledger
