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
// stealthctl — stealth address toolkit driver.
//
//   keygen    generate a key bundle (full/public/auditor JSON files)
//   send      append one payment to a ledger file
//   scan      scan a ledger file as receiver or auditor
//   simulate  deterministic multi-party traffic + full scan harness
//   bench     measured cost model, modeled-vs-measured table, claim checks
//   counts    closed-form per-epoch operation counts

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <future>
#include <iostream>

#include "stealth/bench.hpp"
#include "stealth/dksap.hpp"
#include "stealth/dksap_iot.hpp"
#include "stealth/group.hpp"
#include "stealth/ledger.hpp"

using nlohmann::json;
using namespace stealth;

namespace {

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

void write_text(const std::string& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

json load_json(const std::string& path) {
  Bytes raw = read_file(path);
  return json::parse(raw.begin(), raw.end());
}

std::string backend_of(const json& j) { return j.at("backend").get<std::string>(); }

void check_backend(const json& j, const Group& g) {
  if (backend_of(j) != g.params().name) {
    throw std::runtime_error("key file was generated for backend " + backend_of(j) +
                             ", not " + g.params().name);
  }
}

dksap::KeyBundle load_keys(const Group& g, const std::string& path) {
  json j = load_json(path);
  check_backend(j, g);
  dksap::KeyBundle kb;
  kb.scan_priv = g.scalar_decode(from_hex(j.at("scan_priv").get<std::string>()));
  kb.spend_priv = g.scalar_decode(from_hex(j.at("spend_priv").get<std::string>()));
  kb.scan_pub = g.decode(from_hex(j.at("scan_pub").get<std::string>()));
  kb.spend_pub = g.decode(from_hex(j.at("spend_pub").get<std::string>()));
  if (!dksap::validate_keys(g, kb)) throw std::runtime_error("inconsistent key file " + path);
  return kb;
}

dksap::PublicBundle load_public(const Group& g, const std::string& path) {
  json j = load_json(path);
  check_backend(j, g);
  return {g.decode(from_hex(j.at("scan_pub").get<std::string>())),
          g.decode(from_hex(j.at("spend_pub").get<std::string>()))};
}

dksap::AuditorBundle load_auditor(const Group& g, const std::string& path) {
  json j = load_json(path);
  check_backend(j, g);
  return {g.scalar_decode(from_hex(j.at("scan_priv").get<std::string>())),
          g.decode(from_hex(j.at("spend_pub").get<std::string>()))};
}

ledger::Ledger load_ledger(const Group& g, const std::string& path) {
  return ledger::Ledger::import_bytes(g, read_file(path));
}

// Common flag set reused by the subcommands.
struct Options {
  std::string backend = "secp256k1";
  uint32_t epoch_n = 16;
  uint64_t seed = 0;
  std::string state_file;
  std::string ledger_file;
  std::string csv_out;
};

void add_global_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--backend", opt.backend, "group backend (secp256k1, sect283k1)")
      ->capture_default_str();
  cmd->add_option("--epoch-n", opt.epoch_n, "transactions per ephemeral (N)")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "deterministic seed")->capture_default_str();
  cmd->add_option("--state-file", opt.state_file, "protocol state table file");
  cmd->add_option("--ledger-file", opt.ledger_file, "ledger file");
  cmd->add_option("--csv-out", opt.csv_out, "write CSV results here");
}

int cmd_keygen(const Options& opt, const std::string& out_prefix) {
  auto g = shared_group(opt.backend);
  GroupSession gs(g);
  SystemRng rng;
  dksap::KeyBundle kb = dksap::keygen(gs, rng);

  json full = {{"backend", g->params().name},
               {"scan_priv", to_hex(g->scalar_encode(kb.scan_priv))},
               {"spend_priv", to_hex(g->scalar_encode(kb.spend_priv))},
               {"scan_pub", to_hex(g->encode(kb.scan_pub))},
               {"spend_pub", to_hex(g->encode(kb.spend_pub))}};
  json pub = {{"backend", g->params().name},
              {"scan_pub", to_hex(g->encode(kb.scan_pub))},
              {"spend_pub", to_hex(g->encode(kb.spend_pub))}};
  json aud = {{"backend", g->params().name},
              {"scan_priv", to_hex(g->scalar_encode(kb.scan_priv))},
              {"spend_pub", to_hex(g->encode(kb.spend_pub))}};

  write_text(out_prefix + ".json", full.dump(2) + "\n");
  write_text(out_prefix + ".pub.json", pub.dump(2) + "\n");
  write_text(out_prefix + ".aud.json", aud.dump(2) + "\n");
  std::cout << "wrote " << out_prefix << ".json, " << out_prefix << ".pub.json, "
            << out_prefix << ".aud.json\n";
  return 0;
}

int cmd_send(const Options& opt, const std::string& to_path, uint64_t amount,
             const std::string& scheme_name, const std::string& peer) {
  if (opt.ledger_file.empty()) throw std::runtime_error("--ledger-file is required");
  auto g = shared_group(opt.backend);
  auto scheme = ledger::scheme_from_string(scheme_name);
  dksap::PublicBundle to = load_public(*g, to_path);

  ledger::Ledger led;
  std::ifstream probe(opt.ledger_file);
  if (probe.good()) led = load_ledger(*g, opt.ledger_file);
  probe.close();

  GroupSession gs(g);
  SystemRng rng;
  iot::StealthTx tx;
  if (scheme == ledger::Scheme::dksap) {
    tx = iot::to_tx(dksap::build_payment(gs, to, amount, rng));
  } else {
    if (opt.state_file.empty()) {
      throw std::runtime_error("--state-file is required for dksap-iot sends");
    }
    iot::SenderTable tab;
    std::ifstream sprobe(opt.state_file);
    if (sprobe.good()) tab = iot::SenderTable::import_state(*g, read_file(opt.state_file));
    sprobe.close();
    std::string label = peer.empty() ? to_path : peer;
    tx = tab.send(gs, rng, label, to, amount, {opt.epoch_n, 1});
    write_file(opt.state_file, tab.export_state(*g));
  }

  uint64_t height = led.append_block({tx});
  write_file(opt.ledger_file, led.export_bytes(*g));
  std::cout << "appended block " << height << " ("
            << (tx.ephemeral_pub ? "cold" : "warm") << " tx, "
            << iot::tx_encode(*g, tx).size() << " bytes); ops "
            << to_string(gs.counters()) << "\n";
  return 0;
}

int cmd_scan(const Options& opt, const std::string& keys_path, const std::string& aud_path,
             const std::string& scheme_name, int64_t from_h, int64_t to_h) {
  if (opt.ledger_file.empty()) throw std::runtime_error("--ledger-file is required");
  if (keys_path.empty() == aud_path.empty()) {
    throw std::runtime_error("pass exactly one of --keys or --auditor-keys");
  }
  auto g = shared_group(opt.backend);
  auto scheme = ledger::scheme_from_string(scheme_name);
  ledger::Ledger led = load_ledger(*g, opt.ledger_file);
  if (led.block_count() == 0) {
    std::cout << "ledger is empty\n";
    return 0;
  }
  uint64_t from = from_h < 0 ? 0 : static_cast<uint64_t>(from_h);
  uint64_t to = to_h < 0 ? led.block_count() - 1 : static_cast<uint64_t>(to_h);

  iot::EpochConfig cfg{opt.epoch_n, 1};
  if (!keys_path.empty()) {
    dksap::KeyBundle kb = load_keys(*g, keys_path);
    std::unique_ptr<ledger::ReceiverActor> actor;
    if (scheme == ledger::Scheme::dksap) {
      actor = std::make_unique<ledger::DksapReceiver>(g, kb);
    } else {
      auto iotactor = std::make_unique<ledger::IotReceiver>(g, kb, cfg);
      if (!opt.state_file.empty()) {
        std::ifstream sprobe(opt.state_file);
        if (sprobe.good()) {
          iotactor->set_table(iot::ReceiverTable::import_state(*g, read_file(opt.state_file)));
        }
      }
      actor = std::move(iotactor);
    }
    auto rep = ledger::scan_range(*actor, led, from, to);
    for (const auto& m : rep.matches) {
      std::cout << "match at block " << m.height << " tx " << m.tx_index
                << " spend_key " << to_hex(g->scalar_encode(m.spend_key)) << "\n";
    }
    std::cout << rep.matches.size() << " matches in " << rep.txs_scanned
              << " txs; ops " << to_string(rep.counters) << "\n";
    if (scheme == ledger::Scheme::dksap_iot && !opt.state_file.empty()) {
      auto* iotactor = static_cast<ledger::IotReceiver*>(actor.get());
      write_file(opt.state_file, iotactor->table().export_state(*g));
    }
  } else {
    dksap::AuditorBundle aud = load_auditor(*g, aud_path);
    std::unique_ptr<ledger::AuditorActor> actor;
    if (scheme == ledger::Scheme::dksap) {
      actor = std::make_unique<ledger::DksapAuditor>(g, aud);
    } else {
      auto iotactor = std::make_unique<ledger::IotAuditor>(g, aud, cfg);
      if (!opt.state_file.empty()) {
        std::ifstream sprobe(opt.state_file);
        if (sprobe.good()) {
          iotactor->set_table(iot::AuditorTable::import_state(*g, read_file(opt.state_file)));
        }
      }
      actor = std::move(iotactor);
    }
    auto rep = ledger::scan_range(*actor, led, from, to);
    for (const auto& m : rep.matches) {
      std::cout << "match at block " << m.height << " tx " << m.tx_index << "\n";
    }
    std::cout << rep.matches.size() << " matches in " << rep.txs_scanned
              << " txs; ops " << to_string(rep.counters) << "\n";
    if (scheme == ledger::Scheme::dksap_iot && !opt.state_file.empty()) {
      auto* iotactor = static_cast<ledger::IotAuditor*>(actor.get());
      write_file(opt.state_file, iotactor->table().export_state(*g));
    }
  }
  return 0;
}

int cmd_simulate(const Options& opt, uint32_t pairs, uint32_t txs_per_pair,
                 uint32_t regular, uint32_t txs_per_block, const std::string& scheme_name,
                 uint32_t threads) {
  auto g = shared_group(opt.backend);
  ledger::TrafficSpec spec;
  spec.scheme = ledger::scheme_from_string(scheme_name);
  spec.pairs = pairs;
  spec.txs_per_pair = txs_per_pair;
  spec.epoch_length = opt.epoch_n;
  spec.regular_txs = regular;
  spec.txs_per_block = txs_per_block;
  spec.seed = opt.seed;

  ledger::GeneratedTraffic traffic = ledger::traffic_generate(g, spec);
  std::cout << "generated " << traffic.ledger.tx_count() << " txs in "
            << traffic.ledger.block_count() << " blocks for " << pairs << " pairs ("
            << ledger::to_string(spec.scheme) << ", N=" << opt.epoch_n << ", seed="
            << opt.seed << ")\n";
  if (!opt.ledger_file.empty()) {
    write_file(opt.ledger_file, traffic.ledger.export_bytes(*g));
    std::cout << "ledger written to " << opt.ledger_file << "\n";
  }

  // Every receiver scans the whole ledger (optionally in parallel) and must
  // find exactly its own transactions.
  auto scan_party = [&](size_t p) {
    std::unique_ptr<ledger::ReceiverActor> actor;
    if (spec.scheme == ledger::Scheme::dksap) {
      actor = std::make_unique<ledger::DksapReceiver>(g, traffic.receivers[p].keys);
    } else {
      actor = std::make_unique<ledger::IotReceiver>(g, traffic.receivers[p].keys,
                                                    iot::EpochConfig{opt.epoch_n, 1});
    }
    return ledger::scan_all(*actor, traffic.ledger);
  };

  std::vector<ledger::ReceiverScanReport> reports(pairs);
  if (threads <= 1) {
    for (size_t p = 0; p < pairs; ++p) reports[p] = scan_party(p);
  } else {
    std::vector<std::future<ledger::ReceiverScanReport>> futs;
    for (size_t p = 0; p < pairs; ++p) {
      futs.push_back(std::async(std::launch::async, scan_party, p));
    }
    for (size_t p = 0; p < pairs; ++p) reports[p] = futs[p].get();
  }

  bool all_exact = true;
  for (size_t p = 0; p < pairs; ++p) {
    uint64_t own = 0;
    bool clean = true;
    for (const auto& m : reports[p].matches) {
      if (traffic.origin[m.height][m.tx_index] == static_cast<int>(p)) {
        ++own;
      } else {
        clean = false;
      }
    }
    uint64_t expect = txs_per_pair;
    bool exact = clean && own == expect;
    all_exact = all_exact && exact;
    std::cout << traffic.receivers[p].label << ": " << reports[p].matches.size()
              << " matches (expected " << expect << ", "
              << (exact ? "exact" : "MISMATCH") << "); ops "
              << to_string(reports[p].counters) << "\n";
  }
  std::cout << (all_exact ? "all receivers matched exactly their own traffic\n"
                          : "ground-truth mismatch\n");
  return all_exact ? 0 : 1;
}

int cmd_bench(const Options& opt, const std::vector<uint32_t>& n_list, uint32_t iterations) {
  auto g = shared_group(opt.backend);
  std::cout << "measuring cost model on " << g->params().name << " (" << iterations
            << " iterations)...\n";
  bench::CostModel model = bench::measure_cost_model(*g, iterations);
  char line[160];
  std::snprintf(line, sizeof(line), "cost model: rp=%.3f us  fp=%.3f us  h=%.3f us\n",
                model.rp_seconds * 1e6, model.fp_seconds * 1e6, model.h_seconds * 1e6);
  std::cout << line;
  std::string warn = bench::cost_model_warning(model);
  if (!warn.empty()) std::cout << "warning: " << warn << "\n";

  bench::ComparisonConfig cfg;
  cfg.n_values = n_list;
  cfg.seed = opt.seed == 0 ? 1 : opt.seed;
  auto rows = bench::run_comparison(g, cfg, model);
  std::string csv = bench::comparison_csv(rows);
  std::cout << csv;
  if (!opt.csv_out.empty()) {
    write_text(opt.csv_out, csv);
    std::cout << "csv written to " << opt.csv_out << "\n";
  }

  auto claim = bench::check_cost_claim(rows, model);
  if (!claim.applicable) {
    std::cout << "cost-halving claim: skipped (" << claim.reason << ")\n";
  } else {
    for (auto [n, ratio] : claim.ratios) {
      std::snprintf(line, sizeof(line),
                    "total cost ratio at n=%u: %.3f (key-evolving / baseline, sender+receiver)\n",
                    n, ratio);
      std::cout << line;
    }
    std::cout << "cost-halving claim (<= 0.5 for all n): "
              << (claim.holds ? "holds" : std::string("FAILS (") + claim.reason + ")")
              << "\n";
  }

  const size_t L = g->params().element_size;
  for (uint32_t n : n_list) {
    uint64_t base = bench::expected_wire_bytes(L, ledger::Scheme::dksap, n);
    uint64_t evo = bench::expected_wire_bytes(L, ledger::Scheme::dksap_iot, n);
    std::snprintf(line, sizeof(line),
                  "wire bytes at n=%u: baseline %llu, key-evolving %llu, saved %llu "
                  "(= %zu*(n-1))\n",
                  n, static_cast<unsigned long long>(base),
                  static_cast<unsigned long long>(evo),
                  static_cast<unsigned long long>(base - evo), L);
    std::cout << line;
  }
  return 0;
}

int cmd_counts(const std::string& scheme_name, const std::string& side_name, uint32_t n) {
  auto scheme = ledger::scheme_from_string(scheme_name);
  std::vector<bench::Side> sides;
  if (side_name == "sender") {
    sides = {bench::Side::sender};
  } else if (side_name == "receiver") {
    sides = {bench::Side::receiver};
  } else if (side_name == "both") {
    sides = {bench::Side::sender, bench::Side::receiver};
  } else {
    throw std::runtime_error("side must be sender, receiver or both");
  }
  for (auto side : sides) {
    OpCounters c = bench::expected_counts(scheme, side, n);
    std::cout << ledger::to_string(scheme) << " " << bench::to_string(side) << " n=" << n
              << ": " << to_string(c) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stealth address toolkit"};
  app.require_subcommand(1);

  Options opt;

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate a key bundle");
  std::string out_prefix = "keys";
  keygen->add_option("--out", out_prefix, "output file prefix")->capture_default_str();
  add_global_flags(keygen, opt);

  // send
  auto* send = app.add_subcommand("send", "append one payment to a ledger");
  std::string to_path, scheme_name = "dksap-iot", peer;
  uint64_t amount = 0;
  send->add_option("--to", to_path, "recipient public bundle (.pub.json)")->required();
  send->add_option("--amount", amount, "amount")->required();
  send->add_option("--scheme", scheme_name, "dksap or dksap-iot")->capture_default_str();
  send->add_option("--peer", peer, "sender-side peer label (defaults to --to path)");
  add_global_flags(send, opt);

  // scan
  auto* scan = app.add_subcommand("scan", "scan a ledger file");
  std::string keys_path, aud_path;
  int64_t from_h = -1, to_h = -1;
  scan->add_option("--keys", keys_path, "receiver key file (.json)");
  scan->add_option("--auditor-keys", aud_path, "auditor key file (.aud.json)");
  scan->add_option("--scheme", scheme_name, "dksap or dksap-iot")->capture_default_str();
  scan->add_option("--from", from_h, "first block (default 0)");
  scan->add_option("--to", to_h, "last block (default tip)");
  add_global_flags(scan, opt);

  // simulate
  auto* sim = app.add_subcommand("simulate", "deterministic multi-party traffic");
  uint32_t pairs = 3, txs_per_pair = 10, regular = 0, txs_per_block = 16, threads = 1;
  sim->add_option("--pairs", pairs, "sender/receiver pairs")->capture_default_str();
  sim->add_option("--txs-per-pair", txs_per_pair, "stealth txs per pair")
      ->capture_default_str();
  sim->add_option("--regular", regular, "decoy txs")->capture_default_str();
  sim->add_option("--txs-per-block", txs_per_block, "txs per block")->capture_default_str();
  sim->add_option("--scheme", scheme_name, "dksap or dksap-iot")->capture_default_str();
  sim->add_option("--threads", threads, "parallel scanners")->capture_default_str();
  add_global_flags(sim, opt);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "cost model and comparison table");
  std::vector<uint32_t> n_list{10, 20, 30};
  uint32_t iterations = 200;
  bench_cmd->add_option("--n-list", n_list, "epoch lengths to compare")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--iterations", iterations, "timing samples per op (>= 100)")
      ->capture_default_str();
  add_global_flags(bench_cmd, opt);

  // counts
  auto* counts = app.add_subcommand("counts", "closed-form per-epoch operation counts");
  std::string side_name = "both";
  counts->add_option("--scheme", scheme_name, "dksap or dksap-iot")->capture_default_str();
  counts->add_option("--side", side_name, "sender, receiver or both")->capture_default_str();
  add_global_flags(counts, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen->parsed()) return cmd_keygen(opt, out_prefix);
    if (send->parsed()) return cmd_send(opt, to_path, amount, scheme_name, peer);
    if (scan->parsed()) return cmd_scan(opt, keys_path, aud_path, scheme_name, from_h, to_h);
    if (sim->parsed()) {
      return cmd_simulate(opt, pairs, txs_per_pair, regular, txs_per_block, scheme_name,
                          threads);
    }
    if (bench_cmd->parsed()) return cmd_bench(opt, n_list, iterations);
    if (counts->parsed()) return cmd_counts(scheme_name, side_name, opt.epoch_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
