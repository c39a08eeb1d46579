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
// Accounting engine: closed-form per-epoch operation counts for both
// schemes, a measured per-operation host cost model, modeled-vs-measured
// comparison runs over real protocol traffic, CSV export, and the claim
// checks (per-epoch cost halving and wire-byte savings).
//
// Closed forms for one epoch of N transactions (priced ops {RP, FP, H}):
//
//   baseline        sender   {N,  2N,   N}      receiver {N, N, N}
//   key-evolving    sender   {1, N+1,   N}      receiver {1, N, N}
//
// Wire bytes for one epoch in the common ledger record format (L =
// element_size, amounts 8 bytes, flag 1 byte):
//
//   baseline        N cold records:          N * (1 + 2L + 8)
//   key-evolving    1 cold + N-1 warm:       (1 + 2L + 8) + (N-1)*(1 + L + 8)
//   saving                                   L * (N - 1)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stealth/group.hpp"
#include "stealth/ledger.hpp"

namespace stealth::bench {

using ledger::Scheme;

enum class Side { sender, receiver };

std::string to_string(Side s);

// Count mismatch between a measured run and the closed form. Raised by
// run_comparison; deliberately fatal, never silently absorbed.
class CountMismatchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Closed-form counts above; throws std::invalid_argument for n < 1.
OpCounters expected_counts(Scheme scheme, Side side, uint32_t n);

// Closed-form wire bytes above for an epoch of n transactions.
uint64_t expected_wire_bytes(size_t element_size, Scheme scheme, uint32_t n);

// Measured cost of one RP / FP / H on this host, in seconds.
struct CostModel {
  double rp_seconds = 0;
  double fp_seconds = 0;
  double h_seconds = 0;
};

// Fastest of `iterations` timed samples per operation class (after a small
// untimed warmup) — preemption and frequency scaling only ever add time, so
// the minimum is the least-disturbed and most reproducible estimate. H is
// timed in batches because a single hash sits near the clock's resolution.
// Throws std::invalid_argument for iterations < 100 and std::runtime_error
// if the steady clock is too coarse to resolve the samples. Deterministic
// inputs; timings of course are not.
CostModel measure_cost_model(const Group& g, uint32_t iterations);

// Empty when the model is ordered as expected (H cheapest, FP below RP);
// otherwise a human-readable warning. Advisory only.
std::string cost_model_warning(const CostModel& m);

// One (scheme, side, N) measurement over a real epoch of traffic.
struct ComparisonRow {
  Scheme scheme = Scheme::dksap;
  Side side = Side::sender;
  uint32_t n = 0;
  OpCounters counts;        // measured; equals expected_counts by the time
                            // run_comparison returns
  double modeled_seconds = 0;
  double measured_seconds = 0;
  uint64_t wire_bytes = 0;  // actual encoded size of the epoch's records
};

struct ComparisonConfig {
  std::vector<uint32_t> n_values{10, 20, 30};
  uint64_t seed = 1;
};

// Runs both schemes and both sides for each N: a fresh sender/receiver pair
// per row over the common ledger record format, counting and timing for the
// row's side only. Verifies measured counts against expected_counts and
// throws CountMismatchError on any difference.
std::vector<ComparisonRow> run_comparison(std::shared_ptr<const Group> g,
                                          const ComparisonConfig& cfg,
                                          const CostModel& model);

// Header: scheme,side,n,rp,fp,h,modeled_ms,measured_ms,wire_bytes
// Fixed row order (scheme-major, then side, then N ascending); timing
// columns are the only nondeterministic part.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// Cost-halving claim: per epoch of N transactions, the key-evolving scheme's
// modeled total cost (sender + receiver) is at most half the baseline's, for
// every N covered by the rows. The comparison is only meaningful on hosts
// where hashing is negligible next to both kinds of multiplication, so the
// check first tests that premise and reports itself inapplicable (with a
// reason) instead of failing when the host violates it.
struct CostClaimCheck {
  bool applicable = false;  // premise: h_seconds <= 0.01 * min(rp, fp)
  std::string reason;       // why not applicable / which N fails
  bool holds = false;
  // (N, key-evolving total / baseline total), modeled.
  std::vector<std::pair<uint32_t, double>> ratios;
};

CostClaimCheck check_cost_claim(const std::vector<ComparisonRow>& rows,
                                const CostModel& model);

}  // namespace stealth::bench
