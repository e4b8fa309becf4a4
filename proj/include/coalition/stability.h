// Copyright 2026 The Coalition Sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALITION_STABILITY_H_
#define COALITION_STABILITY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coalition/errors.h"
#include "coalition/instance.h"
#include "coalition/mechanisms.h"
#include "json.hpp"

namespace coalition {

// Participants i_1..i_s and coalitions G_1..G_s with i_k in G_k and G_{k+1}
// (cyclically) where i_k is strictly better off in G_k than in G_{k+1}.
struct PreferenceCycle {
  std::vector<ParticipantId> participants;
  std::vector<Coalition> coalitions;
  std::size_t size() const { return participants.size(); }
};

struct StabilityReport {
  enum class Status { kStable, kBlocked, kCycle, kIterationCap };
  Status status = Status::kStable;
  CoalitionStructure structure;
  std::optional<Coalition> witness;      // kBlocked, and the pending deviation at kIterationCap
  std::optional<PreferenceCycle> cycle;  // kCycle
  // Deviations applied; the structures revisited in a cycle are kept in `trace`.
  int steps = 0;
  std::vector<Coalition> trace;
};

std::string to_string(StabilityReport::Status s);

// Raised when a game has no stable coalition structure, or when a
// construction needing one meets a preference cycle.
class NoStableStructureError : public CoalitionError {
 public:
  NoStableStructureError(const std::string& what, std::optional<PreferenceCycle> cycle)
      : CoalitionError(what), cycle_(std::move(cycle)) {}
  const std::optional<PreferenceCycle>& cycle() const { return cycle_; }

 private:
  std::optional<PreferenceCycle> cycle_;
};

// Payments of every feasible coalition of size <= k inside a pool, computed
// once. Coalitions are stored in size-then-lexicographic order.
class PaymentTable {
 public:
  PaymentTable(const Instance& instance, Mechanism mechanism);
  PaymentTable(const Instance& instance, Mechanism mechanism, Coalition pool);

  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  bool contains(Coalition g) const { return index_.contains(g); }
  // Payment of member i in g; g must be in the table.
  Money payment(Coalition g, ParticipantId i) const;
  Money utility(Coalition g, ParticipantId i) const;
  Money cost(Coalition g) const;
  Money default_cost(ParticipantId i) const { return defaults_[i]; }
  // Position in coalitions(), or -1.
  int index_of(Coalition g) const;
  // Offsets into the flat payment array, aligned with coalitions().
  const Money* payments_at(int index) const { return payments_.data() + offsets_[index]; }
  Mechanism mechanism() const { return mechanism_; }

 private:
  Mechanism mechanism_;
  std::vector<Coalition> coalitions_;
  std::vector<Money> costs_;
  std::vector<std::size_t> offsets_;
  std::vector<Money> payments_;
  std::vector<Money> defaults_;
  std::unordered_map<Coalition, int, CoalitionHash> index_;
};

// Current payment of every participant under `p`.
std::vector<Money> current_payments(const CoalitionStructure& p, Mechanism m, const Instance& instance);

// Smallest (by size, then lexicographic) feasible coalition of size <= k whose
// members all pay strictly less (by more than kEps) than under `p`.
std::optional<Coalition> find_blocking_coalition(const CoalitionStructure& p, Mechanism m, const Instance& instance);
bool is_stable(const CoalitionStructure& p, Mechanism m, const Instance& instance);
StabilityReport check_stability(const CoalitionStructure& p, Mechanism m, const Instance& instance);

// Builds a stable structure by repeatedly forming a sink coalition among the
// remaining participants: a feasible coalition in which no member could be
// better off in another coalition of remaining participants.
//
// For equal, proportional, egalitarian and both Nash variants a sink is a
// minimizer of a mechanism score (ties: smaller size, then lexicographic):
//   equal          cost / |G|
//   proportional   cost / sum of defaults
//   egalitarian,
//   nash variants  -(sum of defaults - cost) / |G|
// For usage-based sharing on pass instances the score is the idle pass cost
// per member. Other usage-based backends fall back to a direct sink search,
// which throws NoStableStructureError when no sink exists. The result is
// verified stable before it is returned.
CoalitionStructure greedy_stable(const Instance& instance, Mechanism m);

// Repeatedly lets the blocking coalition found by find_blocking_coalition
// deviate. Deviators leave their coalitions, which keep their remaining
// members. Stops at a stable structure, at a revisited structure (reported
// with a preference cycle) or after max_steps deviations.
StabilityReport improvement_dynamics(const Instance& instance, CoalitionStructure p0, Mechanism m, int max_steps);

// Searches the preference digraph on feasible coalitions of size <= k for a
// directed cycle. Throws ResourceLimitError above 200000 coalitions.
std::optional<PreferenceCycle> detect_cyclic_preference(const Instance& instance, Mechanism m);

// True when `cycle` satisfies the cyclic-preference conditions under `m`.
bool verify_cycle(const PreferenceCycle& cycle, Mechanism m, const Instance& instance);

// Every stable structure, in the order of a depth-first enumeration of set
// partitions (blocks opened by their lowest member). Requires n <= 12.
std::vector<CoalitionStructure> enumerate_stable_structures(const Instance& instance, Mechanism m);

// Splits each coalition, sorted by decreasing default cost, into consecutive
// groups in which every member pays a positive non-negative-Nash share.
CoalitionStructure nash_positive_refinement(const CoalitionStructure& p, const CostOracle& oracle);

struct ChainDiagnostic {
  std::vector<ParticipantId> chain;  // i_1..i_L, H_s = {i_s..i_L}
  double ratio = 0;                  // sum_s p_{i_s}(H_s) / cost(H_1)
};

struct ChainOptions {
  enum class Mode { kAll, kSample };
  Mode mode = Mode::kAll;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
};

// Largest chain ratio over chains of L = min(k, n) distinct participants with
// H_1 feasible. kAll is exact and requires at most 10^7 coalitions of size <= L.
ChainDiagnostic chain_ratio(const Instance& instance, Mechanism m, const ChainOptions& options = {});

nlohmann::json to_json(const PreferenceCycle& cycle);
nlohmann::json to_json(const CoalitionStructure& p);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const ChainDiagnostic& chain);

}  // namespace coalition

#endif  // COALITION_STABILITY_H_
