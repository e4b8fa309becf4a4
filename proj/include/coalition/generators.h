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


#ifndef COALITION_GENERATORS_H_
#define COALITION_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalition/format.h"
#include "coalition/instance.h"
#include "coalition/mechanisms.h"
#include "json.hpp"

namespace coalition {

// A generated instance with the structures its construction certifies.
struct Generated {
  std::string family;
  nlohmann::json params;
  Instance instance;
  std::optional<CoalitionStructure> stable;   // stable under every mechanism in `mechanisms`
  std::optional<CoalitionStructure> optimum;  // a minimum-cost structure
  std::vector<Mechanism> mechanisms;
  std::optional<Rational> expected_ratio;     // cost(stable) / cost(optimum)
  std::optional<Rational> chain_ratio;        // lower-bound chain quantity, where defined
};

// Sidecar written next to a generated instance.
nlohmann::json sidecar_json(const Generated& g);

// Participant i^t_s (layer s = 1..K, column t = 1..K!) of the tight examples.
ParticipantId tight_id(int k, int s, int t);

// Equal-split tight example with K * K! participants. Columns
// {i^t_1..i^t_K} and layer blocks {i^{(b-1)(K-s+1)+1}_s..i^{b(K-s+1)}_s}
// cost 1, as does every subset of one; other coalitions cost the cheapest
// split into such subsets. kTable lists the groups in an explicit table;
// kUsageGroups gives every group one shared facility. Requires 1 <= K <= 4.
enum class TightForm { kTable, kUsageGroups };
Generated gen_equal_tight(int k, TightForm form = TightForm::kTable);

// Usage-based lower-bound instance: the same groups, with layer blocks
// sharing one facility and columns splitting their unit cost between the
// top-layer member present and the others. Requires 1 <= K <= 4.
Generated gen_usage_lower(int k);

// Ring of s passengers with K = 2 in which passenger k prefers sharing with
// k + 1 over sharing with k - 1. kTables lists facility usage directly;
// kGeometric realizes the ring on a road network and is experimental.
// gen_taxi_cycle rejects even or small s; taxi_ring accepts any s >= 2.
enum class TaxiForm { kTables, kGeometric };
Generated gen_taxi_cycle(int s, TaxiForm form = TaxiForm::kTables);
Generated taxi_ring(int s, TaxiForm form = TaxiForm::kTables);

enum class RandomFamily { kTable, kHotel, kTaxi, kPass };
std::string to_string(RandomFamily family);
RandomFamily parse_family(const std::string& name);

struct RandomOptions {
  // Table family: coalition costs may exceed the sum of member defaults by up
  // to this fraction, so truncation changes the game.
  double overshoot = 0;
};

// Reproducible from (family, n, k, seed).
//   table  defaults in [0.5, 2]; a coalition costs between the largest cost of
//          its one-smaller subsets and the sum of member defaults
//   hotel  uniform room rate, random stays over 2n days and random areas among
//          three locations
//   taxi   strongly connected random network with travel time equal to fare
//   pass   disjoint random slot sets, the universal pass plus random windows,
//          unit rate
Generated gen_random(RandomFamily family, int n, int k, std::uint64_t seed, const RandomOptions& options = {});

}  // namespace coalition

#endif  // COALITION_GENERATORS_H_
