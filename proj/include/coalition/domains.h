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

#ifndef COALITION_DOMAINS_H_
#define COALITION_DOMAINS_H_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coalition/cost_oracle.h"

namespace coalition {

// Hotel room sharing. Days are inclusive integer indices: a traveler with
// t_in = 1 and t_out = 3 stays on days 1, 2 and 3.
//
// A coalition books one room at a location every member accepts, from the
// earliest arrival to the latest departure. The cheapest such location wins
// (smallest location id on ties). Each day is a facility. A member uses the
// days of its own stay, plus the days on which no member stays, which are
// shared by everyone.
class HotelOracle : public ResourceOracle {
 public:
  struct Traveler {
    int t_in = 0;
    int t_out = 0;
    std::vector<int> areas;  // acceptable location ids
  };
  struct Rates {
    Money default_rate = 1;
    std::map<std::pair<int, int>, Money> overrides;  // (location, day) -> rate
    Money rate(int location, int day) const;
  };

  HotelOracle(std::vector<Traveler> travelers, Rates rates);

  int participant_count() const override { return static_cast<int>(travelers_.size()); }
  std::optional<Resource> best_resource(Coalition g) const override;

  const std::vector<Traveler>& travelers() const { return travelers_; }
  const Rates& rates() const { return rates_; }

 private:
  std::vector<Traveler> travelers_;
  Rates rates_;
};

// Taxi ride sharing on a directed road network. Each passenger has a pickup
// and a dropoff node, an earliest departure slot and a latest arrival slot.
//
// A ride visits the stops of all members in some order, every pickup before
// its dropoff, driving shortest-fare paths between consecutive stops. The ride
// leaves as early as the earliest-departure constraints allow and must reach
// every dropoff by its deadline. The cheapest feasible ride wins, ties going
// to the lexicographically smallest stop order. Each edge traversal is a
// facility; a member uses the traversals between its pickup and its dropoff.
// Traversals with nobody on board are shared by every member.
class TaxiOracle : public ResourceOracle {
 public:
  struct Passenger {
    int source = 0;
    int destination = 0;
    int earliest = 0;
    int latest = 0;
  };
  struct Edge {
    int u = 0;
    int v = 0;
    Money fare = 0;
    int time = 1;
  };

  TaxiOracle(std::vector<Passenger> passengers, std::vector<Edge> edges);

  int participant_count() const override { return static_cast<int>(passengers_.size()); }
  std::optional<Resource> best_resource(Coalition g) const override;

  // Same ride selection without the pickup-before-dropoff pruning; used to
  // cross-check the ordered search on small coalitions.
  std::optional<Resource> best_resource_unpruned(Coalition g) const;

  const std::vector<Passenger>& passengers() const { return passengers_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int node_count() const { return nodes_; }

  // Cheapest fare from u to v, kInfinity when unreachable.
  Money path_fare(int u, int v) const;

 private:
  std::optional<Resource> search(Coalition g, bool pruned) const;

  std::vector<Passenger> passengers_;
  std::vector<Edge> edges_;
  int nodes_ = 0;
  std::vector<Money> fare_;      // nodes_ x nodes_
  std::vector<long> time_;       // travel time along the cheapest path
  std::vector<int> next_edge_;   // first edge on the cheapest path, -1 if none
};

// Pass sharing. Users hold disjoint slot sets; a coalition buys the cheapest
// catalog pass covering all of its slots (first in catalog order on ties).
// Every slot of the pass is a facility priced at the uniform rate. A member
// uses its own slots plus the idle slots, which everyone shares.
class PassOracle : public ResourceOracle {
 public:
  PassOracle(std::vector<std::vector<int>> users, std::vector<std::vector<int>> passes, Money rate = 1);

  int participant_count() const override { return static_cast<int>(users_.size()); }
  std::optional<Resource> best_resource(Coalition g) const override;

  const std::vector<std::vector<int>>& users() const { return users_; }
  const std::vector<std::vector<int>>& passes() const { return passes_; }
  Money rate() const { return rate_; }

 private:
  std::vector<std::vector<int>> users_;   // sorted, unique
  std::vector<std::vector<int>> passes_;  // sorted, unique
  Money rate_;
};

struct UtilizationViolation {
  Coalition subset;    // H
  Coalition superset;  // G
  Money in_subset = 0;    // cost of facilities H uses under r(H)
  Money in_superset = 0;  // cost of facilities H uses under r(G)
};

struct UtilizationReport {
  std::vector<UtilizationViolation> violations;
  std::uint64_t pairs_checked = 0;
  bool ok() const { return violations.empty(); }
};

// Checks that the facility cost used by a sub-coalition H never shrinks when H
// sits inside a larger feasible coalition G (|G| <= max_size). Exhaustive mode
// requires n <= 10; sampled mode draws random (H, G) pairs.
UtilizationReport check_monotone_utilization(const ResourceOracle& oracle, int max_size,
                                             const ValidationOptions& options = {});

}  // namespace coalition

#endif  // COALITION_DOMAINS_H_
