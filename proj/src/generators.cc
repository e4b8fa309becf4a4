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


#include "coalition/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "coalition/domains.h"
#include "coalition/errors.h"
#include "coalition/stability.h"
#include "coalition/usage_tables.h"

namespace coalition {

nlohmann::json sidecar_json(const Generated& g) {
  nlohmann::json j = {
      {"family", g.family},
      {"params", g.params},
      {"instance", g.instance.id},
      {"n", g.instance.n},
      {"k", g.instance.k},
  };
  if (g.stable) j["stable"] = to_json(*g.stable);
  if (g.optimum) j["optimum"] = to_json(*g.optimum);
  if (!g.mechanisms.empty()) {
    nlohmann::json names = nlohmann::json::array();
    for (Mechanism m : g.mechanisms) names.push_back(to_string(m));
    j["mechanisms"] = names;
  }
  auto ratio = [](const Rational& r) {
    return nlohmann::json{{"value", boost::rational_cast<double>(r)}, {"rational", to_string(r)}};
  };
  if (g.expected_ratio) j["expected_ratio"] = ratio(*g.expected_ratio);
  if (g.chain_ratio) j["chain_ratio"] = ratio(*g.chain_ratio);
  return j;
}

namespace {

int factorial(int k) {
  int f = 1;
  for (int q = 2; q <= k; ++q) f *= q;
  return f;
}

void check_tight_k(int k) {
  if (k < 1) throw ArgumentError("K must be at least 1");
  enforce_guard(k > 4, "tight examples need K <= 4 (K * K! participants)");
}

// Columns and layer blocks of the tight examples, as member lists in layer
// order and in column order respectively.
struct TightGroups {
  std::vector<std::vector<ParticipantId>> columns;
  std::vector<std::vector<ParticipantId>> blocks;
};

TightGroups tight_groups(int k) {
  const int f = factorial(k);
  TightGroups g;
  for (int t = 1; t <= f; ++t) {
    std::vector<ParticipantId> col;
    for (int s = 1; s <= k; ++s) col.push_back(tight_id(k, s, t));
    g.columns.push_back(std::move(col));
  }
  for (int s = 1; s <= k; ++s) {
    const int width = k - s + 1;
    for (int b = 1; b <= f / width; ++b) {
      std::vector<ParticipantId> block;
      for (int t = (b - 1) * width + 1; t <= b * width; ++t) block.push_back(tight_id(k, s, t));
      g.blocks.push_back(std::move(block));
    }
  }
  return g;
}

CoalitionStructure structure_of(const std::vector<std::vector<ParticipantId>>& groups) {
  std::vector<Coalition> out;
  for (const auto& g : groups) out.push_back(Coalition::from_members(g));
  return CoalitionStructure(std::move(out));
}

Rational harmonic_rational(int k) {
  Rational h(0);
  for (int s = 1; s <= k; ++s) h += Rational(1, s);
  return h;
}

}  // namespace

ParticipantId tight_id(int k, int s, int t) { return (s - 1) * factorial(k) + (t - 1); }

Generated gen_equal_tight(int k, TightForm form) {
  check_tight_k(k);
  const int n = k * factorial(k);
  const TightGroups groups = tight_groups(k);
  Generated out;
  out.family = "equal-tight";
  out.params = {{"K", k}, {"form", form == TightForm::kTable ? "table" : "usage-groups"}};
  std::shared_ptr<const CostOracle> oracle;
  if (form == TightForm::kTable) {
    std::vector<ExplicitCostTable::Entry> entries;
    std::unordered_map<Coalition, bool, CoalitionHash> listed;
    auto add = [&](Coalition g) {
      if (listed.emplace(g, true).second) entries.push_back({g, 1.0});
    };
    for (ParticipantId i = 0; i < n; ++i) add(Coalition::singleton(i));
    for (const auto& c : groups.columns) add(Coalition::from_members(c));
    for (const auto& b : groups.blocks) add(Coalition::from_members(b));
    oracle = std::make_shared<ExplicitCostTable>(n, k, std::move(entries), ExplicitCostTable::Completion::kCase3);
    out.mechanisms = all_mechanisms();
    out.mechanisms.erase(std::remove(out.mechanisms.begin(), out.mechanisms.end(), Mechanism::kUsageBased),
                         out.mechanisms.end());
  } else {
    std::vector<UsageGroupsOracle::Group> gs;
    for (const auto& c : groups.columns) gs.push_back({c, UsageGroupsOracle::Pattern::kJoint, 1.0});
    for (const auto& b : groups.blocks) gs.push_back({b, UsageGroupsOracle::Pattern::kJoint, 1.0});
    oracle = std::make_shared<UsageGroupsOracle>(n, std::move(gs));
    out.mechanisms = all_mechanisms();
  }
  out.instance = make_instance("equal-tight-k" + std::to_string(k) +
                                   (form == TightForm::kTable ? "" : "-usage"),
                               k, std::move(oracle));
  out.stable = structure_of(groups.blocks);
  out.optimum = structure_of(groups.columns);
  out.expected_ratio = harmonic_rational(k);
  return out;
}

Generated gen_usage_lower(int k) {
  check_tight_k(k);
  const int n = k * factorial(k);
  const TightGroups groups = tight_groups(k);
  std::vector<UsageGroupsOracle::Group> gs;
  for (const auto& c : groups.columns) gs.push_back({c, UsageGroupsOracle::Pattern::kLeadSplit, 1.0});
  for (const auto& b : groups.blocks) gs.push_back({b, UsageGroupsOracle::Pattern::kJoint, 1.0});
  Generated out;
  out.family = "usage-lower";
  out.params = {{"K", k}};
  out.instance = make_instance("usage-lower-k" + std::to_string(k), k,
                               std::make_shared<UsageGroupsOracle>(n, std::move(gs)));
  out.stable = structure_of(groups.blocks);
  out.optimum = structure_of(groups.columns);
  out.mechanisms = {Mechanism::kUsageBased};
  out.expected_ratio = harmonic_rational(k);
  out.chain_ratio = Rational(k + 1, 2);
  return out;
}

namespace {

// Pair (k, k+1): k rides alone for 1, both share 4, k+1 rides alone for 2.
// Alone, each passenger pays 5.
constexpr Money kSoloFare = 5;
constexpr Money kLeadLeg = 1;
constexpr Money kSharedLeg = 4;
constexpr Money kTailLeg = 2;

std::shared_ptr<const CostOracle> ring_tables(int s) {
  std::vector<UsageTableOracle::Entry> entries;
  for (int q = 0; q < s; ++q) {
    entries.push_back({Coalition::singleton(q), {{kSoloFare, Coalition::singleton(q)}}});
  }
  for (int q = 0; q < s; ++q) {
    const int r = (q + 1) % s;
    if (s == 2 && q == 1) break;  // the only pair is already listed
    const Coalition pair = Coalition::singleton(q) | Coalition::singleton(r);
    entries.push_back({pair,
                       {{kLeadLeg, Coalition::singleton(q)},
                        {kSharedLeg, pair},
                        {kTailLeg, Coalition::singleton(r)}}});
  }
  return std::make_shared<UsageTableOracle>(s, std::move(entries));
}

// Pickup of passenger q is node 2q, dropoff 2q + 1. Roads run both ways.
std::shared_ptr<const CostOracle> ring_network(int s) {
  std::vector<TaxiOracle::Edge> edges;
  auto road = [&](int u, int v, Money fare, int time) {
    edges.push_back({u, v, fare, time});
    edges.push_back({v, u, fare, time});
  };
  for (int q = 0; q < s; ++q) {
    const int r = (q + 1) % s;
    road(2 * q, 2 * q + 1, kSoloFare, 4);
    road(2 * q, 2 * r, kLeadLeg, 1);
    road(2 * r, 2 * q + 1, kSharedLeg, 4);
    road(2 * q + 1, 2 * r + 1, kTailLeg, 2);
  }
  std::vector<TaxiOracle::Passenger> passengers;
  for (int q = 0; q < s; ++q) passengers.push_back({2 * q, 2 * q + 1, 0, 1000});
  return std::make_shared<TaxiOracle>(std::move(passengers), std::move(edges));
}

}  // namespace

Generated taxi_ring(int s, TaxiForm form) {
  if (s < 2) throw ArgumentError("a taxi ring needs at least 2 passengers");
  Generated out;
  out.family = "taxi-cycle";
  out.params = {{"s", s}, {"form", form == TaxiForm::kTables ? "tables" : "geometric"}};
  out.instance = make_instance("taxi-cycle-s" + std::to_string(s) + (form == TaxiForm::kTables ? "" : "-geometric"),
                               2, form == TaxiForm::kTables ? ring_tables(s) : ring_network(s));
  out.mechanisms = {Mechanism::kUsageBased};
  return out;
}

Generated gen_taxi_cycle(int s, TaxiForm form) {
  if (s < 3 || s % 2 == 0) {
    throw ArgumentError("taxi cycle needs an odd number of passengers >= 3 (got " + std::to_string(s) +
                        "); an even ring pairs off into a stable structure");
  }
  return taxi_ring(s, form);
}

// ---------------------------------------------------------------------------
// Random instances

std::string to_string(RandomFamily family) {
  switch (family) {
    case RandomFamily::kTable:
      return "table";
    case RandomFamily::kHotel:
      return "hotel";
    case RandomFamily::kTaxi:
      return "taxi";
    case RandomFamily::kPass:
      return "pass";
  }
  return "unknown";
}

RandomFamily parse_family(const std::string& name) {
  for (RandomFamily f : {RandomFamily::kTable, RandomFamily::kHotel, RandomFamily::kTaxi, RandomFamily::kPass}) {
    if (to_string(f) == name) return f;
  }
  throw ArgumentError("unknown random family '" + name + "' (expected table, hotel, taxi or pass)");
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::shared_ptr<const CostOracle> random_table(int n, int k, Rng& rng, double overshoot) {
  enforce_guard(count_subsets_up_to(n, std::min(n, k)) > 1'000'000, "random table with more than 10^6 coalitions");
  std::unordered_map<Coalition, Money, CoalitionHash> cost;
  std::vector<ExplicitCostTable::Entry> entries;
  for_each_subset_up_to(Coalition::all(n), std::min(n, k), [&](Coalition g) {
    Money c = 0;
    if (g.size() == 1) {
      c = uniform(rng, 0.5, 2.0);
    } else {
      Money lo = 0;
      Money sum = 0;
      g.for_each([&](ParticipantId i) {
        lo = std::max(lo, cost.at(g.without(i)));
        sum += cost.at(Coalition::singleton(i));
      });
      const Money hi = sum * (1 + overshoot);
      const double u = uniform(rng, 0, 1);
      c = lo + (hi - lo) * u * u;
    }
    cost.emplace(g, c);
    entries.push_back({g, c});
    return true;
  });
  return std::make_shared<ExplicitCostTable>(n, std::min(n, k), std::move(entries),
                                             ExplicitCostTable::Completion::kNone);
}

std::shared_ptr<const CostOracle> random_hotel(int n, Rng& rng) {
  const int horizon = 2 * n;
  std::vector<HotelOracle::Traveler> travelers;
  for (int i = 0; i < n; ++i) {
    HotelOracle::Traveler t;
    t.t_in = uniform_int(rng, 1, horizon);
    t.t_out = std::min(horizon, t.t_in + uniform_int(rng, 0, 2));
    const int mask = uniform_int(rng, 1, 7);
    for (int l = 0; l < 3; ++l) {
      if (mask & (1 << l)) t.areas.push_back(l);
    }
    travelers.push_back(std::move(t));
  }
  return std::make_shared<HotelOracle>(std::move(travelers), HotelOracle::Rates{});
}

std::shared_ptr<const CostOracle> random_taxi(int n, Rng& rng) {
  const int nodes = std::max(4, n + 2);
  std::vector<TaxiOracle::Edge> edges;
  for (int v = 0; v < nodes; ++v) {
    const int w = (v + 1) % nodes;
    const int f1 = uniform_int(rng, 1, 4);
    const int f2 = uniform_int(rng, 1, 4);
    edges.push_back({v, w, static_cast<Money>(f1), f1});
    edges.push_back({w, v, static_cast<Money>(f2), f2});
  }
  for (int c = 0; c < nodes; ++c) {
    const int u = uniform_int(rng, 0, nodes - 1);
    const int v = uniform_int(rng, 0, nodes - 1);
    if (u == v) continue;
    const int f = uniform_int(rng, 1, 6);
    edges.push_back({u, v, static_cast<Money>(f), f});
  }
  // Travel time equals fare, so the cheapest path is also the fastest.
  const TaxiOracle probe({{0, 1, 0, 1000000}}, edges);
  std::vector<TaxiOracle::Passenger> passengers;
  for (int i = 0; i < n; ++i) {
    const int src = uniform_int(rng, 0, nodes - 1);
    int dst = uniform_int(rng, 0, nodes - 2);
    if (dst >= src) ++dst;
    const int direct = static_cast<int>(std::lround(probe.path_fare(src, dst)));
    const int earliest = uniform_int(rng, 0, 4);
    const int latest = earliest + 2 * direct + uniform_int(rng, 0, 4);
    passengers.push_back({src, dst, earliest, latest});
  }
  return std::make_shared<TaxiOracle>(std::move(passengers), std::move(edges));
}

std::shared_ptr<const CostOracle> random_pass(int n, Rng& rng) {
  const int horizon = 3 * n;
  std::vector<int> slots(horizon);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<std::vector<int>> users;
  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    const int count = uniform_int(rng, 1, 3);
    std::vector<int> mine(slots.begin() + static_cast<long>(next), slots.begin() + static_cast<long>(next + count));
    next += count;
    std::sort(mine.begin(), mine.end());
    users.push_back(std::move(mine));
  }
  std::vector<std::vector<int>> passes;
  std::vector<int> universal(horizon);
  std::iota(universal.begin(), universal.end(), 0);
  passes.push_back(universal);
  for (int q = 0; q < n; ++q) {
    const int len = uniform_int(rng, 2, std::max(2, horizon / 2));
    const int start = uniform_int(rng, 0, horizon - len);
    std::vector<int> window(len);
    std::iota(window.begin(), window.end(), start);
    passes.push_back(std::move(window));
  }
  return std::make_shared<PassOracle>(std::move(users), std::move(passes), 1.0);
}

}  // namespace

Generated gen_random(RandomFamily family, int n, int k, std::uint64_t seed, const RandomOptions& options) {
  if (n < 1) throw ArgumentError("n must be at least 1");
  if (k < 1) throw ArgumentError("K must be at least 1");
  if (options.overshoot < 0) throw ArgumentError("overshoot must be non-negative");
  Rng rng(seed);
  std::shared_ptr<const CostOracle> oracle;
  switch (family) {
    case RandomFamily::kTable:
      oracle = random_table(n, k, rng, options.overshoot);
      break;
    case RandomFamily::kHotel:
      enforce_guard(n > 64, "random hotel instances with more than 64 travelers");
      oracle = random_hotel(n, rng);
      break;
    case RandomFamily::kTaxi:
      enforce_guard(n > 16, "random taxi instances with more than 16 passengers");
      oracle = random_taxi(n, rng);
      break;
    case RandomFamily::kPass:
      enforce_guard(n > 64, "random pass instances with more than 64 users");
      oracle = random_pass(n, rng);
      break;
  }
  Generated out;
  out.family = "random-" + to_string(family);
  out.params = {{"family", to_string(family)}, {"n", n}, {"K", k}, {"seed", seed}};
  if (options.overshoot > 0) out.params["overshoot"] = options.overshoot;
  out.instance = make_instance(
      "random-" + to_string(family) + "-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s" + std::to_string(seed),
      k, std::move(oracle));
  return out;
}

}  // namespace coalition
