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


#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "coalition/domains.h"
#include "coalition/generators.h"
#include "coalition/optimum.h"
#include "coalition/stability.h"
#include "test_util.h"

namespace coalition {
namespace {

using testing::C;
using testing::table_instance;

const std::vector<Mechanism> kSplitMechanisms = {Mechanism::kEqualSplit, Mechanism::kProportional,
                                                 Mechanism::kEgalitarian, Mechanism::kNashUnconstrained,
                                                 Mechanism::kNashNonNegative};

// Naive blocking search over all bitmasks, smallest by (size, sorted members).
std::optional<Coalition> naive_blocking(const CoalitionStructure& p, Mechanism m, const Instance& inst) {
  std::optional<Coalition> best;
  for (std::uint32_t mask = 1; mask < (1U << inst.n); ++mask) {
    const Coalition b = Coalition::from_mask(mask);
    if (b.size() > inst.k || !is_feasible_cost(inst.oracle->cost(b))) continue;
    const PaymentVector pb = pay(m, b, *inst.oracle);
    bool blocks = true;
    b.for_each([&](ParticipantId i) {
      const PaymentVector pc = pay(m, p.coalition_of(i), *inst.oracle);
      if (!(pb.payment_of(i) < pc.payment_of(i) - kEps)) blocks = false;
    });
    if (!blocks) continue;
    if (!best || b.size() < best->size() || (b.size() == best->size() && b.members() < best->members())) best = b;
  }
  return best;
}

Instance all_ones(int n, int k) { return table_instance(n, k, [](Coalition) { return 1.0; }); }

TEST(BlockingTest, Examples) {
  const Generated tight3 = gen_equal_tight(3);
  EXPECT_FALSE(find_blocking_coalition(*tight3.stable, Mechanism::kEqualSplit, tight3.instance));
  EXPECT_TRUE(is_stable(*tight3.stable, Mechanism::kEqualSplit, tight3.instance));
  // Columns cost the same per member as the layer-1 blocks, so nobody strictly
  // gains by leaving them either.
  EXPECT_TRUE(is_stable(*tight3.optimum, Mechanism::kEqualSplit, tight3.instance));
  const CoalitionStructure mixed({C({0, 1, 2}), C({3, 4, 5}), C({6, 7, 8}), C({9, 10, 11}), C({12, 13, 14}),
                                  C({15, 16, 17})});
  const std::optional<Coalition> w = find_blocking_coalition(mixed, Mechanism::kEqualSplit, tight3.instance);
  ASSERT_TRUE(w);
  EXPECT_EQ(naive_blocking(mixed, Mechanism::kEqualSplit, tight3.instance), w);

  const Instance pair = all_ones(2, 2);
  EXPECT_EQ(find_blocking_coalition(default_structure(2), Mechanism::kEqualSplit, pair), C({0, 1}));

  const StabilityReport r = check_stability(default_structure(2), Mechanism::kEqualSplit, pair);
  EXPECT_EQ(r.status, StabilityReport::Status::kBlocked);
  EXPECT_EQ(r.witness, C({0, 1}));
}

TEST(BlockingTest, GrandCoalitionStableWhenCheap) {
  const Instance inst = table_instance(3, 3, [](Coalition g) { return 0.5 + 0.1 * g.size(); });
  EXPECT_TRUE(is_stable(CoalitionStructure({C({0, 1, 2})}), Mechanism::kEqualSplit, inst));
}

TEST(BlockingTest, MatchesNaiveSearch) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 7, 3, seed);
    const std::vector<CoalitionStructure> parts = testing::all_partitions(7, 3);
    for (Mechanism m : kSplitMechanisms) {
      for (std::size_t q = seed; q < parts.size(); q += 97) {
        EXPECT_EQ(find_blocking_coalition(parts[q], m, g.instance), naive_blocking(parts[q], m, g.instance))
            << to_string(m) << " " << parts[q].to_string();
      }
    }
  }
}

TEST(BlockingTest, WitnessImprovesEveryMember) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kPass, 7, 3, seed);
    const CoalitionStructure p = default_structure(7);
    const std::optional<Coalition> w = find_blocking_coalition(p, Mechanism::kUsageBased, g.instance);
    if (!w) continue;
    const PaymentVector pv = pay(Mechanism::kUsageBased, *w, *g.instance.oracle);
    w->for_each([&](ParticipantId i) {
      EXPECT_LT(pv.payment_of(i), g.instance.oracle->default_cost(i) - kEps);
    });
  }
}

TEST(GreedyTest, Examples) {
  EXPECT_EQ(greedy_stable(all_ones(3, 3), Mechanism::kEqualSplit), CoalitionStructure({C({0, 1, 2})}));

  const Generated tight3 = gen_equal_tight(3);
  const CoalitionStructure p = greedy_stable(tight3.instance, Mechanism::kEqualSplit);
  EXPECT_TRUE(is_stable(p, Mechanism::kEqualSplit, tight3.instance));
  EXPECT_DOUBLE_EQ(structure_cost(p, *tight3.instance.oracle), 11.0);

  const Instance dominant = table_instance(3, 3, [](Coalition g) { return g == C({2}) ? 0.1 : 1.0; });
  EXPECT_EQ(greedy_stable(dominant, Mechanism::kEgalitarian), CoalitionStructure({C({0, 1}), C({2})}));
}

TEST(GreedyTest, StableForEveryMechanismOnRandomTables) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 8, 3, seed);
    for (Mechanism m : kSplitMechanisms) {
      const CoalitionStructure p = greedy_stable(g.instance, m);
      EXPECT_FALSE(naive_blocking(p, m, g.instance)) << to_string(m) << " seed " << seed;
    }
  }
}

TEST(GreedyTest, UsageOnPassAndHotel) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated pass = gen_random(RandomFamily::kPass, 8, 3, seed);
    EXPECT_NO_THROW(greedy_stable(pass.instance, Mechanism::kUsageBased));
    const Generated hotel = gen_random(RandomFamily::kHotel, 8, 2, seed);
    EXPECT_NO_THROW(greedy_stable(hotel.instance, Mechanism::kUsageBased));
  }
}

TEST(GreedyTest, ScaleInvariant) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 7, 3, seed);
    const Instance scaled =
        table_instance(7, 3, [&](Coalition c) { return 3.7 * g.instance.oracle->cost(c); });
    for (Mechanism m : kSplitMechanisms) {
      EXPECT_EQ(greedy_stable(g.instance, m), greedy_stable(scaled, m)) << to_string(m);
    }
  }
}

TEST(GreedyTest, UsageNeedsResources) {
  EXPECT_THROW(greedy_stable(all_ones(2, 2), Mechanism::kUsageBased), UnsupportedError);
}

TEST(GreedyTest, NoSinkRaisesWithCycle) {
  const Generated ring = gen_taxi_cycle(3);
  try {
    greedy_stable(ring.instance, Mechanism::kUsageBased);
    FAIL() << "expected NoStableStructureError";
  } catch (const NoStableStructureError& e) {
    ASSERT_TRUE(e.cycle());
    EXPECT_TRUE(verify_cycle(*e.cycle(), Mechanism::kUsageBased, ring.instance));
  }
}

TEST(DynamicsTest, Examples) {
  const StabilityReport r = improvement_dynamics(all_ones(3, 3), default_structure(3), Mechanism::kEqualSplit, 100);
  EXPECT_EQ(r.status, StabilityReport::Status::kStable);
  EXPECT_EQ(r.structure, CoalitionStructure({C({0, 1, 2})}));
  EXPECT_LE(r.steps, 3);

  const Generated tight3 = gen_equal_tight(3);
  const StabilityReport fixed = improvement_dynamics(tight3.instance, *tight3.stable, Mechanism::kEqualSplit, 5);
  EXPECT_EQ(fixed.status, StabilityReport::Status::kStable);
  EXPECT_EQ(fixed.steps, 0);

  const Generated ring = gen_taxi_cycle(5);
  const StabilityReport cyc = improvement_dynamics(ring.instance, default_structure(5), Mechanism::kUsageBased, 1000);
  EXPECT_EQ(cyc.status, StabilityReport::Status::kCycle);
  ASSERT_TRUE(cyc.cycle);
  EXPECT_TRUE(verify_cycle(*cyc.cycle, Mechanism::kUsageBased, ring.instance));

  const StabilityReport capped = improvement_dynamics(ring.instance, default_structure(5), Mechanism::kUsageBased, 1);
  EXPECT_EQ(capped.status, StabilityReport::Status::kIterationCap);
  EXPECT_TRUE(capped.witness);
  EXPECT_THROW(improvement_dynamics(ring.instance, default_structure(5), Mechanism::kUsageBased, 0), ArgumentError);
}

TEST(DynamicsTest, StableReportsAreStable) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 8, 3, seed);
    for (Mechanism m : kSplitMechanisms) {
      const StabilityReport r = improvement_dynamics(g.instance, default_structure(8), m, 10000);
      if (r.status == StabilityReport::Status::kStable) {
        EXPECT_FALSE(naive_blocking(r.structure, m, g.instance));
      }
      EXPECT_EQ(static_cast<int>(r.trace.size()), r.steps);
    }
  }
}

TEST(CycleTest, NoneForSplitMechanisms) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 7, 3, seed);
    for (Mechanism m : kSplitMechanisms) EXPECT_FALSE(detect_cyclic_preference(g.instance, m)) << to_string(m);
  }
}

TEST(CycleTest, TaxiRingCycleHasLengthS) {
  for (int s : {3, 5, 7}) {
    const Generated ring = gen_taxi_cycle(s);
    const std::optional<PreferenceCycle> c = detect_cyclic_preference(ring.instance, Mechanism::kUsageBased);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->size(), static_cast<std::size_t>(s));
    EXPECT_TRUE(verify_cycle(*c, Mechanism::kUsageBased, ring.instance));
  }
}

TEST(CycleTest, VerifyRejectsBrokenCycles) {
  const Generated ring = gen_taxi_cycle(3);
  PreferenceCycle c = *detect_cyclic_preference(ring.instance, Mechanism::kUsageBased);
  std::reverse(c.coalitions.begin(), c.coalitions.end());
  EXPECT_FALSE(verify_cycle(c, Mechanism::kUsageBased, ring.instance));
  EXPECT_FALSE(verify_cycle(PreferenceCycle{}, Mechanism::kUsageBased, ring.instance));
}

TEST(EnumerationTest, Examples) {
  const std::vector<CoalitionStructure> column = enumerate_stable_structures(all_ones(3, 3), Mechanism::kEqualSplit);
  EXPECT_NE(std::find(column.begin(), column.end(), CoalitionStructure({C({0, 1, 2})})), column.end());

  EXPECT_TRUE(enumerate_stable_structures(gen_taxi_cycle(3).instance, Mechanism::kUsageBased).empty());
  EXPECT_TRUE(enumerate_stable_structures(gen_taxi_cycle(5).instance, Mechanism::kUsageBased).empty());
  EXPECT_FALSE(enumerate_stable_structures(taxi_ring(4).instance, Mechanism::kUsageBased).empty());

  const std::vector<CoalitionStructure> one = enumerate_stable_structures(all_ones(1, 1), Mechanism::kEqualSplit);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], default_structure(1));

  EXPECT_THROW(enumerate_stable_structures(gen_equal_tight(3).instance, Mechanism::kEqualSplit), ResourceLimitError);
}

TEST(EnumerationTest, MatchesFilteredPartitions) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 7, 3, seed);
    const std::vector<CoalitionStructure> parts = testing::all_partitions(7, 3);
    for (Mechanism m : {Mechanism::kEqualSplit, Mechanism::kProportional, Mechanism::kNashNonNegative}) {
      std::set<std::string> expected;
      for (const CoalitionStructure& p : parts) {
        if (!naive_blocking(p, m, g.instance)) expected.insert(p.to_string());
      }
      std::set<std::string> got;
      for (const CoalitionStructure& p : enumerate_stable_structures(g.instance, m)) got.insert(p.to_string());
      EXPECT_EQ(got, expected) << to_string(m) << " seed " << seed;
    }
  }
}

TEST(EnumerationTest, NashStableStructuresHaveNonNegativeEgalitarianPayments) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 8, 3, seed);
    const Instance t = truncated(g.instance);
    for (const CoalitionStructure& p : enumerate_stable_structures(t, Mechanism::kNashNonNegative)) {
      for (Coalition c : p) {
        for (Money x : pay_egalitarian(c, *t.oracle).payments) EXPECT_GE(x, -1e-9);
      }
    }
  }
}

TEST(EnumerationTest, StableCostsBoundedBySingletons) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 8, 4, seed);
    const Money self = structure_cost(default_structure(8), *g.instance.oracle);
    for (Mechanism m : kSplitMechanisms) {
      for (const CoalitionStructure& p : enumerate_stable_structures(g.instance, m)) {
        EXPECT_LE(structure_cost(p, *g.instance.oracle), self + 1e-9);
      }
    }
  }
}

TEST(RefinementTest, Examples) {
  const Instance dominant = table_instance(3, 3, [](Coalition g) { return g == C({2}) ? 0.1 : 1.0; });
  const CoalitionStructure r = nash_positive_refinement(CoalitionStructure({C({0, 1, 2})}), *dominant.oracle);
  EXPECT_EQ(r, CoalitionStructure({C({0, 1}), C({2})}));
  EXPECT_NEAR(structure_cost(r, *dominant.oracle), 1.1, 1e-12);
  EXPECT_LE(structure_cost(r, *dominant.oracle), (std::sqrt(3.0) + 1) * 1.0);

  const Instance even = table_instance(4, 4, [](Coalition g) { return 0.6 * g.size() + 0.3; });
  const CoalitionStructure grand({C({0, 1, 2, 3})});
  EXPECT_EQ(nash_positive_refinement(grand, *even.oracle), grand);
  EXPECT_EQ(nash_positive_refinement(default_structure(4), *even.oracle), default_structure(4));
}

TEST(RefinementTest, PositivePaymentsAndCostBound) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 9, 4, seed);
    const Instance t = truncated(g.instance);
    for (const CoalitionStructure& p : {greedy_stable(t, Mechanism::kEqualSplit), exact_optimum(t).structure}) {
      const CoalitionStructure r = nash_positive_refinement(p, *t.oracle);
      r.validate(9, 4);
      for (Coalition c : r) {
        for (Money x : pay_nash(c, *t.oracle, true).payments) EXPECT_GT(x, 0);
      }
      EXPECT_LE(structure_cost(r, *t.oracle), (std::sqrt(4.0) + 1) * structure_cost(p, *t.oracle) + 1e-9);
    }
  }
}

// Largest chain ratio over every ordered tuple, directly.
double naive_chain(const Instance& inst, Mechanism m) {
  const int len = std::min(inst.k, inst.n);
  std::vector<ParticipantId> ids(inst.n);
  std::iota(ids.begin(), ids.end(), 0);
  double best = -1;
  std::vector<ParticipantId> tuple;
  std::function<void(Coalition)> rec = [&](Coalition used) {
    if (static_cast<int>(tuple.size()) == len) {
      const Coalition h1 = Coalition::from_members(tuple);
      const Money c = inst.oracle->cost(h1);
      if (!is_feasible_cost(c)) return;
      double sum = 0;
      Coalition h = h1;
      for (ParticipantId i : tuple) {
        sum += pay(m, h, *inst.oracle).payment_of(i);
        h = h.without(i);
      }
      best = std::max(best, sum / c);
      return;
    }
    for (ParticipantId i : ids) {
      if (used.contains(i)) continue;
      tuple.push_back(i);
      rec(used.with(i));
      tuple.pop_back();
    }
  };
  rec(Coalition());
  return best;
}

TEST(ChainTest, Examples) {
  EXPECT_NEAR(chain_ratio(all_ones(4, 1), Mechanism::kEqualSplit).ratio, 1.0, 1e-12);
  const Generated tight3 = gen_equal_tight(3);
  const ChainDiagnostic d = chain_ratio(tight3.instance, Mechanism::kEqualSplit);
  EXPECT_NEAR(d.ratio, 11.0 / 6.0, 1e-12);
  EXPECT_EQ(d.chain.size(), 3u);
  Coalition h = Coalition::from_members(d.chain);
  double sum = 0;
  for (ParticipantId i : d.chain) {
    sum += pay_equal(h, *tight3.instance.oracle).payment_of(i);
    h = h.without(i);
  }
  EXPECT_NEAR(sum / tight3.instance.oracle->cost(Coalition::from_members(d.chain)), d.ratio, 1e-12);
}

TEST(ChainTest, MatchesNaiveAndHarmonicBound) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 6, 3, seed);
    for (Mechanism m : {Mechanism::kEqualSplit, Mechanism::kProportional}) {
      const double exact = chain_ratio(g.instance, m).ratio;
      EXPECT_NEAR(exact, naive_chain(g.instance, m), 1e-12);
      if (m == Mechanism::kEqualSplit) EXPECT_LE(exact, harmonic(3) + 1e-9);
    }
    ChainOptions sample;
    sample.mode = ChainOptions::Mode::kSample;
    sample.samples = 500;
    EXPECT_LE(chain_ratio(g.instance, Mechanism::kEqualSplit, sample).ratio,
              chain_ratio(g.instance, Mechanism::kEqualSplit).ratio + 1e-12);
  }
}

TEST(StabilityJson, Shapes) {
  const Generated ring = gen_taxi_cycle(3);
  const StabilityReport r = improvement_dynamics(ring.instance, default_structure(3), Mechanism::kUsageBased, 50);
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j["status"], "cycle");
  EXPECT_TRUE(j.contains("cycle"));
  EXPECT_EQ(j["cycle"].size(), 3u);
  EXPECT_TRUE(j["cycle"][0].contains("participant"));
  EXPECT_EQ(to_json(CoalitionStructure({C({0, 2}), C({1})})), nlohmann::json::parse("[[0,2],[1]]"));
}

}  // namespace
}  // namespace coalition
