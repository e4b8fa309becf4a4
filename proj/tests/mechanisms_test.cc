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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coalition/domains.h"
#include "coalition/errors.h"
#include "coalition/generators.h"
#include "coalition/mechanisms.h"
#include "coalition/usage_tables.h"
#include "nash_oracle.h"
#include "test_util.h"

namespace coalition {
namespace {

using testing::C;
using testing::table_instance;

// c = (1, 1, 0.1), every coalition of 0 and 1 costs 1, triple costs 1.
Instance footnote_instance() {
  return table_instance(3, 3, [](Coalition g) {
    if (g == C({2})) return 0.1;
    return 1.0;
  });
}

TEST(EqualSplitTest, Examples) {
  const Generated tight3 = gen_equal_tight(3);
  const PaymentVector pv = pay_equal(C({tight_id(3, 2, 1), tight_id(3, 2, 2)}), *tight3.instance.oracle);
  EXPECT_DOUBLE_EQ(pv.payments[0], 0.5);
  EXPECT_DOUBLE_EQ(pv.payments[1], 0.5);

  const Instance two = table_instance(2, 2, [](Coalition g) { return g.size() == 2 ? 2.4 : (g == C({0}) ? 2 : 1); });
  EXPECT_DOUBLE_EQ(pay_equal(C({0}), *two.oracle).payments[0], 2.0);
  const PaymentVector pair = pay_equal(C({0, 1}), *two.oracle);
  EXPECT_DOUBLE_EQ(pair.payments[0], 1.2);
  EXPECT_DOUBLE_EQ(pair.payments[1], 1.2);
}

TEST(ProportionalTest, Examples) {
  const Instance same = table_instance(2, 2, [](Coalition) { return 1.0; });
  const PaymentVector a = pay_proportional(C({0, 1}), *same.oracle);
  EXPECT_DOUBLE_EQ(a.payments[0], 0.5);
  EXPECT_DOUBLE_EQ(a.payments[1], 0.5);

  const Instance two = table_instance(2, 2, [](Coalition g) { return g.size() == 2 ? 2.4 : (g == C({0}) ? 2 : 1); });
  const PaymentVector b = pay_proportional(C({0, 1}), *two.oracle);
  EXPECT_NEAR(b.payments[0], 1.6, 1e-12);
  EXPECT_NEAR(b.payments[1], 0.8, 1e-12);

  const Instance full = table_instance(2, 2, [](Coalition g) { return g.size() == 2 ? 3.0 : (g == C({0}) ? 2 : 1); });
  const PaymentVector c = pay_proportional(C({0, 1}), *full.oracle);
  EXPECT_NEAR(c.payments[0], 2.0, 1e-12);
  EXPECT_NEAR(c.payments[1], 1.0, 1e-12);
}

TEST(EgalitarianTest, Examples) {
  const Instance fn = footnote_instance();
  const PaymentVector pv = pay_egalitarian(C({0, 1, 2}), *fn.oracle);
  EXPECT_NEAR(pv.payments[2], 0.1 - 1.1 / 3, 1e-12);
  EXPECT_NEAR(pv.payments[2], -0.26666666666, 1e-9);
  EXPECT_NEAR(utility_of(2, pv, *fn.oracle), 1.1 / 3, 1e-12);
  EXPECT_NEAR(utility_of(0, pv, *fn.oracle), 1.1 / 3, 1e-12);

  const PaymentVector single = pay_egalitarian(C({1}), *fn.oracle);
  EXPECT_DOUBLE_EQ(single.payments[0], 1.0);
  EXPECT_DOUBLE_EQ(single.utilities[0], 0.0);

  const Instance two = table_instance(2, 2, [](Coalition g) { return g.size() == 2 ? 2.4 : (g == C({0}) ? 2 : 1); });
  const PaymentVector b = pay_egalitarian(C({0, 1}), *two.oracle);
  EXPECT_NEAR(b.payments[0], 1.7, 1e-12);
  EXPECT_NEAR(b.payments[1], 0.7, 1e-12);
  EXPECT_NEAR(b.utilities[0], 0.3, 1e-12);
  EXPECT_NEAR(b.utilities[1], 0.3, 1e-12);
}

TEST(NashTest, Examples) {
  const Instance fn = footnote_instance();
  const PaymentVector nn = pay_nash(C({0, 1, 2}), *fn.oracle, true);
  EXPECT_NEAR(nn.payments[0], 0.5, 1e-12);
  EXPECT_NEAR(nn.payments[1], 0.5, 1e-12);
  EXPECT_NEAR(nn.payments[2], 0.0, 1e-12);
  EXPECT_NEAR(utility_of(2, nn, *fn.oracle), 0.1, 1e-12);

  const std::vector<double> oracle = testing::numerical_nash({1, 1, 0.1}, 1);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(nn.payments[r], oracle[r], 1e-6);

  const PaymentVector un = pay_nash(C({0, 1, 2}), *fn.oracle, false);
  const PaymentVector eg = pay_egalitarian(C({0, 1, 2}), *fn.oracle);
  for (int r = 0; r < 3; ++r) EXPECT_DOUBLE_EQ(un.payments[r], eg.payments[r]);

  const std::vector<double> equal = split_cost(Mechanism::kNashNonNegative, 2.1, std::vector<double>{1, 1, 1});
  for (double p : equal) EXPECT_NEAR(p, 0.7, 1e-12);
}

TEST(NashTest, ThresholdTieExcludesMember) {
  // c = (2, 1), cost 1: the second member sits exactly on the threshold
  // (2 - 1) / 1 = 1, so only the first member pays.
  const std::vector<double> p = split_cost(Mechanism::kNashNonNegative, 1.0, std::vector<double>{2, 1});
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
}

TEST(NashTest, MatchesNumericalOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0, 1);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    std::vector<double> c(m);
    for (double& x : c) x = 0.05 + 2.95 * unit(rng) * unit(rng);
    const double sum = std::accumulate(c.begin(), c.end(), 0.0);
    const double top = *std::max_element(c.begin(), c.end());
    const double cost = top + (sum - top) * unit(rng);
    const std::vector<double> closed = split_cost(Mechanism::kNashNonNegative, cost, c);
    const std::vector<double> numeric = testing::numerical_nash(c, cost);
    for (int r = 0; r < m; ++r) {
      worst = std::max(worst, std::abs(closed[r] - numeric[r]));
      EXPECT_GE(closed[r], -1e-12);
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(MechanismProperties, BudgetBalanceSymmetryAndEqualUtility) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Generated g = gen_random(RandomFamily::kTable, 8, 4, seed);
    const CostOracle& o = *g.instance.oracle;
    for_each_subset_up_to(Coalition::all(8), 4, [&](Coalition c) {
      const Money cost = o.cost(c);
      for (Mechanism m : all_mechanisms()) {
        if (m == Mechanism::kUsageBased) continue;
        const PaymentVector pv = pay(m, c, o);
        EXPECT_NEAR(pv.total(), cost, 1e-9 * std::max(1.0, cost)) << to_string(m) << c.to_string();
        for (std::size_t r = 0; r < pv.payments.size(); ++r) {
          EXPECT_NEAR(pv.utilities[r], o.default_cost(c.members()[r]) - pv.payments[r], 1e-12);
        }
      }
      const PaymentVector eg = pay_egalitarian(c, o);
      const auto [lo, hi] = std::minmax_element(eg.utilities.begin(), eg.utilities.end());
      EXPECT_LE(*hi - *lo, 1e-9);
      const PaymentVector un = pay_nash(c, o, false);
      for (std::size_t r = 0; r < un.payments.size(); ++r) EXPECT_DOUBLE_EQ(un.payments[r], eg.payments[r]);
      return true;
    });
  }
}

TEST(MechanismProperties, EqualDefaultsGetEqualPayments) {
  const std::vector<double> d = {1.5, 0.7, 1.5, 0.7, 1.5};
  for (Mechanism m : {Mechanism::kProportional, Mechanism::kEgalitarian, Mechanism::kNashUnconstrained,
                      Mechanism::kNashNonNegative}) {
    for (double cost : {1.5, 2.5, 4.0, 5.9}) {
      const std::vector<double> p = split_cost(m, cost, d);
      EXPECT_NEAR(p[0], p[2], 1e-12);
      EXPECT_NEAR(p[0], p[4], 1e-12);
      EXPECT_NEAR(p[1], p[3], 1e-12);
    }
  }
}

TEST(UsageTest, PassExample) {
  const PassOracle pass({{1, 2}, {4}}, {{1, 2, 3, 4, 5}});
  const std::optional<Resource> r = pass.best_resource(C({0, 1}));
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->total_cost, 5.0);
  EXPECT_DOUBLE_EQ(exclusive_cost(*r, C({0, 1})), 2.0);
  EXPECT_DOUBLE_EQ(exclusive_cost(*r, C({0})), 2.0);
  EXPECT_DOUBLE_EQ(exclusive_cost(*r, C({1})), 1.0);
  const PaymentVector pv = pay_usage(C({0, 1}), pass);
  EXPECT_DOUBLE_EQ(pv.payments[0], 3.0);
  EXPECT_DOUBLE_EQ(pv.payments[1], 2.0);
  EXPECT_DOUBLE_EQ(pv.total(), 5.0);
  EXPECT_DOUBLE_EQ(pay_usage(C({1}), pass).payments[0], pass.cost(C({1})));
  EXPECT_THROW(exclusive_cost(C({0}), C({1}), pass), ArgumentError);
}

TEST(UsageTest, DisjointUsageHasNoJointExclusiveCost) {
  std::vector<UsageTableOracle::Entry> entries = {
      {C({0}), {{2.0, C({0})}}},
      {C({1}), {{3.0, C({1})}}},
      {C({0, 1}), {{1.5, C({0})}, {2.5, C({1})}}},
  };
  const UsageTableOracle t(2, entries);
  EXPECT_DOUBLE_EQ(exclusive_cost(C({0, 1}), C({0, 1}), t), 0.0);
}

TEST(UsageTest, UsageLowerExclusiveCosts) {
  const Generated g = gen_usage_lower(3);
  const auto& o = dynamic_cast<const ResourceOracle&>(*g.instance.oracle);
  const Coalition block = C({tight_id(3, 1, 1), tight_id(3, 1, 2), tight_id(3, 1, 3)});
  EXPECT_DOUBLE_EQ(exclusive_cost(block, block, o), 1.0);
  for_each_subset_up_to(block, 2, [&](Coalition l) {
    EXPECT_DOUBLE_EQ(exclusive_cost(block, l, o), 0.0);
    return true;
  });
  for (int s = 1; s <= 3; ++s) {
    Coalition chain;
    for (int q = s; q <= 3; ++q) chain = chain.with(tight_id(3, q, 2));
    const PaymentVector pv = pay_usage(chain, o);
    EXPECT_GE(pv.payment_of(tight_id(3, s, 2)), 0.5);
  }
}

TEST(UsageTest, ExclusiveDecompositionReproducesPayments) {
  for (RandomFamily f : {RandomFamily::kPass, RandomFamily::kHotel, RandomFamily::kTaxi}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const int n = f == RandomFamily::kTaxi ? 5 : 6;
      const Generated g = gen_random(f, n, n, seed);
      const auto& o = dynamic_cast<const ResourceOracle&>(*g.instance.oracle);
      for_each_subset_up_to(Coalition::all(n), f == RandomFamily::kTaxi ? 4 : 6, [&](Coalition c) {
        const std::optional<Resource> r = o.best_resource(c);
        if (!r) return true;
        std::vector<double> p(c.size(), 0);
        for_each_subset_up_to(c, c.size(), [&](Coalition l) {
          const double x = exclusive_cost(*r, l) / l.size();
          l.for_each([&](ParticipantId i) { p[c.rank_of(i)] += x; });
          return true;
        });
        const std::vector<double> direct = usage_payments(*r);
        for (std::size_t q = 0; q < p.size(); ++q) EXPECT_NEAR(p[q], direct[q], 1e-9);
        return true;
      });
    }
  }
}

TEST(MechanismErrors, UnsupportedAndInfeasible) {
  const Instance t = table_instance(2, 2, [](Coalition) { return 1.0; });
  EXPECT_THROW(pay(Mechanism::kUsageBased, C({0}), *t.oracle), UnsupportedError);
  const PassOracle pass({{1}, {1}}, {{1}});
  EXPECT_THROW(pay_usage(C({0, 1}), pass), InfeasibleCoalitionError);
  EXPECT_THROW(pay_equal(C({0, 1}), pass), InfeasibleCoalitionError);
  const PaymentVector pv = pay_equal(C({0}), *t.oracle);
  EXPECT_THROW(utility_of(1, pv, *t.oracle), ArgumentError);
  EXPECT_THROW(parse_mechanism("shapley"), ArgumentError);
}

TEST(MechanismJson, Shape) {
  const Instance fn = footnote_instance();
  const nlohmann::json j = to_json(pay_nash(C({0, 1, 2}), *fn.oracle, true));
  EXPECT_EQ(j["members"], nlohmann::json({0, 1, 2}));
  EXPECT_EQ(j["mechanism"], "nash");
  EXPECT_EQ(j["payments"].size(), 3u);
  EXPECT_EQ(j["utilities"].size(), 3u);
}

}  // namespace
}  // namespace coalition
