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

#include "coalition/mechanisms.h"

#include <algorithm>
#include <numeric>

#include "coalition/errors.h"

namespace coalition {

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kEqualSplit:
      return "equal";
    case Mechanism::kProportional:
      return "proportional";
    case Mechanism::kEgalitarian:
      return "egalitarian";
    case Mechanism::kNashUnconstrained:
      return "nash-unconstrained";
    case Mechanism::kNashNonNegative:
      return "nash";
    case Mechanism::kUsageBased:
      return "usage";
  }
  return "unknown";
}

Mechanism parse_mechanism(const std::string& name) {
  for (Mechanism m : all_mechanisms()) {
    if (to_string(m) == name) return m;
  }
  throw ArgumentError("unknown mechanism '" + name +
                      "' (expected equal, proportional, egalitarian, nash, nash-unconstrained or usage)");
}

const std::vector<Mechanism>& all_mechanisms() {
  static const std::vector<Mechanism> kAll = {
      Mechanism::kEqualSplit,        Mechanism::kProportional,    Mechanism::kEgalitarian,
      Mechanism::kNashUnconstrained, Mechanism::kNashNonNegative, Mechanism::kUsageBased,
  };
  return kAll;
}

Money PaymentVector::payment_of(ParticipantId i) const {
  if (!coalition.contains(i)) {
    throw ArgumentError("participant " + std::to_string(i) + " is not in " + coalition.to_string());
  }
  return payments[coalition.rank_of(i)];
}

Money PaymentVector::utility_of(ParticipantId i) const {
  if (!coalition.contains(i)) {
    throw ArgumentError("participant " + std::to_string(i) + " is not in " + coalition.to_string());
  }
  return utilities[coalition.rank_of(i)];
}

Money PaymentVector::total() const { return std::accumulate(payments.begin(), payments.end(), Money{0}); }

namespace {

// Water-filling for non-negative Nash payments. Members are ranked by
// decreasing default cost; the top m pay and share the surplus of the top m
// equally, the rest pay nothing.
std::vector<Money> nash_nonnegative(Money cost, std::span<const Money> defaults) {
  const int size = static_cast<int>(defaults.size());
  std::vector<int> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return defaults[a] > defaults[b]; });

  int payers = 1;
  Money prefix = defaults[order[0]];  // sum of the first m - 1 defaults while testing m
  for (int m = 2; m <= size; ++m) {
    const Money c = defaults[order[m - 1]];
    const Money threshold = (prefix - cost) / (m - 1);
    if (c > threshold + kEps) payers = m;
    prefix += c;
  }
  Money top = 0;
  for (int s = 0; s < payers; ++s) top += defaults[order[s]];
  const Money share = (top - cost) / payers;
  std::vector<Money> out(size, 0);
  for (int s = 0; s < payers; ++s) out[order[s]] = defaults[order[s]] - share;
  return out;
}

}  // namespace

std::vector<Money> split_cost(Mechanism m, Money cost, std::span<const Money> defaults) {
  const std::size_t size = defaults.size();
  if (size == 0) throw ArgumentError("cannot split a cost among no members");
  const Money sum = std::accumulate(defaults.begin(), defaults.end(), Money{0});
  std::vector<Money> out(size);
  switch (m) {
    case Mechanism::kEqualSplit:
      std::fill(out.begin(), out.end(), cost / static_cast<Money>(size));
      return out;
    case Mechanism::kProportional:
      for (std::size_t k = 0; k < size; ++k) out[k] = defaults[k] * cost / sum;
      return out;
    case Mechanism::kEgalitarian:
    case Mechanism::kNashUnconstrained: {
      const Money surplus = (sum - cost) / static_cast<Money>(size);
      for (std::size_t k = 0; k < size; ++k) out[k] = defaults[k] - surplus;
      return out;
    }
    case Mechanism::kNashNonNegative:
      return nash_nonnegative(cost, defaults);
    case Mechanism::kUsageBased:
      break;
  }
  throw UnsupportedError("usage-based payments depend on facility usage, not on default costs alone");
}

namespace {

std::vector<Money> defaults_of(Coalition g, const CostOracle& oracle) {
  std::vector<Money> d;
  d.reserve(g.size());
  g.for_each([&](ParticipantId i) { d.push_back(oracle.default_cost(i)); });
  return d;
}

Money feasible_cost(Coalition g, const CostOracle& oracle) {
  if (g.empty()) throw InfeasibleCoalitionError("payments of the empty coalition");
  const Money c = oracle.cost(g);
  if (!is_feasible_cost(c)) throw InfeasibleCoalitionError("coalition " + g.to_string() + " is infeasible");
  return c;
}

PaymentVector finish(Mechanism m, Coalition g, std::vector<Money> payments, const std::vector<Money>& defaults) {
  PaymentVector pv;
  pv.coalition = g;
  pv.mechanism = m;
  pv.utilities.resize(payments.size());
  for (std::size_t k = 0; k < payments.size(); ++k) pv.utilities[k] = defaults[k] - payments[k];
  pv.payments = std::move(payments);
  return pv;
}

PaymentVector pay_split(Mechanism m, Coalition g, const CostOracle& oracle) {
  const Money c = feasible_cost(g, oracle);
  const std::vector<Money> d = defaults_of(g, oracle);
  return finish(m, g, split_cost(m, c, d), d);
}

}  // namespace

PaymentVector pay_equal(Coalition g, const CostOracle& oracle) {
  return pay_split(Mechanism::kEqualSplit, g, oracle);
}

PaymentVector pay_proportional(Coalition g, const CostOracle& oracle) {
  return pay_split(Mechanism::kProportional, g, oracle);
}

PaymentVector pay_egalitarian(Coalition g, const CostOracle& oracle) {
  return pay_split(Mechanism::kEgalitarian, g, oracle);
}

PaymentVector pay_nash(Coalition g, const CostOracle& oracle, bool nonnegative) {
  return pay_split(nonnegative ? Mechanism::kNashNonNegative : Mechanism::kNashUnconstrained, g, oracle);
}

std::vector<Money> usage_payments(const Resource& r) {
  const std::vector<int> counts = r.user_counts();
  std::vector<Money> out(r.usage.size(), 0);
  for (std::size_t k = 0; k < r.usage.size(); ++k) {
    for (int f : r.usage[k]) out[k] += r.facilities[f].cost / counts[f];
  }
  return out;
}

PaymentVector pay_usage(Coalition g, const ResourceOracle& oracle) {
  if (g.empty()) throw InfeasibleCoalitionError("payments of the empty coalition");
  const std::optional<Resource> r = oracle.best_resource(g);
  if (!r) throw InfeasibleCoalitionError("coalition " + g.to_string() + " is infeasible");
  return finish(Mechanism::kUsageBased, g, usage_payments(*r), defaults_of(g, oracle));
}

PaymentVector pay(Mechanism m, Coalition g, const CostOracle& oracle) {
  if (m == Mechanism::kUsageBased) {
    const auto* resources = dynamic_cast<const ResourceOracle*>(&oracle);
    if (resources == nullptr) {
      throw UnsupportedError("usage-based payments need an oracle with facility usage");
    }
    return pay_usage(g, *resources);
  }
  return pay_split(m, g, oracle);
}

Money exclusive_cost(const Resource& r, Coalition l) {
  const Coalition g = r.coalition;
  if (l.empty() || !l.is_subset_of(g)) {
    throw ArgumentError("coalition " + l.to_string() + " is not a non-empty subset of " + g.to_string());
  }
  std::vector<int> in_l(r.facilities.size(), 0);
  std::vector<char> outside(r.facilities.size(), 0);
  g.for_each([&](ParticipantId i) {
    for (int f : r.usage_of(i)) {
      if (l.contains(i)) {
        ++in_l[f];
      } else {
        outside[f] = 1;
      }
    }
  });
  Money total = 0;
  for (std::size_t f = 0; f < r.facilities.size(); ++f) {
    if (in_l[f] == l.size() && !outside[f]) total += r.facilities[f].cost;
  }
  return total;
}

Money exclusive_cost(Coalition g, Coalition l, const ResourceOracle& oracle) {
  if (l.empty() || !l.is_subset_of(g)) {
    throw ArgumentError("coalition " + l.to_string() + " is not a non-empty subset of " + g.to_string());
  }
  const std::optional<Resource> r = oracle.best_resource(g);
  if (!r) throw InfeasibleCoalitionError("coalition " + g.to_string() + " is infeasible");
  return exclusive_cost(*r, l);
}

Money utility_of(ParticipantId i, const PaymentVector& pv, const CostOracle& oracle) {
  return oracle.default_cost(i) - pv.payment_of(i);
}

nlohmann::json to_json(const PaymentVector& pv) {
  return {
      {"members", pv.coalition.members()},
      {"payments", pv.payments},
      {"utilities", pv.utilities},
      {"mechanism", to_string(pv.mechanism)},
  };
}

}  // namespace coalition
