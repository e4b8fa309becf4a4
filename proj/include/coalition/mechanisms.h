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

#ifndef COALITION_MECHANISMS_H_
#define COALITION_MECHANISMS_H_

#include <span>
#include <string>
#include <vector>

#include "coalition/cost_oracle.h"
#include "json.hpp"

namespace coalition {

enum class Mechanism {
  kEqualSplit,
  kProportional,
  kEgalitarian,
  kNashUnconstrained,
  kNashNonNegative,
  kUsageBased,
};

// Command-line names: equal, proportional, egalitarian, nash-unconstrained,
// nash (non-negative payments), usage.
std::string to_string(Mechanism m);
Mechanism parse_mechanism(const std::string& name);
const std::vector<Mechanism>& all_mechanisms();

// Usage-based sharing needs a ResourceOracle.
inline bool needs_resources(Mechanism m) { return m == Mechanism::kUsageBased; }

struct PaymentVector {
  Coalition coalition;
  Mechanism mechanism = Mechanism::kEqualSplit;
  // Indexed by position in the ascending member list.
  std::vector<Money> payments;
  std::vector<Money> utilities;

  Money payment_of(ParticipantId i) const;
  Money utility_of(ParticipantId i) const;
  Money total() const;
};

// Splits `cost` among members with the given default costs. Not valid for
// kUsageBased, which depends on facility usage.
std::vector<Money> split_cost(Mechanism m, Money cost, std::span<const Money> defaults);

// Each throws InfeasibleCoalitionError for an infeasible or empty coalition.
PaymentVector pay_equal(Coalition g, const CostOracle& oracle);
PaymentVector pay_proportional(Coalition g, const CostOracle& oracle);
PaymentVector pay_egalitarian(Coalition g, const CostOracle& oracle);
PaymentVector pay_nash(Coalition g, const CostOracle& oracle, bool nonnegative);
PaymentVector pay_usage(Coalition g, const ResourceOracle& oracle);

// Dispatches on `m`. Throws UnsupportedError for kUsageBased on an oracle
// without resources.
PaymentVector pay(Mechanism m, Coalition g, const CostOracle& oracle);

// Usage-based payments from an already computed resource.
std::vector<Money> usage_payments(const Resource& r);

// Cost of the facilities of r(G) used by every member of L and by no other
// member of G. Throws ArgumentError unless L is a non-empty subset of G.
Money exclusive_cost(Coalition g, Coalition l, const ResourceOracle& oracle);
Money exclusive_cost(const Resource& r, Coalition l);

// c_i - p_i. Throws ArgumentError when i is not a member.
Money utility_of(ParticipantId i, const PaymentVector& pv, const CostOracle& oracle);

nlohmann::json to_json(const PaymentVector& pv);

}  // namespace coalition

#endif  // COALITION_MECHANISMS_H_
