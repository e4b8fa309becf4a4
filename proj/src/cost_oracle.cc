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

#include "coalition/cost_oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "coalition/errors.h"
#include "group_cover.h"

namespace coalition {

Money CostOracle::default_cost_sum(Coalition g) const {
  Money total = 0;
  g.for_each([&](ParticipantId i) { total += default_cost(i); });
  return total;
}

const std::vector<int>& Resource::usage_of(ParticipantId i) const {
  if (!coalition.contains(i)) {
    throw ArgumentError("participant " + std::to_string(i) + " is not in " + coalition.to_string());
  }
  return usage.at(coalition.rank_of(i));
}

std::vector<int> Resource::user_counts() const {
  std::vector<int> counts(facilities.size(), 0);
  for (const auto& u : usage) {
    for (int f : u) ++counts.at(f);
  }
  return counts;
}

Money ResourceOracle::cost(Coalition g) const {
  if (g.empty()) return 0;
  const std::optional<Resource> r = best_resource(g);
  return r ? r->total_cost : kInfinity;
}

// ---------------------------------------------------------------------------
// ExplicitCostTable

struct ExplicitCostTable::Impl {
  std::unordered_map<Coalition, Money, CoalitionHash> listed;
  std::unique_ptr<internal::GroupCover> cover;
};

ExplicitCostTable::ExplicitCostTable(int n, int max_size, std::vector<Entry> entries, Completion completion)
    : n_(n), max_size_(max_size), completion_(completion), entries_(std::move(entries)),
      impl_(std::make_unique<Impl>()) {
  if (n < 1 || n > kMaxParticipants) {
    throw ValidationError("participant count " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxParticipants) + "]");
  }
  if (max_size < 1) throw ValidationError("capacity must be at least 1");
  const Coalition everyone = Coalition::all(n);
  for (const Entry& e : entries_) {
    if (e.members.empty()) throw ValidationError("table entry with no members");
    if (!e.members.is_subset_of(everyone)) {
      throw ValidationError("table entry " + e.members.to_string() + " names a participant outside [0, " +
                            std::to_string(n) + ")");
    }
    if (!std::isfinite(e.cost) || e.cost <= 0) {
      throw ValidationError("table entry " + e.members.to_string() + " has non-positive or non-finite cost");
    }
    if (!impl_->listed.emplace(e.members, e.cost).second) {
      throw ValidationError("duplicate table entry " + e.members.to_string());
    }
  }
  for (ParticipantId i = 0; i < n; ++i) {
    if (!impl_->listed.contains(Coalition::singleton(i))) {
      throw ValidationError("default cost of participant " + std::to_string(i) + " is not listed");
    }
  }
  if (completion_ == Completion::kNone) {
    enforce_guard(count_subsets_up_to(n, max_size) > 5'000'000, "complete cost table too large");
    for_each_subset_up_to(everyone, max_size, [&](Coalition g) {
      if (!impl_->listed.contains(g)) {
        throw ValidationError("cost of coalition " + g.to_string() + " is not listed");
      }
      return true;
    });
  } else {
    std::vector<Coalition> groups;
    std::vector<Money> costs;
    groups.reserve(entries_.size());
    costs.reserve(entries_.size());
    for (const Entry& e : entries_) {
      groups.push_back(e.members);
      costs.push_back(e.cost);
    }
    impl_->cover = std::make_unique<internal::GroupCover>(n, std::move(groups), std::move(costs));
  }
}

ExplicitCostTable::~ExplicitCostTable() = default;

Money ExplicitCostTable::cost(Coalition g) const {
  if (g.empty()) return 0;
  if (!g.is_subset_of(Coalition::all(n_))) {
    throw ArgumentError("coalition " + g.to_string() + " names a participant outside the instance");
  }
  const auto it = impl_->listed.find(g);
  if (it != impl_->listed.end()) return it->second;
  if (completion_ == Completion::kNone) {
    if (g.size() > max_size_) return kInfinity;
    throw ArgumentError("cost of coalition " + g.to_string() + " is not listed");
  }
  return impl_->cover->cover(g);
}

// ---------------------------------------------------------------------------

Money TruncatedOracle::cost(Coalition g) const {
  const Money c = inner_->cost(g);
  if (!is_feasible_cost(c)) return c;
  return std::min(c, inner_->default_cost_sum(g));
}

std::shared_ptr<const CostOracle> truncated_oracle(std::shared_ptr<const CostOracle> oracle) {
  // Truncation is idempotent, so a truncated oracle is returned as is.
  if (std::dynamic_pointer_cast<const TruncatedOracle>(oracle)) return oracle;
  return std::make_shared<TruncatedOracle>(std::move(oracle));
}

Money structure_cost(const CoalitionStructure& p, const CostOracle& oracle) {
  p.validate(oracle.participant_count(), kMaxParticipants);
  Money total = 0;
  for (Coalition g : p) {
    const Money c = oracle.cost(g);
    if (!is_feasible_cost(c)) return kInfinity;
    total += c;
  }
  return total;
}

std::string to_string(OracleViolation::Kind kind) {
  switch (kind) {
    case OracleViolation::Kind::kNonPositiveCost:
      return "non-positive-cost";
    case OracleViolation::Kind::kMonotonicity:
      return "monotonicity";
    case OracleViolation::Kind::kInfeasibleSingleton:
      return "infeasible-singleton";
    case OracleViolation::Kind::kInfeasibilityNotUpwardClosed:
      return "infeasibility-not-upward-closed";
    case OracleViolation::Kind::kFacilitySumMismatch:
      return "facility-sum-mismatch";
    case OracleViolation::Kind::kUncoveredFacility:
      return "uncovered-facility";
  }
  return "unknown";
}

namespace {

class Checker {
 public:
  Checker(const CostOracle& oracle, OracleReport& report)
      : oracle_(oracle), resources_(dynamic_cast<const ResourceOracle*>(&oracle)), report_(report) {}

  Money cost(Coalition g) {
    const auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    const Money c = oracle_.cost(g);
    cache_.emplace(g, c);
    return c;
  }

  void check(Coalition g) {
    ++report_.coalitions_checked;
    const Money c = cost(g);
    using Kind = OracleViolation::Kind;
    if (g.size() == 1 && !is_feasible_cost(c)) {
      report_.violations.push_back({Kind::kInfeasibleSingleton, g, g, c, c});
      return;
    }
    if (!(c > 0)) report_.violations.push_back({Kind::kNonPositiveCost, g, g, c, c});
    if (g.size() > 1) {
      g.for_each([&](ParticipantId i) {
        const Coalition h = g.without(i);
        const Money ch = cost(h);
        if (!is_feasible_cost(ch)) {
          if (is_feasible_cost(c)) {
            report_.violations.push_back({Kind::kInfeasibilityNotUpwardClosed, h, g, ch, c});
          }
        } else if (is_feasible_cost(c) && ch > c + kEps * std::max<Money>(1, c)) {
          report_.violations.push_back({Kind::kMonotonicity, h, g, ch, c});
        }
      });
    }
    if (resources_ != nullptr && is_feasible_cost(c)) check_resource(g, c);
  }

 private:
  void check_resource(Coalition g, Money c) {
    using Kind = OracleViolation::Kind;
    const std::optional<Resource> r = resources_->best_resource(g);
    if (!r) return;
    Money sum = 0;
    for (const Facility& f : r->facilities) sum += f.cost;
    if (std::abs(sum - c) > kEps * std::max<Money>(1, c)) {
      report_.violations.push_back({Kind::kFacilitySumMismatch, g, g, sum, c});
    }
    const std::vector<int> counts = r->user_counts();
    for (std::size_t f = 0; f < counts.size(); ++f) {
      if (counts[f] == 0 && r->facilities[f].cost > 0) {
        report_.violations.push_back({Kind::kUncoveredFacility, g, g, r->facilities[f].cost, c});
      }
    }
  }

  const CostOracle& oracle_;
  const ResourceOracle* resources_;
  OracleReport& report_;
  std::unordered_map<Coalition, Money, CoalitionHash> cache_;
};

}  // namespace

OracleReport validate_oracle(const CostOracle& oracle, int max_size, const ValidationOptions& options) {
  OracleReport report;
  Checker checker(oracle, report);
  const int n = oracle.participant_count();
  max_size = std::min(max_size, n);
  if (options.mode == ValidationMode::kExhaustive) {
    enforce_guard(n > 20, "exhaustive oracle validation with more than 20 participants");
    for_each_subset_up_to(Coalition::all(n), max_size, [&](Coalition g) {
      checker.check(g);
      return true;
    });
    return report;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> size_dist(1, max_size);
  for (ParticipantId i = 0; i < n; ++i) checker.check(Coalition::singleton(i));
  std::vector<ParticipantId> ids(n);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    for (ParticipantId i = 0; i < n; ++i) ids[i] = i;
    const int size = size_dist(rng);
    Mask mask = 0;
    for (int j = 0; j < size; ++j) {
      std::uniform_int_distribution<int> pick(j, n - 1);
      std::swap(ids[j], ids[pick(rng)]);
      mask |= bit(ids[j]);
    }
    checker.check(Coalition::from_mask(mask));
  }
  return report;
}

}  // namespace coalition
