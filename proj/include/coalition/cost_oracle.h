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

#ifndef COALITION_COST_ORACLE_H_
#define COALITION_COST_ORACLE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coalition/core.h"

namespace coalition {

// Characteristic cost function over coalitions.
//
// Implementations must satisfy: cost(empty) = 0, cost(G) > 0 otherwise,
// cost(H) <= cost(G) for H a subset of G, finite singleton costs, and
// upward-closed infeasibility (an infeasible H makes every superset
// infeasible). Infeasible coalitions report kInfinity. Implementations are
// immutable and safe to query concurrently.
class CostOracle {
 public:
  virtual ~CostOracle() = default;

  virtual int participant_count() const = 0;
  virtual Money cost(Coalition g) const = 0;

  Money default_cost(ParticipantId i) const { return cost(Coalition::singleton(i)); }
  Money default_cost_sum(Coalition g) const;
};

struct Facility {
  int id = 0;
  Money cost = 0;
};

// A canonical resource serving a coalition: its facilities and which members
// use which facility.
struct Resource {
  Coalition coalition;
  Money total_cost = 0;
  std::vector<Facility> facilities;
  // usage[r] lists indices into `facilities` used by the r-th member of
  // `coalition` (ascending member order). Each list is sorted.
  std::vector<std::vector<int>> usage;
  std::string label;

  const std::vector<int>& usage_of(ParticipantId i) const;
  // Number of members using each facility.
  std::vector<int> user_counts() const;
};

// A cost oracle backed by canonical resources: cost(G) is the total cost of
// best_resource(G), which is the cheapest resource able to serve G with a
// deterministic tie-break.
class ResourceOracle : public CostOracle {
 public:
  virtual std::optional<Resource> best_resource(Coalition g) const = 0;

  Money cost(Coalition g) const override;
};

// Costs listed per coalition.
//
// With Completion::kNone every coalition of size 1..max_size must be listed.
// With Completion::kCase3 unlisted coalitions cost the cheapest partition into
// pieces that each fit inside some listed coalition; a piece costs as much as
// the cheapest listed coalition containing it.
class ExplicitCostTable : public CostOracle {
 public:
  enum class Completion { kNone, kCase3 };

  struct Entry {
    Coalition members;
    Money cost = 0;
  };

  ExplicitCostTable(int n, int max_size, std::vector<Entry> entries, Completion completion);
  ~ExplicitCostTable() override;

  int participant_count() const override { return n_; }
  Money cost(Coalition g) const override;

  int max_size() const { return max_size_; }
  Completion completion() const { return completion_; }
  // Entries in the order they were given.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  struct Impl;
  int n_;
  int max_size_;
  Completion completion_;
  std::vector<Entry> entries_;
  std::unique_ptr<Impl> impl_;
};

// cost'(G) = min(cost(G), sum of member default costs).
class TruncatedOracle : public CostOracle {
 public:
  explicit TruncatedOracle(std::shared_ptr<const CostOracle> inner) : inner_(std::move(inner)) {}

  int participant_count() const override { return inner_->participant_count(); }
  Money cost(Coalition g) const override;

  const CostOracle& inner() const { return *inner_; }

 private:
  std::shared_ptr<const CostOracle> inner_;
};

std::shared_ptr<const CostOracle> truncated_oracle(std::shared_ptr<const CostOracle> oracle);

// Sum of coalition costs; kInfinity if any coalition is infeasible. Throws
// ValidationError when `p` is not a partition of the oracle's participants.
Money structure_cost(const CoalitionStructure& p, const CostOracle& oracle);

enum class ValidationMode { kExhaustive, kSampled };

struct OracleViolation {
  enum class Kind {
    kNonPositiveCost,
    kMonotonicity,
    kInfeasibleSingleton,
    kInfeasibilityNotUpwardClosed,
    kFacilitySumMismatch,
    kUncoveredFacility,
  };
  Kind kind;
  Coalition subset;    // H (or the offending coalition)
  Coalition superset;  // G, when the violation concerns a pair
  Money subset_cost = 0;
  Money superset_cost = 0;
};

std::string to_string(OracleViolation::Kind kind);

struct OracleReport {
  std::vector<OracleViolation> violations;
  std::uint64_t coalitions_checked = 0;
  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  ValidationMode mode = ValidationMode::kExhaustive;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
};

// Checks positivity and monotonicity over coalitions of size <= max_size.
// Monotonicity is checked on pairs (G minus one member, G), which covers every
// violating pair by transitivity. Resource oracles are also checked for
// facility-sum consistency and for facilities no member uses. Exhaustive mode
// requires n <= 20.
OracleReport validate_oracle(const CostOracle& oracle, int max_size, const ValidationOptions& options = {});

}  // namespace coalition

#endif  // COALITION_COST_ORACLE_H_
