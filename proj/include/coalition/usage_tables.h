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

#ifndef COALITION_USAGE_TABLES_H_
#define COALITION_USAGE_TABLES_H_

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coalition/cost_oracle.h"

namespace coalition {

namespace internal {
class GroupCover;
}  // namespace internal

// Resources listed verbatim per coalition. Unlisted coalitions are infeasible.
class UsageTableOracle : public ResourceOracle {
 public:
  struct TableFacility {
    Money cost = 0;
    Coalition users;
  };
  struct Entry {
    Coalition members;
    std::vector<TableFacility> facilities;
  };

  UsageTableOracle(int n, std::vector<Entry> entries);

  int participant_count() const override { return n_; }
  std::optional<Resource> best_resource(Coalition g) const override;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  int n_;
  std::vector<Entry> entries_;
  std::unordered_map<Coalition, std::size_t, CoalitionHash> index_;
};

// Resources assembled from listed groups. A coalition is split into the
// cheapest partition of pieces, each inside some group; pieces keep separate
// facilities. Within a piece of group g:
//   joint       one facility of cost c(g) used by every piece member;
//   lead-split  a lone member uses one facility of cost c(g); otherwise the
//               piece's first member in g's declared order uses a facility of
//               cost c(g)/2 and the other members share one of cost c(g)/2.
class UsageGroupsOracle : public ResourceOracle {
 public:
  enum class Pattern { kJoint, kLeadSplit };

  struct Group {
    std::vector<ParticipantId> members;  // declared order
    Pattern pattern = Pattern::kJoint;
    Money cost = 0;
  };

  UsageGroupsOracle(int n, std::vector<Group> groups);
  ~UsageGroupsOracle() override;

  int participant_count() const override { return n_; }
  Money cost(Coalition g) const override;
  std::optional<Resource> best_resource(Coalition g) const override;

  const std::vector<Group>& groups() const { return groups_; }

 private:
  int n_;
  std::vector<Group> groups_;
  std::unique_ptr<internal::GroupCover> cover_;
};

std::string to_string(UsageGroupsOracle::Pattern pattern);
UsageGroupsOracle::Pattern parse_pattern(const std::string& name);

}  // namespace coalition

#endif  // COALITION_USAGE_TABLES_H_
