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

#include "coalition/usage_tables.h"

#include <algorithm>
#include <cmath>

#include "coalition/errors.h"
#include "group_cover.h"

namespace coalition {

UsageTableOracle::UsageTableOracle(int n, std::vector<Entry> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 1 || n > kMaxParticipants) throw ValidationError("participant count out of range");
  const Coalition everyone = Coalition::all(n);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const Entry& entry = entries_[e];
    if (entry.members.empty() || !entry.members.is_subset_of(everyone)) {
      throw ValidationError("usage table entry " + entry.members.to_string() + " is not a coalition of the instance");
    }
    Money total = 0;
    for (const TableFacility& f : entry.facilities) {
      if (!std::isfinite(f.cost) || f.cost < 0) {
        throw ValidationError("facility of " + entry.members.to_string() + " has a negative or non-finite cost");
      }
      if (!f.users.is_subset_of(entry.members)) {
        throw ValidationError("facility of " + entry.members.to_string() + " is used by a non-member");
      }
      total += f.cost;
    }
    if (!(total > 0)) throw ValidationError("coalition " + entry.members.to_string() + " has zero cost");
    if (!index_.emplace(entry.members, e).second) {
      throw ValidationError("duplicate usage table entry " + entry.members.to_string());
    }
  }
  for (ParticipantId i = 0; i < n; ++i) {
    if (!index_.contains(Coalition::singleton(i))) {
      throw ValidationError("participant " + std::to_string(i) + " has no singleton resource");
    }
  }
}

std::optional<Resource> UsageTableOracle::best_resource(Coalition g) const {
  const auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  const Entry& entry = entries_[it->second];
  Resource r;
  r.coalition = g;
  r.usage.resize(g.size());
  for (std::size_t f = 0; f < entry.facilities.size(); ++f) {
    r.facilities.push_back({static_cast<int>(f), entry.facilities[f].cost});
    r.total_cost += entry.facilities[f].cost;
    entry.facilities[f].users.for_each([&](ParticipantId i) { r.usage[g.rank_of(i)].push_back(static_cast<int>(f)); });
  }
  r.label = "table";
  return r;
}

// ---------------------------------------------------------------------------

UsageGroupsOracle::UsageGroupsOracle(int n, std::vector<Group> groups) : n_(n), groups_(std::move(groups)) {
  if (n < 1 || n > kMaxParticipants) throw ValidationError("participant count out of range");
  std::vector<Coalition> sets;
  std::vector<Money> costs;
  for (const Group& grp : groups_) {
    if (grp.members.empty()) throw ValidationError("usage group with no members");
    for (ParticipantId i : grp.members) {
      if (i < 0 || i >= n) throw ValidationError("usage group names participant " + std::to_string(i));
    }
    const Coalition set = Coalition::from_members(grp.members);
    if (set.size() != static_cast<int>(grp.members.size())) {
      throw ValidationError("usage group " + set.to_string() + " repeats a member");
    }
    if (!std::isfinite(grp.cost) || grp.cost <= 0) {
      throw ValidationError("usage group " + set.to_string() + " has non-positive or non-finite cost");
    }
    sets.push_back(set);
    costs.push_back(grp.cost);
  }
  cover_ = std::make_unique<internal::GroupCover>(n, std::move(sets), std::move(costs));
  for (ParticipantId i = 0; i < n; ++i) {
    if (cover_->best_group(Coalition::singleton(i)) < 0) {
      throw ValidationError("participant " + std::to_string(i) + " belongs to no usage group");
    }
  }
}

UsageGroupsOracle::~UsageGroupsOracle() = default;

Money UsageGroupsOracle::cost(Coalition g) const { return cover_->cover(g); }

std::optional<Resource> UsageGroupsOracle::best_resource(Coalition g) const {
  if (g.empty()) return std::nullopt;
  std::vector<internal::GroupCover::Piece> pieces;
  const Money total = cover_->cover(g, &pieces);
  if (!is_feasible_cost(total)) return std::nullopt;
  Resource r;
  r.coalition = g;
  r.total_cost = total;
  r.usage.resize(g.size());
  r.label = "groups";
  auto add = [&](Money cost, Coalition users) {
    const int f = static_cast<int>(r.facilities.size());
    r.facilities.push_back({f, cost});
    users.for_each([&](ParticipantId i) { r.usage[g.rank_of(i)].push_back(f); });
  };
  for (const auto& piece : pieces) {
    const Group& grp = groups_[piece.group];
    if (grp.pattern == Pattern::kJoint || piece.members.size() == 1) {
      add(grp.cost, piece.members);
      continue;
    }
    ParticipantId lead = -1;
    for (ParticipantId i : grp.members) {
      if (piece.members.contains(i)) {
        lead = i;
        break;
      }
    }
    add(grp.cost / 2, Coalition::singleton(lead));
    add(grp.cost / 2, piece.members.without(lead));
  }
  // Facility lists per member are built in piece order; keep them sorted.
  for (auto& u : r.usage) std::sort(u.begin(), u.end());
  return r;
}

std::string to_string(UsageGroupsOracle::Pattern pattern) {
  return pattern == UsageGroupsOracle::Pattern::kJoint ? "joint" : "lead-split";
}

UsageGroupsOracle::Pattern parse_pattern(const std::string& name) {
  if (name == "joint") return UsageGroupsOracle::Pattern::kJoint;
  if (name == "lead-split") return UsageGroupsOracle::Pattern::kLeadSplit;
  throw ArgumentError("unknown usage pattern '" + name + "'");
}

}  // namespace coalition
