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

#include "group_cover.h"

#include <cstdint>

#include "coalition/errors.h"

namespace coalition::internal {

namespace {

constexpr int kMaxCoverSize = 20;

}  // namespace

GroupCover::GroupCover(int n, std::vector<Coalition> groups, std::vector<Money> costs)
    : groups_(std::move(groups)), costs_(std::move(costs)), by_participant_(n) {
  for (int gi = 0; gi < static_cast<int>(groups_.size()); ++gi) {
    groups_[gi].for_each([&](ParticipantId i) {
      if (i < n) by_participant_[i].push_back(gi);
    });
  }
}

int GroupCover::best_group(Coalition piece) const {
  if (piece.empty()) return -1;
  int best = -1;
  for (int gi : by_participant_[piece.lowest()]) {
    if (piece.is_subset_of(groups_[gi]) && (best < 0 || costs_[gi] < costs_[best])) best = gi;
  }
  return best;
}

Money GroupCover::cover(Coalition g, std::vector<Piece>* pieces) const {
  if (pieces != nullptr) pieces->clear();
  if (g.empty()) return 0;
  const std::vector<ParticipantId> members = g.members();
  const int m = static_cast<int>(members.size());
  enforce_guard(m > kMaxCoverSize, "group cover of a coalition with more than 20 members");
  for (ParticipantId i : members) {
    if (by_participant_[i].empty()) return kInfinity;
  }

  const std::uint32_t full = (m == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << m) - 1);
  auto to_global = [&](std::uint32_t local) {
    Mask mask = 0;
    for (int j = 0; j < m; ++j) {
      if ((local >> j) & 1U) mask |= bit(members[j]);
    }
    return Coalition::from_mask(mask);
  };

  std::vector<Money> piece_cost(std::size_t{1} << m, kInfinity);
  std::vector<int> piece_group(std::size_t{1} << m, -1);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int gi = best_group(to_global(s));
    if (gi >= 0) {
      piece_cost[s] = costs_[gi];
      piece_group[s] = gi;
    }
  }

  std::vector<Money> best(std::size_t{1} << m, kInfinity);
  std::vector<std::uint32_t> choice(std::size_t{1} << m, 0);
  best[0] = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s & ~low;
    // Submasks of `rest` in decreasing order, so larger pieces come first.
    for (std::uint32_t t = rest;; t = (t - 1) & rest) {
      const std::uint32_t piece = t | low;
      const Money c = piece_cost[piece] + best[s & ~piece];
      if (c < best[s]) {
        best[s] = c;
        choice[s] = piece;
      }
      if (t == 0) break;
    }
  }

  if (pieces != nullptr && best[full] < kInfinity) {
    for (std::uint32_t s = full; s != 0; s &= ~choice[s]) {
      pieces->push_back(Piece{to_global(choice[s]), piece_group[choice[s]]});
    }
  }
  return best[full];
}

}  // namespace coalition::internal
