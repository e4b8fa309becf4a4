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

#ifndef COALITION_SRC_GROUP_COVER_H_
#define COALITION_SRC_GROUP_COVER_H_

#include <vector>

#include "coalition/core.h"

namespace coalition::internal {

// Cheapest partition of a coalition into pieces that each lie inside one of a
// fixed list of weighted groups.
class GroupCover {
 public:
  struct Piece {
    Coalition members;
    int group = -1;  // index of the cheapest group containing the piece
  };

  GroupCover(int n, std::vector<Coalition> groups, std::vector<Money> costs);

  // Cheapest group containing `piece` (lowest index on ties), or -1.
  int best_group(Coalition piece) const;

  // Minimum total cost; kInfinity when some member lies in no group. Ties are
  // resolved deterministically, preferring larger pieces for the lowest
  // uncovered member. When `pieces` is non-null it receives the partition.
  Money cover(Coalition g, std::vector<Piece>* pieces = nullptr) const;

  const std::vector<Coalition>& groups() const { return groups_; }
  const std::vector<Money>& costs() const { return costs_; }

 private:
  std::vector<Coalition> groups_;
  std::vector<Money> costs_;
  std::vector<std::vector<int>> by_participant_;
};

}  // namespace coalition::internal

#endif  // COALITION_SRC_GROUP_COVER_H_
