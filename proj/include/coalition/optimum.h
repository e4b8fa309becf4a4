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


#ifndef COALITION_OPTIMUM_H_
#define COALITION_OPTIMUM_H_

#include <cstddef>
#include <string>

#include "coalition/instance.h"
#include "coalition/mechanisms.h"
#include "json.hpp"

namespace coalition {

struct OptimumResult {
  enum class Method { kDp, kBrute, kCertificate };
  CoalitionStructure structure;
  Money cost = 0;
  Method method = Method::kDp;
};

std::string to_string(OptimumResult::Method method);

struct SpoaResult {
  Money worst_stable_cost = 0;
  Money optimum_cost = 0;
  double ratio = 0;
  std::size_t stable_count = 0;
  CoalitionStructure worst_stable;
  CoalitionStructure optimum;
};

// Minimum-cost structure by a subset DP. Each step covers the lowest
// uncovered participant with a feasible coalition of size <= k; among equal
// costs the first coalition in size-then-lexicographic order is kept.
// Requires n <= 22.
OptimumResult exact_optimum(const Instance& instance);

// Same value by enumerating every structure. Requires n <= 10.
OptimumResult brute_optimum(const Instance& instance);

// Lower bound on the optimum: the singleton structure's cost divided by k.
Money optimum_lower_bound(const Instance& instance);

// Accepts `p` as optimal when it is a valid structure whose cost meets
// optimum_lower_bound within kEps. Works at any n.
std::optional<OptimumResult> certify_optimum(const Instance& instance, const CoalitionStructure& p);

// Worst stable structure (by enumeration, n <= 12) against the exact optimum.
// Throws NoStableStructureError, with a preference cycle when one is found,
// if no structure is stable.
SpoaResult empirical_spoa(const Instance& instance, Mechanism m);

nlohmann::json to_json(const OptimumResult& result);
nlohmann::json to_json(const SpoaResult& result);

// Header and row of the sweep CSV.
std::string spoa_csv_header();
std::string spoa_csv_row(const std::string& instance_id, Mechanism m, int k, int n, const SpoaResult& result);

}  // namespace coalition

#endif  // COALITION_OPTIMUM_H_
