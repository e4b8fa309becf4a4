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


#include "coalition/optimum.h"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "coalition/format.h"
#include "coalition/stability.h"

namespace coalition {

std::string to_string(OptimumResult::Method method) {
  switch (method) {
    case OptimumResult::Method::kDp:
      return "dp";
    case OptimumResult::Method::kBrute:
      return "brute";
    case OptimumResult::Method::kCertificate:
      return "certificate";
  }
  return "unknown";
}

namespace {

bool cost_less(Money a, Money b) { return a < b - 1e-12 * std::max<Money>(1, std::abs(b)); }

// Feasible coalitions of size <= k, grouped by lowest member, each list in
// size-then-lexicographic order.
struct CoalitionLists {
  std::vector<std::vector<std::pair<std::uint32_t, Money>>> by_lowest;
};

CoalitionLists feasible_by_lowest(const Instance& instance) {
  CoalitionLists lists;
  lists.by_lowest.resize(instance.n);
  for_each_subset_up_to(Coalition::all(instance.n), std::min(instance.k, instance.n), [&](Coalition g) {
    const Money c = instance.oracle->cost(g);
    if (is_feasible_cost(c)) lists.by_lowest[g.lowest()].push_back({static_cast<std::uint32_t>(g.word()), c});
    return true;
  });
  return lists;
}

}  // namespace

OptimumResult exact_optimum(const Instance& instance) {
  const int n = instance.n;
  enforce_guard(n > 22, "exact optimum with more than 22 participants");
  if (n > 28) throw ResourceLimitError("exact optimum supports at most 28 participants");
  const CoalitionLists lists = feasible_by_lowest(instance);
  const std::uint32_t full = (1U << n) - 1;
  std::vector<Money> best(std::size_t{1} << n, std::numeric_limits<Money>::quiet_NaN());
  std::vector<std::uint32_t> choice(std::size_t{1} << n, 0);
  best[0] = 0;

  // Iterative post-order over the reachable states.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;  // state, next candidate
  stack.push_back({full, 0});
  while (!stack.empty()) {
    auto& [s, next] = stack.back();
    const auto& cands = lists.by_lowest[std::countr_zero(s)];
    bool descended = false;
    for (; next < cands.size(); ++next) {
      const std::uint32_t t = cands[next].first;
      if ((t & ~s) != 0) continue;
      if (std::isnan(best[s & ~t])) {
        stack.push_back({s & ~t, 0});
        descended = true;
        break;
      }
    }
    if (descended) continue;
    Money v = kInfinity;
    std::uint32_t arg = 0;
    for (const auto& [t, c] : cands) {
      if ((t & ~s) != 0) continue;
      const Money total = c + best[s & ~t];
      if (arg == 0 || cost_less(total, v)) {
        v = total;
        arg = t;
      }
    }
    best[s] = v;
    choice[s] = arg;
    stack.pop_back();
  }

  std::vector<Coalition> blocks;
  for (std::uint32_t s = full; s != 0; s &= ~choice[s]) blocks.push_back(Coalition::from_mask(choice[s]));
  OptimumResult result;
  result.structure = CoalitionStructure(std::move(blocks));
  result.cost = best[full];
  result.method = OptimumResult::Method::kDp;
  return result;
}

OptimumResult brute_optimum(const Instance& instance) {
  const int n = instance.n;
  enforce_guard(n > 10, "brute-force optimum with more than 10 participants");
  if (n > 28) throw ResourceLimitError("brute-force optimum supports at most 28 participants");
  const CoalitionLists lists = feasible_by_lowest(instance);
  const std::uint32_t full = (1U << n) - 1;
  std::vector<std::uint32_t> chosen;
  std::vector<std::uint32_t> best_blocks;
  Money best = kInfinity;
  bool found = false;
  std::function<void(std::uint32_t, Money)> dfs = [&](std::uint32_t covered, Money cost) {
    if (covered == full) {
      if (!found || cost_less(cost, best)) {
        found = true;
        best = cost;
        best_blocks = chosen;
      }
      return;
    }
    const int low = std::countr_zero(~covered);
    for (const auto& [t, c] : lists.by_lowest[low]) {
      if ((t & covered) != 0) continue;
      chosen.push_back(t);
      dfs(covered | t, cost + c);
      chosen.pop_back();
    }
  };
  dfs(0, 0);
  std::vector<Coalition> blocks;
  for (std::uint32_t t : best_blocks) blocks.push_back(Coalition::from_mask(t));
  OptimumResult result;
  result.structure = CoalitionStructure(std::move(blocks));
  result.cost = best;
  result.method = OptimumResult::Method::kBrute;
  return result;
}

Money optimum_lower_bound(const Instance& instance) {
  return structure_cost(default_structure(instance.n), *instance.oracle) / std::min(instance.k, instance.n);
}

std::optional<OptimumResult> certify_optimum(const Instance& instance, const CoalitionStructure& p) {
  p.validate(instance.n, instance.k);
  const Money c = structure_cost(p, *instance.oracle);
  if (!is_feasible_cost(c) || c > optimum_lower_bound(instance) + kEps) return std::nullopt;
  OptimumResult result;
  result.structure = p;
  result.cost = c;
  result.method = OptimumResult::Method::kCertificate;
  return result;
}

SpoaResult empirical_spoa(const Instance& instance, Mechanism m) {
  const std::vector<CoalitionStructure> stable = enumerate_stable_structures(instance, m);
  if (stable.empty()) {
    std::optional<PreferenceCycle> cycle;
    try {
      cycle = detect_cyclic_preference(instance, m);
    } catch (const ResourceLimitError&) {
    }
    throw NoStableStructureError("instance " + instance.id + " has no stable structure under " + to_string(m),
                                 std::move(cycle));
  }
  SpoaResult result;
  result.stable_count = stable.size();
  result.worst_stable_cost = -kInfinity;
  for (const CoalitionStructure& p : stable) {
    const Money c = structure_cost(p, *instance.oracle);
    if (c > result.worst_stable_cost) {
      result.worst_stable_cost = c;
      result.worst_stable = p;
    }
  }
  const OptimumResult opt = exact_optimum(instance);
  result.optimum_cost = opt.cost;
  result.optimum = opt.structure;
  result.ratio = result.worst_stable_cost / result.optimum_cost;
  return result;
}

nlohmann::json to_json(const OptimumResult& result) {
  return {{"structure", to_json(result.structure)}, {"cost", result.cost}, {"method", to_string(result.method)}};
}

nlohmann::json to_json(const SpoaResult& result) {
  return {
      {"worst_stable_cost", result.worst_stable_cost},
      {"optimum_cost", result.optimum_cost},
      {"ratio", result.ratio},
      {"stable_count", result.stable_count},
      {"worst_stable", to_json(result.worst_stable)},
      {"optimum", to_json(result.optimum)},
  };
}

std::string spoa_csv_header() { return "instance,mechanism,K,n,worst_stable,optimum,ratio,status"; }

std::string spoa_csv_row(const std::string& instance_id, Mechanism m, int k, int n, const SpoaResult& result) {
  std::ostringstream row;
  row << instance_id << ',' << to_string(m) << ',' << k << ',' << n << ',' << format_number(result.worst_stable_cost)
      << ',' << format_number(result.optimum_cost) << ',' << format_number(result.ratio) << ",ok";
  return row.str();
}

}  // namespace coalition
