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

#include "coalition/stability.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "coalition/domains.h"

namespace coalition {

std::string to_string(StabilityReport::Status s) {
  switch (s) {
    case StabilityReport::Status::kStable:
      return "stable";
    case StabilityReport::Status::kBlocked:
      return "blocked";
    case StabilityReport::Status::kCycle:
      return "cycle";
    case StabilityReport::Status::kIterationCap:
      return "iteration-cap";
  }
  return "unknown";
}

namespace {

constexpr std::uint64_t kMaxTableCoalitions = 5'000'000;
constexpr std::uint64_t kMaxDigraphNodes = 200'000;

int capacity(const Instance& instance) { return std::min(instance.k, instance.n); }

void require_resources(const Instance& instance, Mechanism m) {
  if (needs_resources(m) && instance.resources() == nullptr) {
    throw UnsupportedError("usage-based sharing needs an oracle with facility usage");
  }
}

std::vector<Money> all_defaults(const Instance& instance) {
  std::vector<Money> d(instance.n);
  for (ParticipantId i = 0; i < instance.n; ++i) d[i] = instance.oracle->default_cost(i);
  return d;
}

// Payments of g under m, or false when g is infeasible.
bool compute_payments(Coalition g, Mechanism m, const Instance& instance, const std::vector<Money>& defaults,
                      std::vector<Money>& out, Money* cost_out = nullptr) {
  if (m == Mechanism::kUsageBased) {
    const std::optional<Resource> r = instance.resources()->best_resource(g);
    if (!r) return false;
    out = usage_payments(*r);
    if (cost_out != nullptr) *cost_out = r->total_cost;
    return true;
  }
  const Money c = instance.oracle->cost(g);
  if (!is_feasible_cost(c)) return false;
  std::vector<Money> d;
  d.reserve(g.size());
  g.for_each([&](ParticipantId i) { d.push_back(defaults[i]); });
  out = split_cost(m, c, d);
  if (cost_out != nullptr) *cost_out = c;
  return true;
}

CoalitionStructure apply_deviation(const CoalitionStructure& p, Coalition b) {
  std::vector<Coalition> next;
  for (Coalition g : p) {
    const Coalition rest = g - b;
    if (!rest.empty()) next.push_back(rest);
  }
  next.push_back(b);
  return CoalitionStructure(std::move(next));
}

}  // namespace

// ---------------------------------------------------------------------------
// PaymentTable

PaymentTable::PaymentTable(const Instance& instance, Mechanism mechanism)
    : PaymentTable(instance, mechanism, Coalition::all(instance.n)) {}

PaymentTable::PaymentTable(const Instance& instance, Mechanism mechanism, Coalition pool)
    : mechanism_(mechanism), defaults_(all_defaults(instance)) {
  require_resources(instance, mechanism);
  const int k = std::min(capacity(instance), pool.size());
  enforce_guard(count_subsets_up_to(pool.size(), k) > kMaxTableCoalitions,
                "payment table with more than 5000000 coalitions");
  std::vector<Money> pay;
  for_each_subset_up_to(pool, k, [&](Coalition g) {
    Money c = 0;
    if (!compute_payments(g, mechanism, instance, defaults_, pay, &c)) return true;
    index_.emplace(g, static_cast<int>(coalitions_.size()));
    coalitions_.push_back(g);
    costs_.push_back(c);
    offsets_.push_back(payments_.size());
    payments_.insert(payments_.end(), pay.begin(), pay.end());
    return true;
  });
}

int PaymentTable::index_of(Coalition g) const {
  const auto it = index_.find(g);
  return it == index_.end() ? -1 : it->second;
}

Money PaymentTable::payment(Coalition g, ParticipantId i) const {
  const int idx = index_of(g);
  if (idx < 0) throw ArgumentError("coalition " + g.to_string() + " is not in the payment table");
  if (!g.contains(i)) throw ArgumentError("participant " + std::to_string(i) + " is not in " + g.to_string());
  return payments_at(idx)[g.rank_of(i)];
}

Money PaymentTable::utility(Coalition g, ParticipantId i) const { return defaults_[i] - payment(g, i); }

Money PaymentTable::cost(Coalition g) const {
  const int idx = index_of(g);
  if (idx < 0) throw ArgumentError("coalition " + g.to_string() + " is not in the payment table");
  return costs_[idx];
}

// ---------------------------------------------------------------------------
// Blocking coalitions

std::vector<Money> current_payments(const CoalitionStructure& p, Mechanism m, const Instance& instance) {
  require_resources(instance, m);
  p.validate(instance.n, instance.k);
  std::vector<Money> cur(instance.n, 0);
  for (Coalition g : p) {
    const PaymentVector pv = pay(m, g, *instance.oracle);
    for (std::size_t r = 0; r < pv.payments.size(); ++r) cur[g.members()[r]] = pv.payments[r];
  }
  return cur;
}

std::optional<Coalition> find_blocking_coalition(const CoalitionStructure& p, Mechanism m, const Instance& instance) {
  const std::vector<Money> cur = current_payments(p, m, instance);
  const std::vector<Money> defaults = all_defaults(instance);
  std::optional<Coalition> found;
  std::vector<Money> pay;
  std::vector<ParticipantId> members;
  for_each_subset_up_to(Coalition::all(instance.n), capacity(instance), [&](Coalition b) {
    // Cheap necessary condition for budget-balanced sharing: the coalition
    // cannot cost less than... nothing in general, so compute payments.
    if (!compute_payments(b, m, instance, defaults, pay)) return true;
    int r = 0;
    bool blocks = true;
    b.for_each([&](ParticipantId i) {
      if (blocks && !(pay[r] < cur[i] - kEps)) blocks = false;
      ++r;
    });
    if (blocks) {
      found = b;
      return false;
    }
    return true;
  });
  return found;
}

bool is_stable(const CoalitionStructure& p, Mechanism m, const Instance& instance) {
  return !find_blocking_coalition(p, m, instance).has_value();
}

StabilityReport check_stability(const CoalitionStructure& p, Mechanism m, const Instance& instance) {
  StabilityReport report;
  report.structure = p;
  report.witness = find_blocking_coalition(p, m, instance);
  report.status = report.witness ? StabilityReport::Status::kBlocked : StabilityReport::Status::kStable;
  return report;
}

// ---------------------------------------------------------------------------
// Greedy sink construction

namespace {

bool score_less(double a, double b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  return a < b - tol;
}

CoalitionStructure greedy_by_score(const Instance& instance, Mechanism m) {
  const Coalition everyone = Coalition::all(instance.n);
  const int k = capacity(instance);
  enforce_guard(count_subsets_up_to(instance.n, k) > kMaxTableCoalitions,
                "greedy construction over more than 5000000 coalitions");
  const std::vector<Money> defaults = all_defaults(instance);
  const auto* pass = m == Mechanism::kUsageBased ? dynamic_cast<const PassOracle*>(instance.oracle.get()) : nullptr;

  std::vector<Coalition> coalitions;
  std::vector<double> scores;
  for_each_subset_up_to(everyone, k, [&](Coalition g) {
    const Money c = instance.oracle->cost(g);
    if (!is_feasible_cost(c)) return true;
    Money sum = 0;
    g.for_each([&](ParticipantId i) { sum += defaults[i]; });
    const double size = g.size();
    double score = 0;
    switch (m) {
      case Mechanism::kEqualSplit:
        score = c / size;
        break;
      case Mechanism::kProportional:
        score = c / sum;
        break;
      case Mechanism::kEgalitarian:
      case Mechanism::kNashUnconstrained:
      case Mechanism::kNashNonNegative:
        score = -(sum - c) / size;
        break;
      case Mechanism::kUsageBased: {
        std::size_t used = 0;
        g.for_each([&](ParticipantId i) { used += pass->users()[i].size(); });
        score = (c - pass->rate() * static_cast<Money>(used)) / size;
        break;
      }
    }
    coalitions.push_back(g);
    scores.push_back(score);
    return true;
  });

  std::vector<Coalition> chosen;
  Coalition remaining = everyone;
  while (!remaining.empty()) {
    int best = -1;
    for (int j = 0; j < static_cast<int>(coalitions.size()); ++j) {
      if (!coalitions[j].is_subset_of(remaining)) continue;
      // Candidates arrive in size-then-lexicographic order, so the first of
      // equal scores wins.
      if (best < 0 || score_less(scores[j], scores[best])) best = j;
    }
    chosen.push_back(coalitions[best]);
    remaining = remaining - coalitions[best];
  }
  return CoalitionStructure(std::move(chosen));
}

CoalitionStructure greedy_by_sinks(const Instance& instance, Mechanism m) {
  const PaymentTable table(instance, m);
  std::vector<Coalition> chosen;
  Coalition remaining = Coalition::all(instance.n);
  std::vector<Money> best_u(instance.n);
  while (!remaining.empty()) {
    std::fill(best_u.begin(), best_u.end(), -kInfinity);
    const auto& all = table.coalitions();
    for (int j = 0; j < static_cast<int>(all.size()); ++j) {
      if (!all[j].is_subset_of(remaining)) continue;
      const Money* pay = table.payments_at(j);
      int r = 0;
      all[j].for_each([&](ParticipantId i) {
        best_u[i] = std::max(best_u[i], table.default_cost(i) - pay[r]);
        ++r;
      });
    }
    int sink = -1;
    for (int j = 0; j < static_cast<int>(all.size()) && sink < 0; ++j) {
      if (!all[j].is_subset_of(remaining)) continue;
      const Money* pay = table.payments_at(j);
      bool ok = true;
      int r = 0;
      all[j].for_each([&](ParticipantId i) {
        if (table.default_cost(i) - pay[r] < best_u[i] - kEps) ok = false;
        ++r;
      });
      if (ok) sink = j;
    }
    if (sink < 0) {
      throw NoStableStructureError("no sink coalition among participants " + remaining.to_string(),
                                   detect_cyclic_preference(instance, m));
    }
    chosen.push_back(all[sink]);
    remaining = remaining - all[sink];
  }
  return CoalitionStructure(std::move(chosen));
}

}  // namespace

CoalitionStructure greedy_stable(const Instance& instance, Mechanism m) {
  require_resources(instance, m);
  const bool by_score = m != Mechanism::kUsageBased || dynamic_cast<const PassOracle*>(instance.oracle.get());
  CoalitionStructure p = by_score ? greedy_by_score(instance, m) : greedy_by_sinks(instance, m);
  if (const auto b = find_blocking_coalition(p, m, instance)) {
    throw CoalitionError("greedy structure " + p.to_string() + " is blocked by " + b->to_string());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Dynamics

StabilityReport improvement_dynamics(const Instance& instance, CoalitionStructure p0, Mechanism m, int max_steps) {
  if (max_steps < 1) throw ArgumentError("max_steps must be at least 1");
  StabilityReport report;
  report.structure = std::move(p0);
  report.structure.validate(instance.n, instance.k);
  std::unordered_set<CoalitionStructure, CoalitionStructureHash> seen;
  seen.insert(report.structure);
  while (true) {
    const std::optional<Coalition> b = find_blocking_coalition(report.structure, m, instance);
    if (!b) {
      report.status = StabilityReport::Status::kStable;
      return report;
    }
    if (report.steps >= max_steps) {
      report.status = StabilityReport::Status::kIterationCap;
      report.witness = b;
      return report;
    }
    report.structure = apply_deviation(report.structure, *b);
    report.trace.push_back(*b);
    ++report.steps;
    if (!seen.insert(report.structure).second) {
      report.status = StabilityReport::Status::kCycle;
      try {
        report.cycle = detect_cyclic_preference(instance, m);
      } catch (const ResourceLimitError&) {
        report.cycle.reset();
      }
      return report;
    }
  }
}

// ---------------------------------------------------------------------------
// Cyclic preferences

std::optional<PreferenceCycle> detect_cyclic_preference(const Instance& instance, Mechanism m) {
  require_resources(instance, m);
  enforce_guard(count_subsets_up_to(instance.n, capacity(instance)) > kMaxDigraphNodes,
                "preference digraph with more than 200000 coalitions");
  const PaymentTable table(instance, m);
  const auto& nodes = table.coalitions();
  const int count = static_cast<int>(nodes.size());

  // For each participant, coalitions containing it by decreasing utility.
  std::vector<std::vector<std::pair<Money, int>>> by_utility(instance.n);
  std::vector<std::vector<Money>> utility(count);
  for (int j = 0; j < count; ++j) {
    const Money* pay = table.payments_at(j);
    int r = 0;
    nodes[j].for_each([&](ParticipantId i) {
      const Money u = table.default_cost(i) - pay[r];
      utility[j].push_back(u);
      by_utility[i].push_back({u, j});
      ++r;
    });
  }
  for (auto& list : by_utility) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  }
  // Out-edges (target, participant) of node j.
  auto edges_of = [&](int j) {
    std::vector<std::pair<int, ParticipantId>> out;
    int r = 0;
    nodes[j].for_each([&](ParticipantId i) {
      const Money u = utility[j][r++];
      for (const auto& [v, target] : by_utility[i]) {
        if (!(u < v - kEps)) break;
        out.push_back({target, i});
      }
    });
    return out;
  };

  std::vector<char> color(count, 0);  // 0 new, 1 on stack, 2 done
  struct Frame {
    int node;
    std::vector<std::pair<int, ParticipantId>> edges;
    std::size_t next = 0;
    ParticipantId via = -1;  // participant on the edge into this node
  };
  for (int root = 0; root < count; ++root) {
    if (color[root] != 0) continue;
    std::vector<Frame> stack;
    stack.push_back({root, edges_of(root), 0, -1});
    color[root] = 1;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == top.edges.size()) {
        color[top.node] = 2;
        stack.pop_back();
        continue;
      }
      const auto [target, via] = top.edges[top.next++];
      if (color[target] == 0) {
        color[target] = 1;
        stack.push_back({target, edges_of(target), 0, via});
        continue;
      }
      if (color[target] != 1) continue;
      // Back edge: the stack from `target` to the top is a directed cycle
      // H_1 -> ... -> H_s -> H_1 with witnesses j_1..j_s.
      std::size_t start = 0;
      while (stack[start].node != target) ++start;
      std::vector<Coalition> h;
      std::vector<ParticipantId> j;
      for (std::size_t q = start; q < stack.size(); ++q) {
        h.push_back(nodes[stack[q].node]);
        if (q > start) j.push_back(stack[q].via);
      }
      j.push_back(via);
      // Reverse the orientation so that each participant prefers the earlier
      // coalition to the next one.
      PreferenceCycle cycle;
      const std::size_t s = h.size();
      cycle.coalitions.assign(h.rbegin(), h.rend());
      for (std::size_t q = 0; q + 1 < s; ++q) cycle.participants.push_back(j[s - 2 - q]);
      cycle.participants.push_back(j[s - 1]);
      return cycle;
    }
  }
  return std::nullopt;
}

bool verify_cycle(const PreferenceCycle& cycle, Mechanism m, const Instance& instance) {
  const std::size_t s = cycle.size();
  if (s < 2 || cycle.coalitions.size() != s) return false;
  for (std::size_t q = 0; q < s; ++q) {
    const Coalition a = cycle.coalitions[q];
    const Coalition b = cycle.coalitions[(q + 1) % s];
    const ParticipantId i = cycle.participants[q];
    if (a.size() > instance.k || b.size() > instance.k || !a.contains(i) || !b.contains(i)) return false;
    if (!is_feasible_cost(instance.oracle->cost(a)) || !is_feasible_cost(instance.oracle->cost(b))) return false;
    const Money ua = utility_of(i, pay(m, a, *instance.oracle), *instance.oracle);
    const Money ub = utility_of(i, pay(m, b, *instance.oracle), *instance.oracle);
    if (!(ua > ub + kEps)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<CoalitionStructure> enumerate_stable_structures(const Instance& instance, Mechanism m) {
  enforce_guard(instance.n > 12, "stable-structure enumeration with more than 12 participants");
  const PaymentTable table(instance, m);
  const auto& all = table.coalitions();
  const int n = instance.n;

  // Per participant: coalitions containing it, in table order, and the same
  // coalitions by increasing payment.
  std::vector<std::vector<int>> containing(n);
  std::vector<std::vector<std::pair<Money, int>>> by_payment(n);
  for (int j = 0; j < static_cast<int>(all.size()); ++j) {
    const Money* pay = table.payments_at(j);
    int r = 0;
    all[j].for_each([&](ParticipantId i) {
      containing[i].push_back(j);
      by_payment[i].push_back({pay[r++], j});
    });
  }
  for (auto& list : by_payment) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  std::vector<CoalitionStructure> out;
  std::vector<Money> current(n, 0);
  std::vector<Coalition> chosen;
  const Coalition everyone = Coalition::all(n);

  // True when some coalition inside `assigned` that meets `added` blocks.
  auto blocked = [&](Coalition assigned, Coalition added) {
    bool found = false;
    added.for_each([&](ParticipantId i) {
      if (found) return;
      for (const auto& [p, j] : by_payment[i]) {
        if (!(p < current[i] - kEps)) break;
        const Coalition b = all[j];
        if (!b.is_subset_of(assigned)) continue;
        const Money* pay = table.payments_at(j);
        bool all_gain = true;
        int r = 0;
        b.for_each([&](ParticipantId q) {
          if (!(pay[r] < current[q] - kEps)) all_gain = false;
          ++r;
        });
        if (all_gain) {
          found = true;
          return;
        }
      }
    });
    return found;
  };

  std::function<void(Coalition)> dfs = [&](Coalition assigned) {
    if (assigned == everyone) {
      out.emplace_back(chosen);
      return;
    }
    const ParticipantId low = (everyone - assigned).lowest();
    for (int j : containing[low]) {
      const Coalition t = all[j];
      if (t.intersects(assigned)) continue;
      const Money* pay = table.payments_at(j);
      int r = 0;
      t.for_each([&](ParticipantId i) { current[i] = pay[r++]; });
      const Coalition next = assigned | t;
      if (blocked(next, t)) continue;
      chosen.push_back(t);
      dfs(next);
      chosen.pop_back();
    }
  };
  dfs(Coalition());
  return out;
}

// ---------------------------------------------------------------------------
// Refinement

CoalitionStructure nash_positive_refinement(const CoalitionStructure& p, const CostOracle& oracle) {
  std::vector<Coalition> out;
  for (Coalition g : p) {
    std::vector<ParticipantId> order = g.members();
    std::vector<Money> c(order.size());
    std::stable_sort(order.begin(), order.end(),
                     [&](ParticipantId a, ParticipantId b) { return oracle.default_cost(a) > oracle.default_cost(b); });
    for (std::size_t q = 0; q < order.size(); ++q) c[q] = oracle.default_cost(order[q]);

    Coalition group = Coalition::singleton(order[0]);
    Money sum = c[0];
    for (std::size_t k = 1; k < order.size(); ++k) {
      const Coalition extended = group.with(order[k]);
      const Money ext_sum = sum + c[k];
      const Money share = (ext_sum - oracle.cost(extended)) / static_cast<Money>(extended.size());
      // The newest (cheapest) member must still pay a positive share.
      if (c[k] - share > kEps) {
        group = extended;
        sum = ext_sum;
      } else {
        out.push_back(group);
        group = Coalition::singleton(order[k]);
        sum = c[k];
      }
    }
    out.push_back(group);
  }
  return CoalitionStructure(std::move(out));
}

// ---------------------------------------------------------------------------
// Chains

ChainDiagnostic chain_ratio(const Instance& instance, Mechanism m, const ChainOptions& options) {
  require_resources(instance, m);
  const int n = instance.n;
  const int len = capacity(instance);
  const std::vector<Money> defaults = all_defaults(instance);

  struct Entry {
    bool feasible = false;
    Money cost = 0;
    std::vector<Money> pay;
  };
  std::unordered_map<Coalition, Entry, CoalitionHash> memo;
  auto lookup = [&](Coalition g) -> const Entry& {
    auto it = memo.find(g);
    if (it == memo.end()) {
      Entry e;
      e.feasible = compute_payments(g, m, instance, defaults, e.pay, &e.cost);
      it = memo.emplace(g, std::move(e)).first;
    }
    return it->second;
  };

  ChainDiagnostic best;
  best.ratio = -kInfinity;
  if (options.mode == ChainOptions::Mode::kAll) {
    double tuples = 1;
    for (int s = 0; s < len; ++s) tuples *= n - s;
    enforce_guard(tuples > 1e7, "chain enumeration over more than 10^7 ordered tuples");
    // best_sum(H) = max over i in H of p_i(H) + best_sum(H - i).
    std::unordered_map<Coalition, std::pair<Money, ParticipantId>, CoalitionHash> best_sum;
    for_each_subset_up_to(Coalition::all(n), len, [&](Coalition h) {
      const Entry& e = lookup(h);
      if (!e.feasible) return true;
      Money top = -kInfinity;
      ParticipantId arg = -1;
      int r = 0;
      h.for_each([&](ParticipantId i) {
        const Coalition rest = h.without(i);
        const Money tail = rest.empty() ? 0 : best_sum.at(rest).first;
        const Money v = e.pay[r++] + tail;
        if (v > top) {
          top = v;
          arg = i;
        }
      });
      best_sum.emplace(h, std::make_pair(top, arg));
      if (h.size() == len) {
        const double ratio = top / e.cost;
        if (ratio > best.ratio) {
          best.ratio = ratio;
          best.chain.clear();
          for (Coalition rest = h; !rest.empty();) {
            const ParticipantId i = best_sum.at(rest).second;
            best.chain.push_back(i);
            rest = rest.without(i);
          }
        }
      }
      return true;
    });
    return best;
  }

  std::mt19937_64 rng(options.seed);
  std::vector<ParticipantId> ids(n);
  for (std::uint64_t t = 0; t < options.samples; ++t) {
    std::iota(ids.begin(), ids.end(), 0);
    for (int s = 0; s < len; ++s) {
      std::uniform_int_distribution<int> pick(s, n - 1);
      std::swap(ids[s], ids[pick(rng)]);
    }
    Coalition h;
    for (int s = 0; s < len; ++s) h = h.with(ids[s]);
    const Entry& first = lookup(h);
    if (!first.feasible) continue;
    const Money head_cost = first.cost;
    Money sum = 0;
    Coalition rest = h;
    for (int s = 0; s < len; ++s) {
      const Entry& e = lookup(rest);
      sum += e.pay[rest.rank_of(ids[s])];
      rest = rest.without(ids[s]);
    }
    const double ratio = sum / head_cost;
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.chain.assign(ids.begin(), ids.begin() + len);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const PreferenceCycle& cycle) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t q = 0; q < cycle.size(); ++q) {
    steps.push_back({{"participant", cycle.participants[q]}, {"coalition", cycle.coalitions[q].members()}});
  }
  return steps;
}

nlohmann::json to_json(const CoalitionStructure& p) {
  nlohmann::json out = nlohmann::json::array();
  for (Coalition g : p) out.push_back(g.members());
  return out;
}

nlohmann::json to_json(const StabilityReport& report) {
  nlohmann::json j = {
      {"status", to_string(report.status)},
      {"structure", to_json(report.structure)},
      {"steps", report.steps},
  };
  if (report.witness) j["witness"] = report.witness->members();
  if (report.cycle) j["cycle"] = to_json(*report.cycle);
  return j;
}

nlohmann::json to_json(const ChainDiagnostic& chain) {
  return {{"chain", chain.chain}, {"ratio", chain.ratio}};
}

}  // namespace coalition
