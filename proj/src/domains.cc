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

#include "coalition/domains.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "coalition/errors.h"

namespace coalition {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hotel

Money HotelOracle::Rates::rate(int location, int day) const {
  const auto it = overrides.find({location, day});
  return it == overrides.end() ? default_rate : it->second;
}

HotelOracle::HotelOracle(std::vector<Traveler> travelers, Rates rates)
    : travelers_(std::move(travelers)), rates_(std::move(rates)) {
  if (travelers_.empty() || static_cast<int>(travelers_.size()) > kMaxParticipants) {
    throw ValidationError("hotel instance needs 1 to " + std::to_string(kMaxParticipants) + " travelers");
  }
  for (std::size_t i = 0; i < travelers_.size(); ++i) {
    Traveler& t = travelers_[i];
    if (t.t_in > t.t_out) throw ValidationError("traveler " + std::to_string(i) + " leaves before arriving");
    t.areas = sorted_unique(std::move(t.areas));
    if (t.areas.empty()) throw ValidationError("traveler " + std::to_string(i) + " accepts no location");
  }
  if (!(rates_.default_rate > 0) || !std::isfinite(rates_.default_rate)) {
    throw ValidationError("hotel default rate must be positive");
  }
  for (const auto& [key, r] : rates_.overrides) {
    if (!(r > 0) || !std::isfinite(r)) throw ValidationError("hotel rates must be positive");
  }
}

std::optional<Resource> HotelOracle::best_resource(Coalition g) const {
  if (g.empty()) return std::nullopt;
  std::vector<int> common;
  int first = 0;
  int last = 0;
  bool start = true;
  g.for_each([&](ParticipantId i) {
    const Traveler& t = travelers_.at(i);
    if (start) {
      common = t.areas;
      first = t.t_in;
      last = t.t_out;
      start = false;
      return;
    }
    std::vector<int> next;
    std::set_intersection(common.begin(), common.end(), t.areas.begin(), t.areas.end(), std::back_inserter(next));
    common.swap(next);
    first = std::min(first, t.t_in);
    last = std::max(last, t.t_out);
  });
  if (common.empty()) return std::nullopt;

  int best_location = -1;
  Money best_cost = kInfinity;
  for (int location : common) {
    Money c = 0;
    for (int day = first; day <= last; ++day) c += rates_.rate(location, day);
    if (c < best_cost) {
      best_cost = c;
      best_location = location;
    }
  }

  Resource r;
  r.coalition = g;
  r.total_cost = best_cost;
  r.label = "location " + std::to_string(best_location) + " days " + std::to_string(first) + ".." +
            std::to_string(last);
  r.usage.resize(g.size());
  const std::vector<ParticipantId> members = g.members();
  for (int day = first; day <= last; ++day) {
    const int f = static_cast<int>(r.facilities.size());
    r.facilities.push_back({day, rates_.rate(best_location, day)});
    bool occupied = false;
    for (ParticipantId i : members) occupied |= travelers_[i].t_in <= day && day <= travelers_[i].t_out;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const Traveler& t = travelers_[members[k]];
      if (!occupied || (t.t_in <= day && day <= t.t_out)) r.usage[k].push_back(f);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Taxi

TaxiOracle::TaxiOracle(std::vector<Passenger> passengers, std::vector<Edge> edges)
    : passengers_(std::move(passengers)), edges_(std::move(edges)) {
  if (passengers_.empty() || static_cast<int>(passengers_.size()) > kMaxParticipants) {
    throw ValidationError("taxi instance needs 1 to " + std::to_string(kMaxParticipants) + " passengers");
  }
  int max_node = -1;
  for (std::size_t i = 0; i < passengers_.size(); ++i) {
    const Passenger& p = passengers_[i];
    if (p.source < 0 || p.destination < 0) throw ValidationError("negative node id for passenger " + std::to_string(i));
    if (p.source == p.destination) {
      throw ValidationError("passenger " + std::to_string(i) + " has identical pickup and dropoff");
    }
    if (p.earliest >= p.latest) {
      throw ValidationError("passenger " + std::to_string(i) + " has an empty time window");
    }
    max_node = std::max({max_node, p.source, p.destination});
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.v < 0) throw ValidationError("negative node id on edge " + std::to_string(e));
    if (!(ed.fare > 0) || !std::isfinite(ed.fare) || ed.time <= 0) {
      throw ValidationError("edge " + std::to_string(e) + " needs positive fare and time");
    }
    max_node = std::max({max_node, ed.u, ed.v});
  }
  nodes_ = max_node + 1;
  enforce_guard(nodes_ > 2000, "road network with more than 2000 nodes");

  const std::size_t nn = static_cast<std::size_t>(nodes_) * nodes_;
  fare_.assign(nn, kInfinity);
  time_.assign(nn, 0);
  next_edge_.assign(nn, -1);
  auto at = [&](int u, int v) { return static_cast<std::size_t>(u) * nodes_ + v; };
  for (int u = 0; u < nodes_; ++u) fare_[at(u, u)] = 0;
  // Paths are ranked by fare, then travel time.
  auto better = [](Money f1, long t1, Money f2, long t2) { return f1 < f2 || (f1 == f2 && t1 < t2); };
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u == ed.v) continue;
    const std::size_t k = at(ed.u, ed.v);
    if (better(ed.fare, ed.time, fare_[k], time_[k])) {
      fare_[k] = ed.fare;
      time_[k] = ed.time;
      next_edge_[k] = static_cast<int>(e);
    }
  }
  for (int w = 0; w < nodes_; ++w) {
    for (int u = 0; u < nodes_; ++u) {
      const std::size_t uw = at(u, w);
      if (!is_feasible_cost(fare_[uw])) continue;
      for (int v = 0; v < nodes_; ++v) {
        const std::size_t wv = at(w, v);
        const std::size_t uv = at(u, v);
        if (!is_feasible_cost(fare_[wv]) || u == v) continue;
        const Money f = fare_[uw] + fare_[wv];
        const long t = time_[uw] + time_[wv];
        if (better(f, t, fare_[uv], time_[uv])) {
          fare_[uv] = f;
          time_[uv] = t;
          next_edge_[uv] = next_edge_[uw];
        }
      }
    }
  }

  for (std::size_t i = 0; i < passengers_.size(); ++i) {
    if (!search(Coalition::singleton(static_cast<ParticipantId>(i)), true)) {
      throw ValidationError("passenger " + std::to_string(i) + " cannot be served alone");
    }
  }
}

Money TaxiOracle::path_fare(int u, int v) const {
  if (u < 0 || v < 0 || u >= nodes_ || v >= nodes_) return u == v ? 0 : kInfinity;
  return fare_[static_cast<std::size_t>(u) * nodes_ + v];
}

std::optional<Resource> TaxiOracle::best_resource(Coalition g) const { return search(g, true); }

std::optional<Resource> TaxiOracle::best_resource_unpruned(Coalition g) const { return search(g, false); }

std::optional<Resource> TaxiOracle::search(Coalition g, bool pruned) const {
  if (g.empty()) return std::nullopt;
  const std::vector<ParticipantId> members = g.members();
  const int m = static_cast<int>(members.size());
  enforce_guard(m > 5, "taxi ride search for more than 5 passengers");
  auto at = [&](int u, int v) { return static_cast<std::size_t>(u) * nodes_ + v; };
  // Stop code 2r is the pickup of the r-th member, 2r + 1 its dropoff.
  auto node_of = [&](int code) {
    const Passenger& p = passengers_[members[code / 2]];
    return code % 2 == 0 ? p.source : p.destination;
  };

  // Fare of a stop order, or kInfinity when unreachable or late. The cab waits
  // at a pickup until the passenger's earliest slot.
  auto evaluate = [&](const std::vector<int>& seq) -> Money {
    Money fare = 0;
    long clock = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const int code = seq[k];
      if (k > 0) {
        const std::size_t leg = at(node_of(seq[k - 1]), node_of(code));
        if (!is_feasible_cost(fare_[leg])) return kInfinity;
        fare += fare_[leg];
        clock += time_[leg];
      }
      const Passenger& p = passengers_[members[code / 2]];
      if (code % 2 == 0) {
        clock = k == 0 ? p.earliest : std::max<long>(clock, p.earliest);
      } else if (clock > p.latest) {
        return kInfinity;
      }
    }
    return fare;
  };

  std::vector<int> best_seq;
  Money best = kInfinity;
  auto consider = [&](const std::vector<int>& seq) {
    const Money f = evaluate(seq);
    if (f < best) {
      best = f;
      best_seq = seq;
    }
  };

  std::vector<int> seq;
  if (pruned) {
    std::vector<int> state(m, 0);  // 0 waiting, 1 on board, 2 delivered
    std::function<void()> dfs = [&]() {
      if (static_cast<int>(seq.size()) == 2 * m) {
        consider(seq);
        return;
      }
      for (int r = 0; r < m; ++r) {
        if (state[r] == 2) continue;
        seq.push_back(2 * r + state[r]);
        ++state[r];
        dfs();
        --state[r];
        seq.pop_back();
      }
    };
    dfs();
  } else {
    seq.resize(2 * m);
    std::iota(seq.begin(), seq.end(), 0);
    do {
      std::vector<int> pos(2 * m);
      for (int k = 0; k < 2 * m; ++k) pos[seq[k]] = k;
      bool ordered = true;
      for (int r = 0; r < m; ++r) ordered &= pos[2 * r] < pos[2 * r + 1];
      if (ordered) consider(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
  }
  if (!is_feasible_cost(best)) return std::nullopt;

  // Expand the chosen order into edge traversals.
  Resource r;
  r.coalition = g;
  r.total_cost = 0;
  r.usage.resize(m);
  std::vector<int> traversals_before(best_seq.size(), 0);
  std::string label = "stops";
  for (std::size_t k = 0; k < best_seq.size(); ++k) {
    if (k > 0) {
      int u = node_of(best_seq[k - 1]);
      const int v = node_of(best_seq[k]);
      while (u != v) {
        const int e = next_edge_[at(u, v)];
        r.facilities.push_back({e, edges_[e].fare});
        r.total_cost += edges_[e].fare;
        u = edges_[e].v;
      }
    }
    traversals_before[k] = static_cast<int>(r.facilities.size());
    label += (best_seq[k] % 2 == 0 ? " +" : " -") + std::to_string(members[best_seq[k] / 2]);
  }
  r.label = label;
  std::vector<int> riders(r.facilities.size(), 0);
  std::vector<int> pickup(m), dropoff(m);
  for (std::size_t k = 0; k < best_seq.size(); ++k) {
    (best_seq[k] % 2 == 0 ? pickup : dropoff)[best_seq[k] / 2] = traversals_before[k];
  }
  for (int q = 0; q < m; ++q) {
    for (int f = pickup[q]; f < dropoff[q]; ++f) {
      r.usage[q].push_back(f);
      ++riders[f];
    }
  }
  for (std::size_t f = 0; f < riders.size(); ++f) {
    if (riders[f] > 0) continue;
    for (int q = 0; q < m; ++q) r.usage[q].push_back(static_cast<int>(f));
  }
  for (auto& u : r.usage) std::sort(u.begin(), u.end());
  // Facility ids identify traversals, not edges, so repeated edges stay distinct.
  for (std::size_t f = 0; f < r.facilities.size(); ++f) r.facilities[f].id = static_cast<int>(f);
  return r;
}

// ---------------------------------------------------------------------------
// Pass

PassOracle::PassOracle(std::vector<std::vector<int>> users, std::vector<std::vector<int>> passes, Money rate)
    : users_(std::move(users)), passes_(std::move(passes)), rate_(rate) {
  if (users_.empty() || static_cast<int>(users_.size()) > kMaxParticipants) {
    throw ValidationError("pass instance needs 1 to " + std::to_string(kMaxParticipants) + " users");
  }
  if (!(rate_ > 0) || !std::isfinite(rate_)) throw ValidationError("pass rate must be positive");
  for (auto& p : passes_) p = sorted_unique(std::move(p));
  for (std::size_t i = 0; i < users_.size(); ++i) {
    users_[i] = sorted_unique(std::move(users_[i]));
    if (users_[i].empty()) throw ValidationError("user " + std::to_string(i) + " requires no slot");
    if (!best_resource(Coalition::singleton(static_cast<ParticipantId>(i)))) {
      throw ValidationError("no pass covers the slots of user " + std::to_string(i));
    }
  }
}

std::optional<Resource> PassOracle::best_resource(Coalition g) const {
  if (g.empty()) return std::nullopt;
  std::vector<int> needed;
  std::size_t total = 0;
  g.for_each([&](ParticipantId i) {
    needed.insert(needed.end(), users_.at(i).begin(), users_.at(i).end());
    total += users_[i].size();
  });
  needed = sorted_unique(std::move(needed));
  if (needed.size() != total) return std::nullopt;  // overlapping slots

  int best = -1;
  for (std::size_t p = 0; p < passes_.size(); ++p) {
    if (!std::includes(passes_[p].begin(), passes_[p].end(), needed.begin(), needed.end())) continue;
    if (best < 0 || passes_[p].size() < passes_[best].size()) best = static_cast<int>(p);
  }
  if (best < 0) return std::nullopt;

  const std::vector<int>& slots = passes_[best];
  Resource r;
  r.coalition = g;
  r.total_cost = rate_ * static_cast<Money>(slots.size());
  r.label = "pass " + std::to_string(best);
  r.usage.resize(g.size());
  const std::vector<ParticipantId> members = g.members();
  for (std::size_t f = 0; f < slots.size(); ++f) {
    r.facilities.push_back({slots[f], rate_});
    const bool idle = !std::binary_search(needed.begin(), needed.end(), slots[f]);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& mine = users_[members[k]];
      if (idle || std::binary_search(mine.begin(), mine.end(), slots[f])) r.usage[k].push_back(static_cast<int>(f));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

class ResourceCache {
 public:
  explicit ResourceCache(const ResourceOracle& oracle) : oracle_(oracle) {}

  const std::optional<Resource>& get(Coalition g) {
    auto it = cache_.find(g);
    if (it == cache_.end()) it = cache_.emplace(g, oracle_.best_resource(g)).first;
    return it->second;
  }

 private:
  const ResourceOracle& oracle_;
  std::unordered_map<Coalition, std::optional<Resource>, CoalitionHash> cache_;
};

// Cost of the facilities of `r` used by at least one member of `h`.
Money used_by(const Resource& r, Coalition h) {
  std::vector<char> used(r.facilities.size(), 0);
  h.for_each([&](ParticipantId i) {
    for (int f : r.usage_of(i)) used[f] = 1;
  });
  Money total = 0;
  for (std::size_t f = 0; f < used.size(); ++f) {
    if (used[f]) total += r.facilities[f].cost;
  }
  return total;
}

void check_pair(ResourceCache& cache, Coalition h, Coalition g, UtilizationReport& report) {
  const auto& rg = cache.get(g);
  if (!rg) return;
  const auto& rh = cache.get(h);
  if (!rh) return;
  ++report.pairs_checked;
  const Money in_h = used_by(*rh, h);
  const Money in_g = used_by(*rg, h);
  if (in_h > in_g + kEps * std::max<Money>(1, in_g)) report.violations.push_back({h, g, in_h, in_g});
}

}  // namespace

UtilizationReport check_monotone_utilization(const ResourceOracle& oracle, int max_size,
                                             const ValidationOptions& options) {
  UtilizationReport report;
  ResourceCache cache(oracle);
  const int n = oracle.participant_count();
  max_size = std::min(max_size, n);
  if (options.mode == ValidationMode::kExhaustive) {
    enforce_guard(n > 10, "exhaustive utilization check with more than 10 participants");
    for_each_subset_up_to(Coalition::all(n), max_size, [&](Coalition g) {
      if (g.size() < 2 || !cache.get(g)) return true;
      // Proper non-empty subsets of g.
      for (Mask h = (g.mask() - 1) & g.mask(); h != 0; h = (h - 1) & g.mask()) {
        check_pair(cache, Coalition::from_mask(h), g, report);
      }
      return true;
    });
    return report;
  }
  if (max_size < 2) return report;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> size_dist(2, max_size);
  std::vector<ParticipantId> ids(n);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    const int size = size_dist(rng);
    std::uniform_int_distribution<int> sub_dist(1, size - 1);
    const int sub = sub_dist(rng);
    Mask g = 0;
    Mask h = 0;
    for (int j = 0; j < size; ++j) {
      g |= bit(ids[j]);
      if (j < sub) h |= bit(ids[j]);
    }
    check_pair(cache, Coalition::from_mask(h), Coalition::from_mask(g), report);
  }
  return report;
}

}  // namespace coalition
