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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "coalition/domains.h"
#include "coalition/errors.h"
#include "coalition/instance.h"
#include "coalition/usage_tables.h"

namespace coalition {

using nlohmann::json;

Instance make_instance(std::string id, int k, std::shared_ptr<const CostOracle> oracle) {
  if (!oracle) throw ArgumentError("instance without a cost oracle");
  if (k < 1) throw ValidationError("capacity k must be at least 1");
  Instance inst;
  inst.id = std::move(id);
  inst.n = oracle->participant_count();
  inst.k = k;
  inst.oracle = std::move(oracle);
  return inst;
}

Instance truncated(const Instance& instance) {
  Instance out = instance;
  out.oracle = truncated_oracle(instance.oracle);
  return out;
}

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_ + ": " + what); }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) fail("missing field '" + key + "'");
    return Reader(j_.at(key), path_ + "." + key);
  }

  Reader at(std::size_t index) const { return Reader(j_.at(index), path_ + "[" + std::to_string(index) + "]"); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  int as_int() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }

  double as_number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  std::string as_string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::vector<int> as_ints() const {
    std::vector<int> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k).as_int();
    return out;
  }

  Coalition as_coalition(int n) const {
    const std::vector<int> ids = as_ints();
    for (int i : ids) {
      if (i < 0 || i >= n) fail("participant " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
    }
    const Coalition g = Coalition::from_members(ids);
    if (g.size() != static_cast<int>(ids.size())) fail("repeated participant");
    return g;
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

template <typename Fn>
auto wrap_validation(const Reader& r, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
}

std::shared_ptr<const CostOracle> read_table(const Reader& o, int n, int k) {
  const Reader es = o.at("entries");
  std::vector<ExplicitCostTable::Entry> entries;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const Reader entry = es.at(e);
    entries.push_back({entry.at("members").as_coalition(n), entry.at("cost").as_number()});
  }
  ExplicitCostTable::Completion completion = ExplicitCostTable::Completion::kNone;
  if (o.has("completion")) {
    const std::string c = o.at("completion").as_string();
    if (c == "case3") {
      completion = ExplicitCostTable::Completion::kCase3;
    } else if (c != "none") {
      o.at("completion").fail("expected \"none\" or \"case3\"");
    }
  }
  return wrap_validation(o, [&] { return std::make_shared<ExplicitCostTable>(n, k, std::move(entries), completion); });
}

std::shared_ptr<const CostOracle> read_hotel(const Reader& o) {
  const Reader ts = o.at("travelers");
  std::vector<HotelOracle::Traveler> travelers;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Reader t = ts.at(i);
    travelers.push_back({t.at("t_in").as_int(), t.at("t_out").as_int(), t.at("areas").as_ints()});
  }
  HotelOracle::Rates rates;
  if (o.has("rates")) {
    const Reader rs = o.at("rates");
    if (rs.has("default")) rates.default_rate = rs.at("default").as_number();
    if (rs.has("entries")) {
      const Reader es = rs.at("entries");
      for (std::size_t e = 0; e < es.size(); ++e) {
        const Reader entry = es.at(e);
        rates.overrides[{entry.at("location").as_int(), entry.at("day").as_int()}] = entry.at("rate").as_number();
      }
    }
  }
  return wrap_validation(o, [&] { return std::make_shared<HotelOracle>(std::move(travelers), std::move(rates)); });
}

std::shared_ptr<const CostOracle> read_taxi(const Reader& o) {
  const Reader ps = o.at("passengers");
  std::vector<TaxiOracle::Passenger> passengers;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Reader p = ps.at(i);
    passengers.push_back(
        {p.at("source").as_int(), p.at("destination").as_int(), p.at("earliest").as_int(), p.at("latest").as_int()});
  }
  const Reader es = o.at("edges");
  std::vector<TaxiOracle::Edge> edges;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const Reader ed = es.at(e);
    edges.push_back({ed.at("u").as_int(), ed.at("v").as_int(), ed.at("fare").as_number(), ed.at("time").as_int()});
  }
  return wrap_validation(o, [&] { return std::make_shared<TaxiOracle>(std::move(passengers), std::move(edges)); });
}

std::shared_ptr<const CostOracle> read_pass(const Reader& o) {
  const Reader us = o.at("users");
  std::vector<std::vector<int>> users;
  for (std::size_t i = 0; i < us.size(); ++i) users.push_back(us.at(i).as_ints());
  const Reader ps = o.at("passes");
  std::vector<std::vector<int>> passes;
  for (std::size_t p = 0; p < ps.size(); ++p) passes.push_back(ps.at(p).as_ints());
  const Money rate = o.has("rate") ? o.at("rate").as_number() : 1.0;
  return wrap_validation(o, [&] { return std::make_shared<PassOracle>(std::move(users), std::move(passes), rate); });
}

std::shared_ptr<const CostOracle> read_usage_table(const Reader& o, int n) {
  const Reader cs = o.at("coalitions");
  std::vector<UsageTableOracle::Entry> entries;
  for (std::size_t e = 0; e < cs.size(); ++e) {
    const Reader c = cs.at(e);
    UsageTableOracle::Entry entry;
    entry.members = c.at("members").as_coalition(n);
    const Reader fs = c.at("facilities");
    for (std::size_t f = 0; f < fs.size(); ++f) {
      const Reader fac = fs.at(f);
      entry.facilities.push_back({fac.at("cost").as_number(), fac.at("users").as_coalition(n)});
    }
    entries.push_back(std::move(entry));
  }
  return wrap_validation(o, [&] { return std::make_shared<UsageTableOracle>(n, std::move(entries)); });
}

std::shared_ptr<const CostOracle> read_usage_groups(const Reader& o, int n) {
  const Reader gs = o.at("groups");
  std::vector<UsageGroupsOracle::Group> groups;
  for (std::size_t g = 0; g < gs.size(); ++g) {
    const Reader grp = gs.at(g);
    UsageGroupsOracle::Group group;
    group.members = grp.at("members").as_ints();
    for (int i : group.members) {
      if (i < 0 || i >= n) grp.at("members").fail("participant " + std::to_string(i) + " out of range");
    }
    try {
      group.pattern = parse_pattern(grp.at("pattern").as_string());
    } catch (const ArgumentError& e) {
      grp.at("pattern").fail(e.what());
    }
    group.cost = grp.at("cost").as_number();
    groups.push_back(std::move(group));
  }
  return wrap_validation(o, [&] { return std::make_shared<UsageGroupsOracle>(n, std::move(groups)); });
}

json coalition_json(Coalition g) { return g.members(); }

json oracle_to_json(const CostOracle& oracle) {
  if (const auto* t = dynamic_cast<const ExplicitCostTable*>(&oracle)) {
    json entries = json::array();
    for (const auto& e : t->entries()) entries.push_back({{"members", coalition_json(e.members)}, {"cost", e.cost}});
    return {{"kind", "table"},
            {"completion", t->completion() == ExplicitCostTable::Completion::kCase3 ? "case3" : "none"},
            {"entries", std::move(entries)}};
  }
  if (const auto* h = dynamic_cast<const HotelOracle*>(&oracle)) {
    json travelers = json::array();
    for (const auto& t : h->travelers()) travelers.push_back({{"t_in", t.t_in}, {"t_out", t.t_out}, {"areas", t.areas}});
    json overrides = json::array();
    for (const auto& [key, rate] : h->rates().overrides) {
      overrides.push_back({{"location", key.first}, {"day", key.second}, {"rate", rate}});
    }
    return {{"kind", "hotel"},
            {"travelers", std::move(travelers)},
            {"rates", {{"default", h->rates().default_rate}, {"entries", std::move(overrides)}}}};
  }
  if (const auto* x = dynamic_cast<const TaxiOracle*>(&oracle)) {
    json passengers = json::array();
    for (const auto& p : x->passengers()) {
      passengers.push_back(
          {{"source", p.source}, {"destination", p.destination}, {"earliest", p.earliest}, {"latest", p.latest}});
    }
    json edges = json::array();
    for (const auto& e : x->edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"fare", e.fare}, {"time", e.time}});
    return {{"kind", "taxi"}, {"passengers", std::move(passengers)}, {"edges", std::move(edges)}};
  }
  if (const auto* p = dynamic_cast<const PassOracle*>(&oracle)) {
    return {{"kind", "pass"}, {"users", p->users()}, {"passes", p->passes()}, {"rate", p->rate()}};
  }
  if (const auto* u = dynamic_cast<const UsageTableOracle*>(&oracle)) {
    json coalitions = json::array();
    for (const auto& e : u->entries()) {
      json facilities = json::array();
      for (const auto& f : e.facilities) facilities.push_back({{"cost", f.cost}, {"users", coalition_json(f.users)}});
      coalitions.push_back({{"members", coalition_json(e.members)}, {"facilities", std::move(facilities)}});
    }
    return {{"kind", "usage-table"}, {"coalitions", std::move(coalitions)}};
  }
  if (const auto* u = dynamic_cast<const UsageGroupsOracle*>(&oracle)) {
    json groups = json::array();
    for (const auto& g : u->groups()) {
      groups.push_back({{"members", g.members}, {"pattern", to_string(g.pattern)}, {"cost", g.cost}});
    }
    return {{"kind", "usage-groups"}, {"groups", std::move(groups)}};
  }
  if (dynamic_cast<const TruncatedOracle*>(&oracle) != nullptr) {
    throw UnsupportedError("truncated oracles are derived and not serialized");
  }
  throw UnsupportedError("oracle type cannot be serialized");
}

}  // namespace

Instance instance_from_json(const json& j) {
  const Reader root(j, "$");
  const int n = root.at("n").as_int();
  const int k = root.at("k").as_int();
  if (n < 1 || n > kMaxParticipants) {
    root.at("n").fail("participant count must lie in [1, " + std::to_string(kMaxParticipants) + "]");
  }
  if (k < 1) root.at("k").fail("capacity must be at least 1");
  const std::string id = root.has("id") ? root.at("id").as_string() : std::string();
  const Reader o = root.at("oracle");
  const std::string kind = o.at("kind").as_string();
  std::shared_ptr<const CostOracle> oracle;
  if (kind == "table") {
    oracle = read_table(o, n, k);
  } else if (kind == "hotel") {
    oracle = read_hotel(o);
  } else if (kind == "taxi") {
    oracle = read_taxi(o);
  } else if (kind == "pass") {
    oracle = read_pass(o);
  } else if (kind == "usage-table") {
    oracle = read_usage_table(o, n);
  } else if (kind == "usage-groups") {
    oracle = read_usage_groups(o, n);
  } else {
    o.at("kind").fail("unknown oracle kind '" + kind + "'");
  }
  if (oracle->participant_count() != n) {
    root.at("n").fail("declares " + std::to_string(n) + " participants but the oracle has " +
                      std::to_string(oracle->participant_count()));
  }
  return make_instance(id, k, std::move(oracle));
}

json instance_to_json(const Instance& instance) {
  json j = json::object();
  if (!instance.id.empty()) j["id"] = instance.id;
  j["n"] = instance.n;
  j["k"] = instance.k;
  j["oracle"] = oracle_to_json(*instance.oracle);
  return j;
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t p = 0; p + 1 < offset; ++p) {
      if (text[p] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
  return instance_from_json(j);
}

std::string dump_instance(const Instance& instance) { return instance_to_json(instance).dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw ArgumentError("failed writing '" + path + "'");
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) { write_file(path, dump_instance(instance)); }

}  // namespace coalition
