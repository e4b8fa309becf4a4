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

#include "coalition/core.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string_view>

#include "coalition/errors.h"

namespace coalition {

bool guards_overridden() {
  const char* v = std::getenv("COALITION_GUARD_OVERRIDE");
  return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

void enforce_guard(bool exceeded, const std::string& what) {
  if (exceeded && !guards_overridden()) {
    throw ResourceLimitError(what + " (set COALITION_GUARD_OVERRIDE=1 to lift)");
  }
}

Coalition Coalition::from_members(std::span<const ParticipantId> members) {
  Mask mask = 0;
  for (ParticipantId i : members) {
    if (i < 0 || i >= kMaxParticipants) {
      throw ArgumentError("participant id " + std::to_string(i) + " out of range");
    }
    mask |= bit(i);
  }
  return from_mask(mask);
}

std::vector<ParticipantId> Coalition::members() const {
  std::vector<ParticipantId> out;
  out.reserve(size());
  for_each([&](ParticipantId i) { out.push_back(i); });
  return out;
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](ParticipantId i) {
    if (!first) os << ',';
    os << i;
    first = false;
  });
  os << '}';
  return os.str();
}

bool lex_less(Coalition a, Coalition b) {
  const Mask diff = a.mask() ^ b.mask();
  if (diff == 0) return false;
  const int x = countr_zero(diff);
  // Bits strictly above x.
  const Mask above = x == kMaxParticipants - 1 ? 0 : ~((Mask{2} << x) - 1);
  if (a.contains(x)) {
    // a's next element is x; b continues with something larger or ends.
    return (b.mask() & above) != 0;
  }
  return (a.mask() & above) == 0;
}

CoalitionStructure::CoalitionStructure(std::vector<Coalition> coalitions)
    : coalitions_(std::move(coalitions)) {
  std::sort(coalitions_.begin(), coalitions_.end(), [](Coalition a, Coalition b) {
    if (a.empty() || b.empty()) return a.empty() && !b.empty();
    return a.lowest() < b.lowest();
  });
}

Coalition CoalitionStructure::covered() const {
  Coalition all;
  for (Coalition g : coalitions_) all = all | g;
  return all;
}

Coalition CoalitionStructure::coalition_of(ParticipantId i) const {
  for (Coalition g : coalitions_) {
    if (g.contains(i)) return g;
  }
  throw ArgumentError("participant " + std::to_string(i) + " is not covered by " + to_string());
}

void CoalitionStructure::validate(int n, int k) const {
  if (n < 1 || n > kMaxParticipants) {
    throw ValidationError("participant count " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxParticipants) + "]");
  }
  Mask seen = 0;
  for (Coalition g : coalitions_) {
    if (g.empty()) throw ValidationError("empty coalition in " + to_string());
    if (g.size() > k) {
      throw ValidationError("coalition " + g.to_string() + " exceeds capacity " + std::to_string(k));
    }
    if ((seen & g.mask()) != 0) {
      throw ValidationError("coalitions overlap in " + to_string());
    }
    seen |= g.mask();
  }
  if (seen != Coalition::all(n).mask()) {
    throw ValidationError("structure " + to_string() + " does not cover all " + std::to_string(n) +
                          " participants");
  }
}

std::string CoalitionStructure::to_string() const {
  std::string out = "{";
  for (std::size_t j = 0; j < coalitions_.size(); ++j) {
    if (j > 0) out += ',';
    out += coalitions_[j].to_string();
  }
  return out + "}";
}

std::size_t CoalitionStructureHash::operator()(const CoalitionStructure& p) const {
  std::size_t h = 1469598103934665603ULL;
  for (Coalition g : p) {
    h ^= CoalitionHash{}(g) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

CoalitionStructure default_structure(int n) {
  if (n < 1) throw ArgumentError("default structure needs at least one participant");
  if (n > kMaxParticipants) {
    throw ArgumentError("at most " + std::to_string(kMaxParticipants) + " participants are supported");
  }
  std::vector<Coalition> singles;
  singles.reserve(n);
  for (ParticipantId i = 0; i < n; ++i) singles.push_back(Coalition::singleton(i));
  return CoalitionStructure(std::move(singles));
}

bool for_each_subset_up_to(Coalition pool, int max_size, const std::function<bool(Coalition)>& fn) {
  const std::vector<ParticipantId> items = pool.members();
  const int m = static_cast<int>(items.size());
  max_size = std::min(max_size, m);
  std::vector<int> idx;
  for (int size = 1; size <= max_size; ++size) {
    idx.resize(size);
    for (int j = 0; j < size; ++j) idx[j] = j;
    while (true) {
      Mask mask = 0;
      for (int j : idx) mask |= bit(items[j]);
      if (!fn(Coalition::from_mask(mask))) return false;
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == m - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return true;
}

std::uint64_t count_subsets_up_to(int n, int k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (int s = 1; s <= std::min(n, k); ++s) {
    binom = binom * static_cast<std::uint64_t>(n - s + 1) / static_cast<std::uint64_t>(s);
    total += binom;
  }
  return total;
}

double harmonic(int k) {
  double h = 0.0;
  for (int s = 1; s <= k; ++s) h += 1.0 / s;
  return h;
}

}  // namespace coalition
