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

#ifndef COALITION_CORE_H_
#define COALITION_CORE_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace coalition {

// Participants are dense indices in [0, n).
using ParticipantId = int;

// Money is binary floating point. Infeasible coalitions cost kInfinity.
using Money = double;

inline constexpr Money kInfinity = std::numeric_limits<Money>::infinity();

// Shared comparison tolerance for strict inequalities between payments.
inline constexpr double kEps = 1e-9;

// Bitmask representation caps the participant count.
inline constexpr int kMaxParticipants = 128;

// Coalition bitmask; bit i is participant i.
using Mask = unsigned __int128;

inline constexpr Mask bit(ParticipantId i) { return Mask{1} << i; }

inline constexpr int popcount(Mask m) {
  return std::popcount(static_cast<std::uint64_t>(m)) + std::popcount(static_cast<std::uint64_t>(m >> 64));
}

// Index of the lowest set bit; undefined for m == 0.
inline constexpr int countr_zero(Mask m) {
  const auto lo = static_cast<std::uint64_t>(m);
  return lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<std::uint64_t>(m >> 64));
}

// Index of the highest set bit; undefined for m == 0.
inline constexpr int highest_bit(Mask m) {
  const auto hi = static_cast<std::uint64_t>(m >> 64);
  return hi != 0 ? 127 - std::countl_zero(hi) : 63 - std::countl_zero(static_cast<std::uint64_t>(m));
}

inline bool is_feasible_cost(Money c) { return c < kInfinity; }

// A set of participants, stored as a bitmask. The canonical I/O form is the
// ascending member list.
class Coalition {
 public:
  constexpr Coalition() = default;

  static constexpr Coalition from_mask(Mask mask) {
    Coalition c;
    c.mask_ = mask;
    return c;
  }
  static Coalition from_members(std::span<const ParticipantId> members);
  static Coalition from_members(std::initializer_list<ParticipantId> members) {
    return from_members(std::span<const ParticipantId>(members.begin(), members.size()));
  }
  static constexpr Coalition singleton(ParticipantId i) {
    return from_mask(bit(i));
  }
  // {0, 1, ..., n-1}
  static constexpr Coalition all(int n) {
    return from_mask(n >= kMaxParticipants ? ~Mask{0} : bit(n) - 1);
  }

  constexpr Mask mask() const { return mask_; }
  // The mask as a 64-bit word; only meaningful when every member is below 64.
  constexpr std::uint64_t word() const { return static_cast<std::uint64_t>(mask_); }
  constexpr int size() const { return popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(ParticipantId i) const { return (mask_ >> i) & 1U; }
  constexpr bool is_subset_of(Coalition other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool intersects(Coalition other) const { return (mask_ & other.mask_) != 0; }
  // Smallest member; undefined on the empty coalition.
  constexpr ParticipantId lowest() const { return countr_zero(mask_); }
  constexpr ParticipantId highest() const { return highest_bit(mask_); }

  std::vector<ParticipantId> members() const;
  // Position of `i` in the ascending member list.
  int rank_of(ParticipantId i) const {
    return popcount(mask_ & (bit(i) - 1));
  }

  constexpr Coalition with(ParticipantId i) const { return from_mask(mask_ | bit(i)); }
  constexpr Coalition without(ParticipantId i) const { return from_mask(mask_ & ~bit(i)); }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return from_mask(a.mask_ | b.mask_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return from_mask(a.mask_ & b.mask_); }
  friend constexpr Coalition operator-(Coalition a, Coalition b) { return from_mask(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(Coalition a, Coalition b) = default;

  std::string to_string() const;

  // Calls fn(i) for every member in ascending order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (Mask m = mask_; m != 0; m &= m - 1) fn(static_cast<ParticipantId>(countr_zero(m)));
  }

 private:
  Mask mask_ = 0;
};

struct CoalitionHash {
  std::size_t operator()(Coalition g) const {
    const auto lo = static_cast<std::uint64_t>(g.mask());
    const auto hi = static_cast<std::uint64_t>(g.mask() >> 64);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL + (lo << 6) + (lo >> 2)));
  }
};

// Lexicographic order of the ascending member lists, e.g. {0,1} < {0,1,2} < {0,2}.
bool lex_less(Coalition a, Coalition b);

// Size first, then lexicographic.
inline bool size_lex_less(Coalition a, Coalition b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return lex_less(a, b);
}

// A partition of {0..n-1} into coalitions. Coalitions are kept sorted by their
// lowest member, which makes the representation canonical.
class CoalitionStructure {
 public:
  CoalitionStructure() = default;
  explicit CoalitionStructure(std::vector<Coalition> coalitions);

  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  std::size_t size() const { return coalitions_.size(); }
  auto begin() const { return coalitions_.begin(); }
  auto end() const { return coalitions_.end(); }

  Coalition covered() const;
  // The coalition containing i; throws ArgumentError if none does.
  Coalition coalition_of(ParticipantId i) const;

  // Throws ValidationError unless this is a partition of {0..n-1} with every
  // coalition of size at most k.
  void validate(int n, int k) const;

  // Canonical encoding: the coalition masks in order.
  const std::vector<Coalition>& canonical() const { return coalitions_; }
  std::string to_string() const;

  friend bool operator==(const CoalitionStructure& a, const CoalitionStructure& b) = default;

 private:
  std::vector<Coalition> coalitions_;
};

struct CoalitionStructureHash {
  std::size_t operator()(const CoalitionStructure& p) const;
};

// {{0},{1},...,{n-1}}. Throws ArgumentError when n < 1.
CoalitionStructure default_structure(int n);

// Calls fn(coalition) for every subset of `pool` of size 1..max_size, grouped
// by size and in lexicographic order within a size. Returning false from fn
// stops the enumeration; the function then returns false.
bool for_each_subset_up_to(Coalition pool, int max_size, const std::function<bool(Coalition)>& fn);

// Number of subsets of an n-set with size in [1, k].
std::uint64_t count_subsets_up_to(int n, int k);

// Harmonic number 1 + 1/2 + ... + 1/k.
double harmonic(int k);

}  // namespace coalition

#endif  // COALITION_CORE_H_
