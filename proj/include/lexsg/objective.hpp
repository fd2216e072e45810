// Copyright 2026 The lexsg Authors
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

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/rational.hpp"

namespace lexsg {

enum class ObjectiveKind { Reach, Safe };

inline std::string_view to_string(ObjectiveKind k) {
  return k == ObjectiveKind::Reach ? "reach" : "safe";
}

inline ObjectiveKind flip(ObjectiveKind k) {
  return k == ObjectiveKind::Reach ? ObjectiveKind::Safe
                                   : ObjectiveKind::Reach;
}

// Largest supported number of objectives; stage keys are 16-bit masks.
inline constexpr std::size_t kMaxObjectives = 16;

struct Objective {
  ObjectiveKind kind;
  std::vector<StateIndex> target;  // sorted, unique

  bool contains(StateIndex s) const {
    return std::binary_search(target.begin(), target.end(), s);
  }
  bool operator==(const Objective&) const = default;
};

// Ordered reachability/safety objectives, most important first.
class LexObjective {
 public:
  LexObjective() = default;
  explicit LexObjective(std::vector<Objective> entries)
      : entries_(std::move(entries)) {
    if (entries_.empty()) throw ModelError("lex-objective needs >= 1 entry");
    if (entries_.size() > kMaxObjectives)
      throw ModelError("at most 16 objectives are supported");
    for (auto& e : entries_) {
      std::sort(e.target.begin(), e.target.end());
      e.target.erase(std::unique(e.target.begin(), e.target.end()),
                     e.target.end());
    }
  }

  std::size_t size() const { return entries_.size(); }
  const Objective& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<Objective>& entries() const { return entries_; }

  void check_against(const StochasticGame& game) const {
    for (const auto& e : entries_)
      for (StateIndex s : e.target)
        if (s >= game.num_states())
          throw ModelError("objective target outside the state space");
  }

  // Every target state, across all entries.
  std::vector<bool> target_union(std::size_t num_states) const {
    std::vector<bool> u(num_states);
    for (const auto& e : entries_)
      for (StateIndex s : e.target) u[s] = true;
    return u;
  }

  // Same targets, Reach and Safe exchanged.
  LexObjective flipped() const {
    auto copy = entries_;
    for (auto& e : copy) e.kind = flip(e.kind);
    return LexObjective(std::move(copy));
  }

  LexObjective prefix(std::size_t k) const {
    return LexObjective(
        std::vector<Objective>(entries_.begin(), entries_.begin() + k));
  }

  bool operator==(const LexObjective&) const = default;

 private:
  std::vector<Objective> entries_;
};

// Set of objective indices already removed, as a bitmask (bit i = index i).
struct StageKey {
  std::uint32_t removed = 0;

  bool contains(std::size_t i) const { return (removed >> i) & 1u; }
  StageKey with(std::size_t i) const {
    return StageKey{removed | (1u << i)};
  }
  StageKey merged(StageKey other) const {
    return StageKey{removed | other.removed};
  }
  std::size_t count() const {
    return static_cast<std::size_t>(std::popcount(removed));
  }
  bool is_full(std::size_t n) const { return count() == n; }

  auto operator<=>(const StageKey&) const = default;

  // 1-based, comma separated, "none" for the empty set.
  std::string to_string() const {
    if (removed == 0) return "none";
    std::string out;
    for (std::size_t i = 0; i < 32; ++i)
      if (contains(i)) {
        if (!out.empty()) out += ',';
        out += std::to_string(i + 1);
      }
    return out;
  }

  static StageKey parse(std::string_view text, std::size_t n) {
    StageKey key;
    if (text == "none") return key;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      std::string item(text.substr(pos, comma - pos));
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError(0, "bad stage index '" + item + "'");
      }
      if (idx < 1 || idx > n)
        throw ParseError(0, "stage index out of range: " + item);
      key = key.with(idx - 1);
      pos = comma + 1;
    }
    return key;
  }
};

inline bool is_absorbing(const LexObjective& obj, const StochasticGame& game) {
  auto sink = sinks(game);
  for (const auto& e : obj.entries())
    for (StateIndex s : e.target)
      if (!sink[s]) return false;
  return true;
}

inline StageKey stage_of_state(const LexObjective& obj, StateIndex s) {
  StageKey key;
  for (std::size_t i = 0; i < obj.size(); ++i)
    if (obj[i].contains(s)) key = key.with(i);
  return key;
}

// Objective with the entries listed in `key` deleted.
inline LexObjective stage_objective(const LexObjective& obj, StageKey key) {
  if (key.is_full(obj.size()))
    throw ModelError("stage removes every objective");
  std::vector<Objective> rest;
  for (std::size_t i = 0; i < obj.size(); ++i)
    if (!key.contains(i)) rest.push_back(obj[i]);
  return LexObjective(std::move(rest));
}

template <class V>
using LexVector = std::vector<V>;

template <class V>
std::strong_ordering lex_compare(const LexVector<V>& x, const LexVector<V>& y) {
  if (x.size() != y.size())
    throw ModelError("lex_compare: vectors of different length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto c = three_way(x[i], y[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// Comma-separated rationals or decimals, e.g. "1/2,0.25".
inline LexVector<Rational> parse_lex_vector(std::string_view text) {
  LexVector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    auto r = try_parse_rational(item);
    if (!r) throw ParseError(0, "bad vector component '" + std::string(item) + "'");
    if (*r < 0 || *r > 1)
      throw ParseError(0, "vector component outside [0,1]: " + std::string(item));
    out.push_back(*r);
    pos = comma + 1;
  }
  return out;
}

template <class V>
std::string format_lex_vector(const LexVector<V>& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += to_string(x[i]);
  }
  return out + ")";
}

// Reachability or safety with weighted targets. The domain states are
// absorbing for the purpose of the objective: play stops at the first
// domain state t and collects weight(t). For Safe, the weight is the
// penalty and the value is one minus the weighted reach probability.
template <class V>
struct QuantifiedObjective {
  ObjectiveKind kind = ObjectiveKind::Reach;
  std::vector<std::optional<V>> weights;  // one per state; nullopt = outside

  bool in_domain(StateIndex s) const { return weights[s].has_value(); }
  const V& weight(StateIndex s) const { return *weights[s]; }

  std::size_t num_states() const { return weights.size(); }

  // Boolean objective as the special case q == 1 on the target.
  static QuantifiedObjective from_target(ObjectiveKind kind,
                                         const std::vector<StateIndex>& target,
                                         std::size_t num_states) {
    QuantifiedObjective q;
    q.kind = kind;
    q.weights.assign(num_states, std::nullopt);
    for (StateIndex s : target) q.weights.at(s) = V(1);
    return q;
  }

  static QuantifiedObjective from_objective(const Objective& o,
                                            std::size_t num_states) {
    return from_target(o.kind, o.target, num_states);
  }

  void validate() const {
    for (const auto& w : weights)
      if (w && (*w < 0 || *w > 1))
        throw ModelError("quantified objective weight outside [0,1]");
  }
};

// Quantified objectives sharing one domain.
template <class V>
struct QuantifiedLexObjective {
  std::vector<QuantifiedObjective<V>> entries;

  std::size_t size() const { return entries.size(); }
  const QuantifiedObjective<V>& operator[](std::size_t i) const {
    return entries.at(i);
  }

  std::vector<bool> domain() const {
    if (entries.empty()) return {};
    std::vector<bool> d(entries.front().num_states());
    for (StateIndex s = 0; s < d.size(); ++s)
      d[s] = entries.front().in_domain(s);
    return d;
  }

  void validate() const {
    if (entries.empty()) throw ModelError("empty quantified lex-objective");
    auto d = domain();
    for (const auto& e : entries) {
      e.validate();
      if (e.num_states() != d.size())
        throw ModelError("quantified objectives of different sizes");
      for (StateIndex s = 0; s < d.size(); ++s)
        if (e.in_domain(s) != d[s])
          throw ModelError("quantified objectives must share one domain");
    }
  }

  // Boolean lex-objective with common domain = union of targets; a target
  // of entry j that is not in S_i gets weight 0 for entry i.
  static QuantifiedLexObjective from_lex(const LexObjective& obj,
                                         std::size_t num_states) {
    auto u = obj.target_union(num_states);
    QuantifiedLexObjective q;
    for (const auto& e : obj.entries()) {
      QuantifiedObjective<V> qe;
      qe.kind = e.kind;
      qe.weights.assign(num_states, std::nullopt);
      for (StateIndex s = 0; s < num_states; ++s)
        if (u[s]) qe.weights[s] = e.contains(s) ? V(1) : V(0);
      q.entries.push_back(std::move(qe));
    }
    return q;
  }
};

}  // namespace lexsg
