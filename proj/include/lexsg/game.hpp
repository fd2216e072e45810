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
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexsg/rational.hpp"

namespace lexsg {

enum class Player { Max, Min };

inline Player opponent(Player p) {
  return p == Player::Max ? Player::Min : Player::Max;
}

inline std::string_view to_string(Player p) {
  return p == Player::Max ? "max" : "min";
}

using StateIndex = std::size_t;

// Label given to the self-loop of states declared without actions and of
// states turned into sinks.
inline constexpr std::string_view kSelfLoopLabel = "self";

struct Transition {
  StateIndex target;
  Rational probability;
  bool operator==(const Transition&) const = default;
};

struct Action {
  std::string label;
  std::vector<Transition> distribution;
  bool operator==(const Action&) const = default;
};

struct State {
  std::string name;
  Player owner;
  std::vector<Action> actions;
  bool operator==(const State&) const = default;
};

class GameBuilder;

// Explicit-state turn-based stochastic game. Immutable once built; all
// transforms return new games.
class StochasticGame {
 public:
  std::size_t num_states() const { return states_.size(); }
  const State& state(StateIndex s) const { return states_.at(s); }
  const std::vector<State>& states() const { return states_; }
  Player owner(StateIndex s) const { return states_[s].owner; }
  const std::vector<Action>& actions(StateIndex s) const {
    return states_[s].actions;
  }
  const std::string& name(StateIndex s) const { return states_[s].name; }
  std::optional<StateIndex> initial() const { return initial_; }

  std::optional<StateIndex> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  StateIndex index_of(std::string_view name) const {
    auto s = find(name);
    if (!s) throw ModelError("unknown state '" + std::string(name) + "'");
    return *s;
  }

  std::optional<std::size_t> action_index(StateIndex s,
                                          std::string_view label) const {
    const auto& acts = states_[s].actions;
    for (std::size_t a = 0; a < acts.size(); ++a)
      if (acts[a].label == label) return a;
    return std::nullopt;
  }

  std::size_t num_actions() const {
    std::size_t total = 0;
    for (const auto& st : states_) total += st.actions.size();
    return total;
  }

  double average_actions() const {
    return states_.empty() ? 0.0
                           : static_cast<double>(num_actions()) /
                                 static_cast<double>(states_.size());
  }

  // Structural equality: names, owners, action order, labels,
  // distributions and initial state.
  bool operator==(const StochasticGame& other) const {
    return states_ == other.states_ && initial_ == other.initial_;
  }

 private:
  friend class GameBuilder;
  std::vector<State> states_;
  std::unordered_map<std::string, StateIndex> index_;
  std::optional<StateIndex> initial_;
};

// Collects states and actions, then validates on build(). States declared
// without actions get a single self-loop labelled "self".
class GameBuilder {
 public:
  StateIndex add_state(std::string name, Player owner) {
    if (name.empty()) throw ModelError("empty state name");
    for (char c : name)
      if (std::isspace(static_cast<unsigned char>(c)))
        throw ModelError("state name '" + name + "' contains whitespace");
    if (game_.index_.count(name))
      throw ModelError("duplicate state '" + name + "'");
    StateIndex s = game_.states_.size();
    game_.index_.emplace(name, s);
    game_.states_.push_back(State{std::move(name), owner, {}});
    return s;
  }

  void add_action(StateIndex s, std::string label,
                  std::vector<Transition> distribution) {
    if (s >= game_.states_.size()) throw ModelError("unknown state index");
    auto& st = game_.states_[s];
    if (label.empty()) throw ModelError("empty action label at " + st.name);
    for (const auto& a : st.actions)
      if (a.label == label)
        throw ModelError("duplicate action '" + label + "' at state " +
                         st.name);
    st.actions.push_back(Action{std::move(label), std::move(distribution)});
  }

  void set_initial(StateIndex s) { game_.initial_ = s; }

  std::size_t num_states() const { return game_.states_.size(); }
  std::optional<StateIndex> find(std::string_view name) const {
    return game_.find(name);
  }

  StochasticGame build() && {
    if (game_.states_.empty()) throw ModelError("game has no states");
    const std::size_t n = game_.states_.size();
    for (StateIndex s = 0; s < n; ++s) {
      auto& st = game_.states_[s];
      if (st.actions.empty())
        st.actions.push_back(
            Action{std::string(kSelfLoopLabel), {Transition{s, Rational(1)}}});
      for (const auto& a : st.actions) {
        Rational sum = 0;
        std::vector<StateIndex> seen;
        for (const auto& t : a.distribution) {
          if (t.target >= n)
            throw ModelError("action '" + a.label + "' at " + st.name +
                             " has an unknown successor");
          if (t.probability <= 0 || t.probability > 1)
            throw ModelError("action '" + a.label + "' at " + st.name +
                             " has a probability outside (0,1]");
          seen.push_back(t.target);
          sum += t.probability;
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
          throw ModelError("action '" + a.label + "' at " + st.name +
                           " lists a successor twice");
        if (sum != 1)
          throw ModelError("probability sum != 1 (" + sum.get_str() +
                           ") for action '" + a.label + "' at " + st.name);
      }
    }
    if (game_.initial_ && *game_.initial_ >= n)
      throw ModelError("initial state out of range");
    return std::move(game_);
  }

 private:
  StochasticGame game_;
};

// Per-state subset of action indices (kept actions), in declaration order.
struct ActionFilter {
  std::vector<std::vector<bool>> keep;

  static ActionFilter all(const StochasticGame& game) {
    ActionFilter f;
    f.keep.resize(game.num_states());
    for (StateIndex s = 0; s < game.num_states(); ++s)
      f.keep[s].assign(game.actions(s).size(), true);
    return f;
  }

  bool kept(StateIndex s, std::size_t a) const { return keep[s][a]; }

  bool operator==(const ActionFilter&) const = default;
};

inline bool is_sink(const StochasticGame& game, StateIndex s) {
  for (const auto& a : game.actions(s)) {
    bool loops = a.distribution.size() == 1 &&
                 a.distribution.front().target == s;
    if (!loops) return false;
  }
  return true;
}

inline std::vector<bool> sinks(const StochasticGame& game) {
  std::vector<bool> result(game.num_states());
  for (StateIndex s = 0; s < game.num_states(); ++s)
    result[s] = is_sink(game, s);
  return result;
}

namespace detail {

inline GameBuilder skeleton(const StochasticGame& game) {
  GameBuilder b;
  for (const auto& st : game.states()) b.add_state(st.name, st.owner);
  if (game.initial()) b.set_initial(*game.initial());
  return b;
}

}  // namespace detail

// Keeps only the filtered actions. State set, owners and the relative
// order of surviving actions are preserved.
inline StochasticGame restrict(const StochasticGame& game,
                               const ActionFilter& filter) {
  if (filter.keep.size() != game.num_states())
    throw ModelError("action filter does not match the game");
  GameBuilder b = detail::skeleton(game);
  for (StateIndex s = 0; s < game.num_states(); ++s) {
    const auto& acts = game.actions(s);
    if (filter.keep[s].size() != acts.size())
      throw ModelError("action filter does not match state " + game.name(s));
    bool any = false;
    for (std::size_t a = 0; a < acts.size(); ++a) {
      if (!filter.keep[s][a]) continue;
      any = true;
      b.add_action(s, acts[a].label, acts[a].distribution);
    }
    if (!any)
      throw ModelError("action filter empties state " + game.name(s));
  }
  return std::move(b).build();
}

// Replaces the actions of every state in `cut` by a single self-loop.
inline StochasticGame make_absorbing(const StochasticGame& game,
                                     const std::vector<bool>& cut) {
  GameBuilder b = detail::skeleton(game);
  for (StateIndex s = 0; s < game.num_states(); ++s) {
    if (s < cut.size() && cut[s]) continue;  // build() adds the self-loop
    for (const auto& a : game.actions(s))
      b.add_action(s, a.label, a.distribution);
  }
  return std::move(b).build();
}

// Same arena with Max and Min exchanged.
inline StochasticGame swap_owners(const StochasticGame& game) {
  GameBuilder b;
  for (const auto& st : game.states()) b.add_state(st.name, opponent(st.owner));
  if (game.initial()) b.set_initial(*game.initial());
  for (StateIndex s = 0; s < game.num_states(); ++s)
    for (const auto& a : game.actions(s))
      b.add_action(s, a.label, a.distribution);
  return std::move(b).build();
}

// Transition structure with probabilities in the solver's value type.
template <class V>
struct Arena {
  struct Edge {
    StateIndex target;
    V probability;
  };
  std::vector<std::vector<std::vector<Edge>>> actions;  // [state][action]

  explicit Arena(const StochasticGame& game) {
    actions.resize(game.num_states());
    for (StateIndex s = 0; s < game.num_states(); ++s)
      for (const auto& a : game.actions(s)) {
        auto& edges = actions[s].emplace_back();
        for (const auto& t : a.distribution)
          edges.push_back({t.target, from_rational<V>(t.probability)});
      }
  }

  std::size_t num_states() const { return actions.size(); }
};

}  // namespace lexsg
