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

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lexsg/format.hpp"
#include "lexsg/game.hpp"
#include "lexsg/objective.hpp"

namespace lexsg {

// Memoryless deterministic strategy: one action label per state of `player`.
struct MDStrategy {
  Player player = Player::Max;
  std::vector<std::string> choice;  // empty string on the other player's states

  static MDStrategy first_actions(const StochasticGame& game, Player player) {
    MDStrategy m{player, std::vector<std::string>(game.num_states())};
    for (StateIndex s = 0; s < game.num_states(); ++s)
      if (game.owner(s) == player) m.choice[s] = game.actions(s).front().label;
    return m;
  }

  static MDStrategy from_indices(const StochasticGame& game, Player player,
                                 const std::vector<std::size_t>& action) {
    MDStrategy m{player, std::vector<std::string>(game.num_states())};
    for (StateIndex s = 0; s < game.num_states(); ++s)
      if (game.owner(s) == player) m.choice[s] = game.actions(s)[action[s]].label;
    return m;
  }

  // Action index at `s` in `game`; throws if the label is not available.
  std::size_t action_at(const StochasticGame& game, StateIndex s) const {
    if (s >= choice.size() || choice[s].empty())
      throw ModelError("strategy has no choice at state " + game.name(s));
    auto a = game.action_index(s, choice[s]);
    if (!a)
      throw ModelError("strategy picks unknown action '" + choice[s] +
                       "' at state " + game.name(s));
    return *a;
  }

  std::vector<std::size_t> indices(const StochasticGame& game) const {
    std::vector<std::size_t> out(game.num_states(), 0);
    for (StateIndex s = 0; s < game.num_states(); ++s)
      if (game.owner(s) == player) out[s] = action_at(game, s);
    return out;
  }

  void validate(const StochasticGame& game) const {
    if (choice.size() != game.num_states())
      throw ModelError("strategy does not match the game");
    for (StateIndex s = 0; s < game.num_states(); ++s)
      if (game.owner(s) == player) action_at(game, s);
  }

  bool operator==(const MDStrategy&) const = default;
};

// Finite-memory strategy whose memory is the set of objective indices whose
// targets have been visited. Memory is updated on entering a state,
// including the initial one, then the table entry for the new memory picks
// the action. The all-visited memory needs no entry.
struct StagedStrategy {
  Player player = Player::Max;
  LexObjective objective;
  std::map<StageKey, MDStrategy> table;

  const MDStrategy& at(StageKey key) const {
    auto it = table.find(key);
    if (it == table.end())
      throw ModelError("strategy has no entry for stage " + key.to_string());
    return it->second;
  }

  bool has(StageKey key) const { return table.count(key) > 0; }
};

// Strategy export: "stage <indices|none> <state> <label>" lines followed by
// optional "value <state> <v1> ... <vn>" lines.
struct StrategyFile {
  StagedStrategy strategy;
  std::map<StateIndex, std::vector<Rational>> claimed;
};

inline std::string write_strategy(
    const StochasticGame& game, const StagedStrategy& strategy,
    const std::vector<std::vector<std::string>>* values = nullptr) {
  std::ostringstream out;
  for (const auto& [key, md] : strategy.table)
    for (StateIndex s = 0; s < game.num_states(); ++s)
      if (game.owner(s) == strategy.player && !md.choice[s].empty())
        out << "stage " << key.to_string() << ' ' << game.name(s) << ' '
            << md.choice[s] << '\n';
  if (values)
    for (StateIndex s = 0; s < game.num_states(); ++s) {
      out << "value " << game.name(s);
      for (const auto& v : (*values)[s]) out << ' ' << v;
      out << '\n';
    }
  return out.str();
}

inline StrategyFile read_strategy(std::string_view text,
                                  const StochasticGame& game,
                                  const LexObjective& objective) {
  StrategyFile file;
  file.strategy.objective = objective;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    auto w = detail::split_words(raw);
    if (w.empty()) continue;
    auto state = [&](const std::string& name) {
      auto s = game.find(name);
      if (!s) throw ParseError(number, "unknown state '" + name + "'");
      return *s;
    };
    if (w[0] == "stage") {
      if (w.size() != 4)
        throw ParseError(number, "expected 'stage <indices|none> <state> <action>'");
      StageKey key;
      try {
        key = StageKey::parse(w[1], objective.size());
      } catch (const ParseError& e) {
        throw ParseError(number, e.what());
      }
      StateIndex s = state(w[2]);
      if (game.owner(s) != Player::Max)
        throw ParseError(number, "state '" + w[2] + "' is not a Max state");
      if (!game.action_index(s, w[3]))
        throw ParseError(number, "unknown action '" + w[3] + "' at " + w[2]);
      auto [it, fresh] = file.strategy.table.try_emplace(
          key, MDStrategy{Player::Max, std::vector<std::string>(game.num_states())});
      if (!it->second.choice[s].empty())
        throw ParseError(number, "duplicate choice for " + w[2]);
      it->second.choice[s] = w[3];
    } else if (w[0] == "value") {
      if (w.size() != 2 + objective.size())
        throw ParseError(number, "expected " + std::to_string(objective.size()) +
                                     " values");
      StateIndex s = state(w[1]);
      std::vector<Rational> v;
      for (std::size_t j = 2; j < w.size(); ++j) {
        auto r = try_parse_rational(w[j]);
        if (!r) throw ParseError(number, "bad value '" + w[j] + "'");
        v.push_back(*r);
      }
      file.claimed[s] = std::move(v);
    } else {
      throw ParseError(number, "unknown keyword '" + w[0] + "'");
    }
  }
  return file;
}

}  // namespace lexsg
