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

// Graph-only analyses: positive attractors and almost-sure reachability.

#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/objective.hpp"
#include "lexsg/strategy.hpp"

namespace lexsg {

namespace detail {

// Per-state action masks; empty outer vector means every action.
using ActionMask = std::vector<std::vector<bool>>;

// Least X containing `seed` and closed under: a `reacher` state with some
// allowed action hitting X, an opponent state whose allowed actions all hit
// X. States in `blocked` never join unless seeded. When `witness` is given,
// it receives for each joined reacher state an action that hits X earlier.
inline std::vector<bool> positive_attractor(
    const StochasticGame& game, const std::vector<bool>& seed,
    const std::vector<bool>& blocked, Player reacher,
    const ActionMask& allowed = {},
    std::vector<std::size_t>* witness = nullptr) {
  const std::size_t n = game.num_states();
  auto ok = [&](StateIndex s, std::size_t a) {
    return allowed.empty() || allowed[s][a];
  };
  struct Pred {
    StateIndex state;
    std::size_t action;
  };
  std::vector<std::vector<Pred>> preds(n);
  std::vector<std::size_t> pending(n, 0);  // allowed actions not yet hitting X
  for (StateIndex s = 0; s < n; ++s)
    for (std::size_t a = 0; a < game.actions(s).size(); ++a) {
      if (!ok(s, a)) continue;
      ++pending[s];
      for (const auto& t : game.actions(s)[a].distribution)
        preds[t.target].push_back({s, a});
    }
  std::vector<bool> in(n, false);
  std::vector<std::vector<bool>> hit(n);
  for (StateIndex s = 0; s < n; ++s) hit[s].assign(game.actions(s).size(), false);
  std::deque<StateIndex> queue;
  for (StateIndex s = 0; s < n; ++s)
    if (seed[s]) {
      in[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateIndex t = queue.front();
    queue.pop_front();
    for (const auto& [s, a] : preds[t]) {
      if (in[s] || hit[s][a] || blocked[s]) continue;
      hit[s][a] = true;
      bool join = false;
      if (game.owner(s) == reacher) {
        join = true;
        if (witness) (*witness)[s] = a;
      } else {
        join = --pending[s] == 0;
      }
      if (join) {
        in[s] = true;
        queue.push_back(s);
      }
    }
  }
  return in;
}

template <class V>
std::vector<bool> positive_core(const StochasticGame& game,
                                const QuantifiedObjective<V>& q, Player reacher,
                                const ActionMask& allowed = {},
                                std::vector<std::size_t>* witness = nullptr) {
  const std::size_t n = game.num_states();
  if (q.num_states() != n)
    throw ModelError("quantified objective does not match the game");
  std::vector<bool> seed(n), blocked(n);
  for (StateIndex s = 0; s < n; ++s) {
    if (!q.in_domain(s)) continue;
    blocked[s] = true;
    seed[s] = q.weight(s) > 0;
  }
  return positive_attractor(game, seed, blocked, reacher, allowed, witness);
}

// States from which `reacher` hits a weight-1 domain state with
// probability one against every opponent strategy. The witness keeps the
// play inside the set while moving toward those states.
template <class V>
std::vector<bool> almost_sure_core(const StochasticGame& game,
                                   const QuantifiedObjective<V>& q,
                                   Player reacher,
                                   std::vector<std::size_t>* witness = nullptr) {
  const std::size_t n = game.num_states();
  std::vector<bool> seed(n, false), w(n, true);
  for (StateIndex s = 0; s < n; ++s) {
    if (!q.in_domain(s)) continue;
    seed[s] = q.weight(s) == 1;
    w[s] = seed[s];
  }
  for (;;) {
    ActionMask allowed(n);
    std::vector<bool> blocked(n, false);
    for (StateIndex s = 0; s < n; ++s) {
      const auto& acts = game.actions(s);
      allowed[s].assign(acts.size(), false);
      if (!w[s] || q.in_domain(s)) {
        blocked[s] = true;
        continue;
      }
      for (std::size_t a = 0; a < acts.size(); ++a) {
        bool inside = true;
        for (const auto& t : acts[a].distribution) inside = inside && w[t.target];
        allowed[s][a] = inside;
        if (!inside && game.owner(s) != reacher) blocked[s] = true;
      }
    }
    std::vector<std::size_t> wit(n, SIZE_MAX);
    auto next = positive_attractor(game, seed, blocked, reacher, allowed, &wit);
    if (next == w) {
      if (witness) *witness = std::move(wit);
      return w;
    }
    w = std::move(next);
  }
}

}  // namespace detail

// States from which Max reaches a positively weighted domain state with
// positive probability against every Min strategy. Domain states are
// treated as absorbing.
template <class V>
std::vector<bool> positive_states(const StochasticGame& game,
                                  const QuantifiedObjective<V>& q) {
  return detail::positive_core(game, q, Player::Max);
}

// True iff, with Max fixed to `sigma`, every Min strategy reaches `target`
// with probability one from every state.
inline bool almost_sure_reach_under(const StochasticGame& game,
                                    const MDStrategy& sigma,
                                    const std::vector<bool>& target) {
  const std::size_t n = game.num_states();
  auto chosen = sigma.indices(game);
  // Largest Y outside the target that Min can keep the play in forever.
  std::vector<bool> y(n);
  for (StateIndex s = 0; s < n; ++s) y[s] = !target[s];
  auto stays = [&](const Action& a) {
    for (const auto& t : a.distribution)
      if (!y[t.target]) return false;
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (StateIndex s = 0; s < n; ++s) {
      if (!y[s]) continue;
      bool keep = false;
      if (game.owner(s) == Player::Max) {
        keep = stays(game.actions(s)[chosen[s]]);
      } else {
        for (const auto& a : game.actions(s))
          if (stays(a)) keep = true;
      }
      if (!keep) {
        y[s] = false;
        changed = true;
      }
    }
  }
  for (StateIndex s = 0; s < n; ++s)
    if (y[s]) return false;
  return true;
}

}  // namespace lexsg
