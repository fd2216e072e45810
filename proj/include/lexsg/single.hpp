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

// Single-objective solving of (quantified) reachability and safety.
//
// The value type selects the method: double runs value iteration,
// Rational runs exact strategy iteration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/linear.hpp"
#include "lexsg/objective.hpp"
#include "lexsg/qualitative.hpp"
#include "lexsg/strategy.hpp"

namespace lexsg {

enum class Mode { Vi, Exact };

inline std::string_view to_string(Mode m) {
  return m == Mode::Vi ? "vi" : "exact";
}

struct SolverConfig {
  Mode mode = Mode::Vi;
  double vi_epsilon = 1e-8;
  double action_epsilon = 1e-6;
  std::uint64_t max_iterations = 10'000'000;

  void validate() const {
    if (!(vi_epsilon > 0 && vi_epsilon < action_epsilon && action_epsilon < 1))
      throw ModelError("need 0 < vi_epsilon < action_epsilon < 1");
    if (max_iterations == 0) throw ModelError("max_iterations must be positive");
  }
};

template <class V>
struct ValueAssignment {
  std::vector<V> values;

  std::size_t size() const { return values.size(); }
  const V& operator[](StateIndex s) const { return values[s]; }
  V& operator[](StateIndex s) { return values[s]; }
};

template <class V>
struct SingleResult {
  ValueAssignment<V> value;
  MDStrategy max_strategy;
  MDStrategy min_strategy;
  std::uint64_t iterations = 0;
};

namespace detail {

template <class V>
V action_value(const typename Arena<V>::Edge* begin,
               const typename Arena<V>::Edge* end, const std::vector<V>& x) {
  V sum = 0;
  for (auto e = begin; e != end; ++e) sum += e->probability * x[e->target];
  return sum;
}

template <class V>
V action_value(const std::vector<typename Arena<V>::Edge>& edges,
               const std::vector<V>& x) {
  return action_value<V>(edges.data(), edges.data() + edges.size(), x);
}

// Lowest-index action attaining the best value for `player`, where
// "best" is max for the reaching side. In VI mode ties are within `tol`.
template <class V>
std::size_t best_action(const Arena<V>& arena, StateIndex s,
                        const std::vector<V>& x, bool maximize, double tol) {
  const auto& acts = arena.actions[s];
  std::vector<V> vals;
  vals.reserve(acts.size());
  for (const auto& a : acts) vals.push_back(action_value<V>(a, x));
  V best = vals[0];
  for (const auto& v : vals)
    if (maximize ? best < v : v < best) best = v;
  for (std::size_t a = 0; a < vals.size(); ++a) {
    if constexpr (kExact<V>) {
      if (vals[a] == best) return a;
    } else {
      if (maximize ? vals[a] >= best - tol : vals[a] <= best + tol) return a;
    }
  }
  return 0;
}

template <class V>
struct ReachCore {
  std::vector<V> values;
  std::vector<std::size_t> reacher;   // action per state (reacher's states)
  std::vector<std::size_t> opponent;  // action per state (opponent's states)
  std::uint64_t iterations = 0;
};

// Value-iteration strategy for the reaching side: among near-optimal
// actions, one that moves toward the positive targets inside the subgame of
// near-optimal actions of both players.
inline std::vector<std::size_t> vi_reacher_strategy(
    const StochasticGame& game, const Arena<double>& arena,
    const QuantifiedObjective<double>& q, const std::vector<double>& x,
    Player reacher, double tol) {
  const std::size_t n = game.num_states();
  ActionMask mask(n);
  for (StateIndex s = 0; s < n; ++s) {
    const auto& acts = arena.actions[s];
    std::vector<double> vals;
    for (const auto& a : acts) vals.push_back(action_value<double>(a, x));
    bool maximize = game.owner(s) == reacher;
    double best = maximize ? *std::max_element(vals.begin(), vals.end())
                           : *std::min_element(vals.begin(), vals.end());
    mask[s].resize(acts.size());
    for (std::size_t a = 0; a < acts.size(); ++a)
      mask[s][a] = maximize ? vals[a] >= best - tol : vals[a] <= best + tol;
  }
  std::vector<std::size_t> witness(n, SIZE_MAX), sure;
  positive_core(game, q, reacher, mask, &witness);
  auto one = almost_sure_core(game, q, reacher, &sure);
  std::vector<std::size_t> out(n, 0);
  for (StateIndex s = 0; s < n; ++s) {
    if (game.owner(s) != reacher) continue;
    if (one[s] && sure[s] != SIZE_MAX)
      out[s] = sure[s];
    else
      out[s] = witness[s] != SIZE_MAX ? witness[s]
                                      : best_action(arena, s, x, true, tol);
  }
  return out;
}

inline ReachCore<double> reach_vi(const StochasticGame& game,
                                  const QuantifiedObjective<double>& q,
                                  Player reacher, const SolverConfig& cfg) {
  const std::size_t n = game.num_states();
  Arena<double> arena(game);
  auto pos = positive_core(game, q, reacher);
  auto one = almost_sure_core(game, q, reacher);
  std::vector<StateIndex> active;
  std::vector<double> x(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (q.in_domain(s))
      x[s] = q.weight(s);
    else if (one[s])
      x[s] = 1.0;
    else if (pos[s])
      active.push_back(s);
  }
  ReachCore<double> r;
  std::vector<double> next = x;
  for (;;) {
    if (r.iterations >= cfg.max_iterations)
      throw LimitError("value iteration exceeded max_iterations (" +
                       std::to_string(cfg.max_iterations) + ")");
    ++r.iterations;
    double delta = 0;
    for (StateIndex s : active) {
      bool maximize = game.owner(s) == reacher;
      double best = maximize ? 0.0 : 1.0;
      for (const auto& a : arena.actions[s]) {
        double v = action_value<double>(a, x);
        best = maximize ? std::max(best, v) : std::min(best, v);
      }
      delta = std::max(delta, std::abs(best - x[s]));
      next[s] = best;
    }
    x.swap(next);
    if (delta < cfg.vi_epsilon) break;
  }
  for (StateIndex s = 0; s < n; ++s) {
    if (!q.in_domain(s) && !pos[s]) x[s] = 0.0;
    x[s] = std::clamp(x[s], 0.0, 1.0);
  }
  r.reacher = vi_reacher_strategy(game, arena, q, x, reacher, cfg.action_epsilon);
  r.opponent.assign(n, 0);
  for (StateIndex s = 0; s < n; ++s)
    if (game.owner(s) != reacher)
      r.opponent[s] = best_action(arena, s, x, false, cfg.action_epsilon);
  r.values = std::move(x);
  return r;
}

// Exact reach probabilities of the chain fixed by `choice`, where states
// outside `live` are known to be zero and domain states carry their weight.
inline std::vector<Rational> chain_values(
    const StochasticGame& game, const Arena<Rational>& arena,
    const QuantifiedObjective<Rational>& q, const std::vector<bool>& live,
    const std::vector<std::size_t>& choice) {
  const std::size_t n = game.num_states();
  std::vector<Rational> x(n);
  std::vector<std::size_t> slot(n, SIZE_MAX);
  std::vector<StateIndex> unknown;
  for (StateIndex s = 0; s < n; ++s) {
    if (q.in_domain(s))
      x[s] = q.weight(s);
    else if (live[s]) {
      slot[s] = unknown.size();
      unknown.push_back(s);
    }
  }
  std::vector<SparseRow> p(unknown.size());
  std::vector<Rational> b(unknown.size());
  for (std::size_t i = 0; i < unknown.size(); ++i) {
    StateIndex s = unknown[i];
    for (const auto& e : arena.actions[s][choice[s]]) {
      if (slot[e.target] != SIZE_MAX)
        p[i].emplace_back(slot[e.target], e.probability);
      else
        b[i] += e.probability * x[e.target];
    }
  }
  auto sol = solve_fixed_point(p, std::move(b));
  for (std::size_t i = 0; i < unknown.size(); ++i) x[unknown[i]] = sol[i];
  return x;
}

inline ReachCore<Rational> reach_exact(const StochasticGame& game,
                                       const QuantifiedObjective<Rational>& q,
                                       Player reacher, const SolverConfig& cfg) {
  const std::size_t n = game.num_states();
  Arena<Rational> arena(game);
  ReachCore<Rational> r;
  std::vector<std::size_t> witness(n, SIZE_MAX);
  auto pos = positive_core(game, q, reacher, {}, &witness);

  std::vector<std::size_t> choice(n, 0);
  for (StateIndex s = 0; s < n; ++s)
    if (game.owner(s) == reacher && witness[s] != SIZE_MAX) choice[s] = witness[s];

  auto tick = [&] {
    if (++r.iterations > cfg.max_iterations)
      throw LimitError("strategy iteration exceeded max_iterations");
  };

  // Opponent best response to the reacher's current choices.
  auto respond = [&]() {
    ActionMask mask(n);
    for (StateIndex s = 0; s < n; ++s) {
      mask[s].assign(game.actions(s).size(), true);
      if (game.owner(s) == reacher)
        for (std::size_t a = 0; a < mask[s].size(); ++a) mask[s][a] = a == choice[s];
    }
    auto live = positive_core(game, q, reacher, mask);
    for (StateIndex s = 0; s < n; ++s) {
      if (game.owner(s) == reacher || q.in_domain(s)) continue;
      if (!live[s]) {
        // Some action avoids the live set entirely.
        for (std::size_t a = 0; a < arena.actions[s].size(); ++a) {
          bool avoids = true;
          for (const auto& e : arena.actions[s][a])
            if (live[e.target]) avoids = false;
          if (avoids) {
            choice[s] = a;
            break;
          }
        }
      }
    }
    for (;;) {
      tick();
      auto x = chain_values(game, arena, q, live, choice);
      bool improved = false;
      for (StateIndex s = 0; s < n; ++s) {
        if (game.owner(s) == reacher || q.in_domain(s) || !live[s]) continue;
        std::size_t a = best_action(arena, s, x, false, 0.0);
        if (action_value<Rational>(arena.actions[s][a], x) <
            action_value<Rational>(arena.actions[s][choice[s]], x)) {
          choice[s] = a;
          improved = true;
        }
      }
      if (!improved) return x;
    }
  };

  std::vector<Rational> x;
  for (;;) {
    x = respond();
    bool improved = false;
    for (StateIndex s = 0; s < n; ++s) {
      if (game.owner(s) != reacher || q.in_domain(s) || !pos[s]) continue;
      std::size_t a = best_action(arena, s, x, true, 0.0);
      if (action_value<Rational>(arena.actions[s][choice[s]], x) <
          action_value<Rational>(arena.actions[s][a], x)) {
        choice[s] = a;
        improved = true;
      }
    }
    if (!improved) break;
  }
  r.reacher.assign(n, 0);
  r.opponent.assign(n, 0);
  for (StateIndex s = 0; s < n; ++s) {
    if (game.owner(s) == reacher)
      r.reacher[s] = choice[s];
    else
      r.opponent[s] = best_action(arena, s, x, false, 0.0);
  }
  r.values = std::move(x);
  return r;
}

template <class V>
ReachCore<V> reach_core(const StochasticGame& game,
                        const QuantifiedObjective<V>& q, Player reacher,
                        const SolverConfig& cfg) {
  if (q.num_states() != game.num_states())
    throw ModelError("quantified objective does not match the game");
  q.validate();
  if constexpr (kExact<V>)
    return reach_exact(game, q, reacher, cfg);
  else
    return reach_vi(game, q, reacher, cfg);
}

}  // namespace detail

// sup over Max, inf over Min of the weighted first-hit probability of the
// domain of `q`. The kind field of `q` is not consulted.
template <class V>
SingleResult<V> solve_reach(const StochasticGame& game,
                            const QuantifiedObjective<V>& q,
                            const SolverConfig& cfg = {}) {
  auto core = detail::reach_core(game, q, Player::Max, cfg);
  SingleResult<V> r;
  r.value.values = std::move(core.values);
  r.max_strategy = MDStrategy::from_indices(game, Player::Max, core.reacher);
  r.min_strategy = MDStrategy::from_indices(game, Player::Min, core.opponent);
  r.iterations = core.iterations;
  return r;
}

// One minus the weighted first-hit probability of the domain of `q`, which
// Max minimises and Min maximises. Equal to one minus solve_reach on the
// game with owners swapped.
template <class V>
SingleResult<V> solve_safe(const StochasticGame& game,
                           const QuantifiedObjective<V>& q,
                           const SolverConfig& cfg = {}) {
  auto core = detail::reach_core(game, q, Player::Min, cfg);
  SingleResult<V> r;
  for (auto& v : core.values) v = V(1) - v;
  r.value.values = std::move(core.values);
  r.max_strategy = MDStrategy::from_indices(game, Player::Max, core.opponent);
  r.min_strategy = MDStrategy::from_indices(game, Player::Min, core.reacher);
  r.iterations = core.iterations;
  return r;
}

template <class V>
SingleResult<V> solve_single(const StochasticGame& game,
                             const QuantifiedObjective<V>& q,
                             const SolverConfig& cfg = {}) {
  return q.kind == ObjectiveKind::Reach ? solve_reach(game, q, cfg)
                                        : solve_safe(game, q, cfg);
}

// v(s,a) = sum over successors of P(s,a,t) v(t).
template <class V>
std::vector<std::vector<V>> action_values(const StochasticGame& game,
                                          const ValueAssignment<V>& v) {
  Arena<V> arena(game);
  std::vector<std::vector<V>> out(game.num_states());
  for (StateIndex s = 0; s < game.num_states(); ++s)
    for (const auto& a : arena.actions[s])
      out[s].push_back(detail::action_value<V>(a, v.values));
  return out;
}

// Actions attaining the per-state max (Max states) or min (Min states);
// within action_epsilon in VI mode.
template <class V>
ActionFilter locally_optimal_filter(const StochasticGame& game,
                                    const ValueAssignment<V>& v,
                                    const SolverConfig& cfg = {}) {
  auto vals = action_values(game, v);
  ActionFilter f;
  f.keep.resize(game.num_states());
  for (StateIndex s = 0; s < game.num_states(); ++s) {
    const auto& row = vals[s];
    bool maximize = game.owner(s) == Player::Max;
    V best = row[0];
    for (const auto& x : row)
      if (maximize ? best < x : x < best) best = x;
    f.keep[s].resize(row.size());
    for (std::size_t a = 0; a < row.size(); ++a) {
      if constexpr (kExact<V>)
        f.keep[s][a] = row[a] == best;
      else
        f.keep[s][a] = maximize ? row[a] >= best - cfg.action_epsilon
                                : row[a] <= best + cfg.action_epsilon;
    }
  }
  return f;
}

// Plain reachability game equivalent to a quantified objective: domain
// states become sinks, each gets a fresh Max predecessor t' moving to t with
// probability q(t) and to a shared losing sink otherwise, and every other
// transition into t is redirected to t'.
struct Gadget {
  StochasticGame game;
  std::vector<StateIndex> target;  // the original domain states
};

inline Gadget quantified_gadget(const StochasticGame& game,
                                const QuantifiedObjective<Rational>& q) {
  const std::size_t n = game.num_states();
  auto fresh = [&](std::string base) {
    while (game.find(base)) base += '_';
    return base;
  };
  GameBuilder b;
  for (const auto& st : game.states()) b.add_state(st.name, st.owner);
  if (game.initial()) b.set_initial(*game.initial());
  std::vector<StateIndex> prime(n, SIZE_MAX);
  Gadget out;
  for (StateIndex t = 0; t < n; ++t)
    if (q.in_domain(t)) {
      prime[t] = b.add_state(fresh(game.name(t) + "'"), Player::Max);
      out.target.push_back(t);
    }
  StateIndex bottom = b.add_state(fresh("bottom"), Player::Max);
  for (StateIndex s = 0; s < n; ++s) {
    if (q.in_domain(s)) continue;
    for (const auto& a : game.actions(s)) {
      std::vector<Transition> dist;
      for (const auto& t : a.distribution)
        dist.push_back({prime[t.target] != SIZE_MAX ? prime[t.target] : t.target,
                        t.probability});
      b.add_action(s, a.label, std::move(dist));
    }
  }
  for (StateIndex t = 0; t < n; ++t) {
    if (prime[t] == SIZE_MAX) continue;
    const Rational& w = q.weight(t);
    std::vector<Transition> dist;
    if (w > 0) dist.push_back({t, w});
    if (w < 1) dist.push_back({bottom, 1 - w});
    b.add_action(prime[t], "go", std::move(dist));
  }
  out.game = std::move(b).build();
  return out;
}

}  // namespace lexsg
