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

// Ground truth for small instances. Shares only the model types with the
// solver: the product, the chain solver and the search are separate code.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/lex.hpp"
#include "lexsg/objective.hpp"
#include "lexsg/strategy.hpp"

namespace lexsg {

struct MarkovChain {
  std::vector<std::vector<Transition>> transition;  // one distribution per state

  std::size_t size() const { return transition.size(); }

  static MarkovChain from_game(const StochasticGame& game) {
    MarkovChain mc;
    for (StateIndex s = 0; s < game.num_states(); ++s) {
      if (game.actions(s).size() != 1)
        throw ModelError("state " + game.name(s) + " has more than one action");
      mc.transition.push_back(game.actions(s).front().distribution);
    }
    return mc;
  }
};

namespace detail {

// Dense Gauss-Jordan on (A | b), A square and nonsingular.
inline std::vector<Rational> dense_solve(std::vector<std::vector<Rational>> a,
                                         std::vector<Rational> b) {
  const std::size_t m = b.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    while (piv < m && a[piv][c] == 0) ++piv;
    if (piv == m) throw Error("oracle: singular chain system");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    Rational inv = 1 / a[c][c];
    for (std::size_t k = c; k < m; ++k) a[c][k] *= inv;
    b[c] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = c; k < m; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  return b;
}

// Tarjan SCCs, emitted in reverse topological order (sinks first).
inline std::vector<std::vector<StateIndex>> sccs(
    const std::vector<std::vector<StateIndex>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
  std::vector<bool> on(n, false);
  std::vector<StateIndex> stack;
  std::vector<std::vector<StateIndex>> out;
  std::size_t counter = 0;
  std::function<void(StateIndex)> dfs = [&](StateIndex v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (StateIndex w : succ[v]) {
      if (index[w] == SIZE_MAX) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<StateIndex> comp;
      StateIndex w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  };
  for (StateIndex v = 0; v < n; ++v)
    if (index[v] == SIZE_MAX) dfs(v);
  return out;
}

}  // namespace detail

// Weighted first-hit probabilities of the domain of `q` in `mc`.
inline std::vector<Rational> mc_reach_exact(const MarkovChain& mc,
                                            const QuantifiedObjective<Rational>& q) {
  const std::size_t n = mc.size();
  std::vector<Rational> x(n);
  // Backward search from the positive domain through non-domain states.
  std::vector<std::vector<StateIndex>> pred(n);
  for (StateIndex s = 0; s < n; ++s)
    for (const auto& t : mc.transition[s]) pred[t.target].push_back(s);
  std::vector<bool> can(n, false);
  std::vector<StateIndex> work;
  for (StateIndex s = 0; s < n; ++s)
    if (q.in_domain(s)) {
      x[s] = q.weight(s);
      if (q.weight(s) > 0) {
        can[s] = true;
        work.push_back(s);
      }
    }
  while (!work.empty()) {
    StateIndex t = work.back();
    work.pop_back();
    for (StateIndex s : pred[t])
      if (!can[s] && !q.in_domain(s)) {
        can[s] = true;
        work.push_back(s);
      }
  }
  std::vector<bool> unknown(n);
  for (StateIndex s = 0; s < n; ++s) unknown[s] = can[s] && !q.in_domain(s);

  std::vector<std::vector<StateIndex>> succ(n);
  for (StateIndex s = 0; s < n; ++s)
    if (unknown[s])
      for (const auto& t : mc.transition[s])
        if (unknown[t.target]) succ[s].push_back(t.target);

  for (const auto& comp : detail::sccs(succ)) {
    if (!unknown[comp.front()]) continue;
    std::map<StateIndex, std::size_t> local;
    for (std::size_t k = 0; k < comp.size(); ++k) local[comp[k]] = k;
    const std::size_t m = comp.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    std::vector<Rational> b(m);
    for (std::size_t k = 0; k < m; ++k) {
      a[k][k] = 1;
      for (const auto& t : mc.transition[comp[k]]) {
        auto it = local.find(t.target);
        if (it != local.end())
          a[k][it->second] -= t.probability;
        else
          b[k] += t.probability * x[t.target];  // solved, domain or zero
      }
    }
    auto sol = detail::dense_solve(std::move(a), std::move(b));
    for (std::size_t k = 0; k < m; ++k) {
      x[comp[k]] = sol[k];
    }
  }
  return x;
}

struct OracleLimits {
  std::uint64_t max_pairs = 2'000'000;  // per start state
  std::size_t max_product_states = 4096;
};

struct OracleStats {
  std::uint64_t pairs = 0;  // strategy pairs evaluated, all start states
  std::size_t product_states = 0;
};

namespace detail {

struct OracleProduct {
  std::vector<StateIndex> origin;
  std::vector<std::uint32_t> memory;
  std::vector<std::vector<std::vector<Transition>>> actions;  // [p][a]
  std::vector<StateIndex> entry;
};

inline std::uint32_t visited_mask(const LexObjective& obj, StateIndex s) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < obj.size(); ++i)
    if (obj[i].contains(s)) m |= 1u << i;
  return m;
}

inline OracleProduct oracle_product(const StochasticGame& game,
                                    const LexObjective& obj,
                                    const OracleLimits& limits) {
  const std::uint32_t full = (obj.size() >= 32) ? ~0u : ((1u << obj.size()) - 1);
  OracleProduct prod;
  std::map<std::pair<StateIndex, std::uint32_t>, StateIndex> id;
  auto get = [&](StateIndex s, std::uint32_t m) {
    auto [it, fresh] = id.try_emplace({s, m}, prod.origin.size());
    if (fresh) {
      if (prod.origin.size() >= limits.max_product_states)
        throw LimitError("oracle limits exceeded: product too large");
      prod.origin.push_back(s);
      prod.memory.push_back(m);
      prod.actions.emplace_back();
    }
    return it->second;
  };
  for (StateIndex s = 0; s < game.num_states(); ++s)
    prod.entry.push_back(get(s, visited_mask(obj, s)));
  for (StateIndex p = 0; p < prod.origin.size(); ++p) {
    StateIndex s = prod.origin[p];
    std::uint32_t m = prod.memory[p];
    if (m == full) {
      prod.actions[p].push_back({Transition{p, Rational(1)}});
      continue;
    }
    std::vector<std::vector<Transition>> acts;
    for (const auto& a : game.actions(s)) {
      std::vector<Transition> dist;
      for (const auto& t : a.distribution)
        dist.push_back({get(t.target, m | visited_mask(obj, t.target)),
                        t.probability});
      acts.push_back(std::move(dist));
    }
    prod.actions[p] = std::move(acts);
  }
  return prod;
}

}  // namespace detail

// Lex-values by exhaustive search: for every start state, every Max
// choice function on the reachable part of the game x memory product is
// evaluated against every Min choice function there, each induced chain
// solved exactly; lexicographic inf over Min, then sup over Max. With
// `starts`, only those states are evaluated and the others stay empty.
inline LexValueAssignment<Rational> brute_force_lex(
    const StochasticGame& game, const LexObjective& obj,
    const OracleLimits& limits = {}, OracleStats* stats = nullptr,
    const std::vector<StateIndex>* starts = nullptr) {
  obj.check_against(game);
  auto prod = detail::oracle_product(game, obj, limits);
  const std::size_t np = prod.origin.size();
  const std::size_t n = obj.size();
  if (stats) stats->product_states = np;

  std::vector<QuantifiedObjective<Rational>> reach(n);
  for (std::size_t i = 0; i < n; ++i) {
    reach[i].kind = ObjectiveKind::Reach;
    reach[i].weights.assign(np, std::nullopt);
    for (StateIndex p = 0; p < np; ++p)
      if ((prod.memory[p] >> i) & 1u) reach[i].weights[p] = Rational(1);
  }

  LexValueAssignment<Rational> out;
  out.values.resize(game.num_states());
  std::vector<StateIndex> all;
  if (!starts)
    for (StateIndex s = 0; s < game.num_states(); ++s) all.push_back(s);
  for (StateIndex s0 : starts ? *starts : all) {
    // Product states reachable from the entry of s0 under any choices.
    std::vector<bool> seen(np, false);
    std::vector<StateIndex> order{prod.entry[s0]};
    seen[prod.entry[s0]] = true;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (const auto& a : prod.actions[order[k]])
        for (const auto& t : a)
          if (!seen[t.target]) {
            seen[t.target] = true;
            order.push_back(t.target);
          }
    std::vector<StateIndex> max_states, min_states;
    for (StateIndex p : order) {
      if (prod.actions[p].size() < 2) continue;
      (game.owner(prod.origin[p]) == Player::Max ? max_states : min_states)
          .push_back(p);
    }
    auto count = [&](const std::vector<StateIndex>& ps) {
      long double c = 1;
      for (StateIndex p : ps) c *= prod.actions[p].size();
      return c;
    };
    long double pairs = count(max_states) * count(min_states);
    if (pairs > static_cast<long double>(limits.max_pairs))
    {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3Lg", pairs);
      throw LimitError("oracle limits exceeded: " + std::string(buf) +
                       " strategy pairs from state " + game.name(s0));
    }

    std::vector<std::size_t> choice(np, 0);
    auto advance = [&](const std::vector<StateIndex>& ps) {
      for (StateIndex p : ps) {
        if (++choice[p] < prod.actions[p].size()) return true;
        choice[p] = 0;
      }
      return false;
    };
    auto evaluate = [&]() {
      MarkovChain mc;
      mc.transition.resize(np);
      for (StateIndex p : order) mc.transition[p] = prod.actions[p][choice[p]];
      for (StateIndex p = 0; p < np; ++p)
        if (!seen[p]) mc.transition[p] = {Transition{p, Rational(1)}};
      LexVector<Rational> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        Rational r = mc_reach_exact(mc, reach[i])[prod.entry[s0]];
        v[i] = obj[i].kind == ObjectiveKind::Reach ? r : Rational(1) - r;
      }
      if (stats) ++stats->pairs;
      return v;
    };

    std::optional<LexVector<Rational>> best;
    for (StateIndex p : max_states) choice[p] = 0;
    do {
      std::optional<LexVector<Rational>> worst;
      for (StateIndex p : min_states) choice[p] = 0;
      do {
        auto v = evaluate();
        if (!worst || lex_compare(v, *worst) < 0) worst = std::move(v);
      } while (advance(min_states));
      if (!best || lex_compare(*worst, *best) > 0) best = std::move(worst);
    } while (advance(max_states));
    out.values[s0] = std::move(*best);
  }
  return out;
}

struct PathSample {
  std::vector<StateIndex> states;
  std::vector<bool> satisfied;  // per objective, judged on the finite prefix
};

inline PathSample sample_path(const StochasticGame& game, const LexObjective& obj,
                              const StagedStrategy& sigma,
                              const StagedStrategy& tau, StateIndex start,
                              std::size_t horizon, std::mt19937_64& rng) {
  PathSample path;
  StageKey memory = stage_of_state(obj, start);
  StateIndex s = start;
  path.states.push_back(s);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t step = 0; step < horizon && !memory.is_full(obj.size());
       ++step) {
    const StagedStrategy& who = game.owner(s) == sigma.player ? sigma : tau;
    const auto& act = game.actions(s)[who.at(memory).action_at(game, s)];
    double u = unit(rng);
    StateIndex next = act.distribution.back().target;
    for (const auto& t : act.distribution) {
      double p = to_double(t.probability);
      if (u < p) {
        next = t.target;
        break;
      }
      u -= p;
    }
    s = next;
    memory = memory.merged(stage_of_state(obj, s));
    path.states.push_back(s);
  }
  for (std::size_t i = 0; i < obj.size(); ++i)
    path.satisfied.push_back((obj[i].kind == ObjectiveKind::Reach) ==
                             memory.contains(i));
  return path;
}

// Empirical frequency of each objective over `episodes` sampled paths.
inline std::vector<double> simulate(const StochasticGame& game,
                                    const LexObjective& obj,
                                    const StagedStrategy& sigma,
                                    const StagedStrategy& tau, StateIndex start,
                                    std::size_t episodes, std::size_t horizon,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> freq(obj.size(), 0.0);
  for (std::size_t e = 0; e < episodes; ++e) {
    auto path = sample_path(game, obj, sigma, tau, start, horizon, rng);
    for (std::size_t i = 0; i < obj.size(); ++i)
      if (path.satisfied[i]) freq[i] += 1;
  }
  for (auto& f : freq) f /= static_cast<double>(episodes);
  return freq;
}

}  // namespace lexsg
