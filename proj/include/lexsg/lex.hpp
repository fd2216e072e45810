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

// Lexicographic reachability/safety games: the absorbing solver, the
// stage decomposition for general objectives, strategy evaluation, the
// threshold query and the determinacy cross-check.

#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/objective.hpp"
#include "lexsg/qualitative.hpp"
#include "lexsg/single.hpp"
#include "lexsg/strategy.hpp"

namespace lexsg {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <class V>
struct LexValueAssignment {
  std::vector<LexVector<V>> values;  // [state][objective]

  std::size_t size() const { return values.size(); }
  const LexVector<V>& operator[](StateIndex s) const { return values[s]; }
  LexVector<V>& operator[](StateIndex s) { return values[s]; }

  ValueAssignment<V> component(std::size_t i) const {
    ValueAssignment<V> out;
    for (const auto& v : values) out.values.push_back(v[i]);
    return out;
  }
};

struct FinalSetReport {
  std::vector<std::size_t> reach_prefix;             // R, 0-based indices
  std::map<std::size_t, std::vector<bool>> zero_sets;  // per index in R
  std::vector<bool> final;  // reach targets of R plus the common zero states
  // Per non-domain state: the first prefix index whose value differs from
  // the outcome of never hitting the domain (0 for reach, 1 for safety);
  // npos if there is none or the state is in the domain.
  std::vector<std::size_t> gap;
  // Domain states and states whose gap is npos or a safety index. Staying
  // outside this set forever loses value for Max.
  std::vector<bool> settled;
};

template <class V>
struct AbsorbingResult {
  LexValueAssignment<V> values;
  MDStrategy strategy;
  ActionFilter filter;         // relative to the input game
  StochasticGame restricted;   // input game under `filter`
  FinalSetReport final;        // final set of the whole objective
  // Per index i > 0: the final set of the prefix before i, and the
  // quantified objectives solved after the primary call, in order.
  std::map<std::size_t, FinalSetReport> prefix_final;
  std::map<std::size_t, std::vector<QuantifiedObjective<V>>> qro;
  std::size_t primary_calls = 0;
  std::size_t qro_calls = 0;
  std::size_t strategy_calls = 0;
  std::uint64_t iterations = 0;
};

struct StageStats {
  double average_actions = 0;             // game the stage is solved on
  double restricted_average_actions = 0;  // after lex-optimal restriction
  bool simple = false;
};

struct SolveStats {
  std::size_t stages_explored = 0;
  std::size_t primary_calls = 0;
  std::size_t qro_calls = 0;
  std::size_t strategy_calls = 0;
  std::uint64_t iterations = 0;
  std::map<StageKey, StageStats> stages;
};

template <class V>
struct SolveReport {
  LexValueAssignment<V> values;
  StagedStrategy strategy;
  SolveStats stats;
  std::map<StageKey, AbsorbingResult<V>> absorbing;  // stages with several objectives
};

namespace detail {

template <class V>
bool equals(const V& x, int c, double tol) {
  if constexpr (kExact<V>) {
    return x == c;
  } else {
    return std::abs(x - c) <= tol;
  }
}

}  // namespace detail

// Final set of a prefix: union of its reach targets and of the states that
// are zero for all its reach objectives; all states if it has none. Zero
// sets are graph-computed on `game`. `values` must hold the prefix values;
// `tol` is the VI tolerance used to compare them with 0 and 1.
template <class V>
FinalSetReport final_set(const StochasticGame& game,
                         const QuantifiedLexObjective<V>& prefix,
                         const LexValueAssignment<V>& values, double tol = 0) {
  const std::size_t n = game.num_states();
  FinalSetReport r;
  r.gap.assign(n, npos);
  r.settled.assign(n, true);
  if (prefix.size() == 0) {
    r.final.assign(n, true);
    return r;
  }
  auto domain = prefix.domain();
  for (StateIndex s = 0; s < n; ++s) {
    if (domain[s]) continue;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      int stall = prefix[k].kind == ObjectiveKind::Reach ? 0 : 1;
      if (!detail::equals(values[s][k], stall, tol)) {
        r.gap[s] = k;
        r.settled[s] = prefix[k].kind == ObjectiveKind::Safe;
        break;
      }
    }
  }
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (prefix[k].kind == ObjectiveKind::Reach) r.reach_prefix.push_back(k);
  if (r.reach_prefix.empty()) {
    r.final.assign(n, true);
    return r;
  }
  std::vector<bool> targets(n, false), zero_all(n, true);
  for (std::size_t k : r.reach_prefix) {
    auto pos = positive_states(game, prefix[k]);
    std::vector<bool> zero(n);
    for (StateIndex s = 0; s < n; ++s) {
      zero[s] = !pos[s];
      if (!zero[s]) zero_all[s] = false;
      if (prefix[k].in_domain(s) && prefix[k].weight(s) > 0) targets[s] = true;
    }
    r.zero_sets[k] = std::move(zero);
  }
  r.final.resize(n);
  for (StateIndex s = 0; s < n; ++s) r.final[s] = targets[s] || zero_all[s];
  return r;
}

namespace detail {

template <class V>
QuantifiedLexObjective<V> prefix_of(const QuantifiedLexObjective<V>& q,
                                    std::size_t k) {
  QuantifiedLexObjective<V> out;
  out.entries.assign(q.entries.begin(), q.entries.begin() + k);
  return out;
}

// Re-index a filter of `sub` (a restriction of `base` by `outer`) to `base`.
inline ActionFilter compose(const ActionFilter& outer, const ActionFilter& inner) {
  ActionFilter out = outer;
  for (std::size_t s = 0; s < out.keep.size(); ++s) {
    std::size_t j = 0;
    for (std::size_t a = 0; a < out.keep[s].size(); ++a)
      if (out.keep[s][a]) out.keep[s][a] = inner.keep[s][j++];
  }
  return out;
}

}  // namespace detail

// Solves an absorbing quantified lex-objective: every domain state must be
// a sink of `game`.
//
// A play that never hits the domain settles in one layer of equal gap (the
// gap never decreases along actions kept so far). Leaving a layer whose gap
// is a reach index is up to Max, leaving one whose gap is a safety index is
// up to Min. Where the primary value would let the wrong player stay, the
// layers are re-solved top down as quantified objectives whose boundary
// weights are the values above them.
template <class V>
AbsorbingResult<V> solve_absorbing(const StochasticGame& game,
                                   const QuantifiedLexObjective<V>& qobj,
                                   const SolverConfig& cfg = {}) {
  qobj.validate();
  const std::size_t n = game.num_states();
  if (qobj.entries.front().num_states() != n)
    throw ModelError("objective does not match the game");
  auto domain = qobj.domain();
  for (StateIndex s = 0; s < n; ++s)
    if (domain[s] && !is_sink(game, s))
      throw ModelError("objective is not absorbing: " + game.name(s) +
                       " is not a sink");
  const double tol = kExact<V> ? 0 : cfg.action_epsilon;

  AbsorbingResult<V> r;
  r.values.values.assign(n, LexVector<V>(qobj.size(), V(0)));
  r.filter = ActionFilter::all(game);
  StochasticGame cur = game;

  for (std::size_t i = 0; i < qobj.size(); ++i) {
    const auto& obj = qobj[i];
    auto single = solve_single(cur, obj, cfg);
    ++r.primary_calls;
    r.iterations += single.iterations;
    ValueAssignment<V> v = std::move(single.value);

    if (i > 0) {
      auto report = final_set(cur, detail::prefix_of(qobj, i), r.values, tol);
      const int natural = obj.kind == ObjectiveKind::Reach ? 0 : 1;
      std::map<std::size_t, int, std::greater<>> layers;  // gap -> stall value
      bool fix = false;
      for (StateIndex s = 0; s < n; ++s) {
        if (domain[s]) continue;
        std::size_t g = report.gap[s];
        int stall = g == npos ? natural
                              : (qobj[g].kind == ObjectiveKind::Reach ? 0 : 1);
        layers[g] = stall;
        fix = fix || stall != natural;
      }
      if (fix) {
        bool top = true;
        for (auto it = layers.begin(); it != layers.end();) {
          int stall = it->second;
          std::vector<bool> group(n, false);
          for (; it != layers.end() && it->second == stall; ++it)
            for (StateIndex s = 0; s < n; ++s)
              if (!domain[s] && report.gap[s] == it->first) group[s] = true;
          // The top group is closed, so its primary values stand.
          if (std::exchange(top, false) && stall == natural) continue;
          QuantifiedObjective<V> q;
          q.kind = stall == 0 ? ObjectiveKind::Reach : ObjectiveKind::Safe;
          q.weights.assign(n, std::nullopt);
          for (StateIndex s = 0; s < n; ++s)
            if (!group[s]) q.weights[s] = stall == 0 ? v[s] : V(1) - v[s];
          auto res = solve_single(cur, q, cfg);
          ++r.qro_calls;
          r.iterations += res.iterations;
          for (StateIndex s = 0; s < n; ++s)
            if (group[s]) v[s] = res.value[s];
          r.qro[i].push_back(std::move(q));
        }
      }
      r.prefix_final[i] = std::move(report);
    }

    auto local = locally_optimal_filter(cur, v, cfg);
    cur = restrict(cur, local);
    r.filter = detail::compose(r.filter, local);
    for (StateIndex s = 0; s < n; ++s) r.values[s][i] = v[s];
  }

  r.final = final_set(cur, qobj, r.values, tol);
  r.strategy = MDStrategy::first_actions(cur, Player::Max);
  bool settled = true;
  for (bool b : r.final.settled) settled = settled && b;
  if (!settled) {
    // Reach the settled states almost surely while staying lex-optimal.
    QuantifiedObjective<V> q;
    q.kind = ObjectiveKind::Reach;
    q.weights.assign(n, std::nullopt);
    for (StateIndex s = 0; s < n; ++s)
      if (r.final.settled[s]) q.weights[s] = V(1);
    auto res = solve_reach(cur, q, cfg);
    ++r.strategy_calls;
    r.iterations += res.iterations;
    for (StateIndex s = 0; s < n; ++s)
      if (game.owner(s) == Player::Max && !r.final.settled[s])
        r.strategy.choice[s] = res.max_strategy.choice[s];
  }
  r.restricted = std::move(cur);
  return r;
}

// Both conditions characterising MD lex-optimal strategies of absorbing
// objectives: every choice survives the final restriction, and `target` is
// reached almost surely in the restricted game. The default target is the
// settled set.
template <class V>
bool check_certificate(const AbsorbingResult<V>& r,
                       const std::vector<bool>* target = nullptr) {
  const auto& g = r.restricted;
  for (StateIndex s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != Player::Max) continue;
    bool kept = false;
    for (const auto& a : g.actions(s)) kept = kept || a.label == r.strategy.choice[s];
    if (!kept) return false;
  }
  return almost_sure_reach_under(g, r.strategy, target ? *target : r.final.settled);
}

namespace detail {

template <class V>
struct StageResult {
  std::vector<std::size_t> indices;  // objective indices still active
  LexValueAssignment<V> values;      // over `indices`
  MDStrategy strategy;
};

template <class V>
class LexSolver {
 public:
  LexSolver(const StochasticGame& game, const LexObjective& obj,
            const SolverConfig& cfg)
      : game_(game), obj_(obj), cfg_(cfg) {}

  SolveReport<V> run() {
    const std::size_t n = obj_.size();
    solve(StageKey{});
    const auto& top = memo_.at(StageKey{});
    report_.values = top.values;
    report_.strategy.player = Player::Max;
    report_.strategy.objective = obj_;
    for (const auto& [key, st] : memo_) report_.strategy.table[key] = st.strategy;
    // Stages entered only at sinks need an entry but no solve.
    for (StateIndex s = 0; s < game_.num_states(); ++s) {
      StageKey own = stage_of_state(obj_, s);
      for (const auto& [key, st] : memo_) {
        StageKey next = key.merged(own);
        if (!next.is_full(n) && !report_.strategy.has(next))
          report_.strategy.table[next] =
              MDStrategy::first_actions(game_, Player::Max);
      }
    }
    return std::move(report_);
  }

 private:
  V stage_value(StageKey key, std::size_t i, StateIndex s) const {
    const auto& st = memo_.at(key);
    for (std::size_t j = 0; j < st.indices.size(); ++j)
      if (st.indices[j] == i) return st.values[s][j];
    throw Error("internal: objective not active in stage");
  }

  void solve(StageKey key) {
    if (memo_.count(key)) return;
    const std::size_t n = obj_.size();
    const std::size_t states = game_.num_states();
    StageResult<V> result;
    for (std::size_t i = 0; i < n; ++i)
      if (!key.contains(i)) result.indices.push_back(i);
    auto& stats = report_.stats;
    StageStats ss;
    ss.average_actions = game_.average_actions();

    if (result.indices.size() == 1) {
      std::size_t i = result.indices.front();
      auto q = QuantifiedObjective<V>::from_objective(obj_[i], states);
      auto single = solve_single(game_, q, cfg_);
      ++stats.primary_calls;
      stats.iterations += single.iterations;
      ss.simple = true;
      ss.restricted_average_actions =
          restrict(game_, locally_optimal_filter(game_, single.value, cfg_))
              .average_actions();
      result.values.values.resize(states);
      for (StateIndex s = 0; s < states; ++s)
        result.values[s] = {single.value[s]};
      result.strategy = std::move(single.max_strategy);
    } else {
      std::vector<bool> unite(states, false);
      for (std::size_t i : result.indices)
        for (StateIndex s : obj_[i].target) unite[s] = true;
      auto sink = sinks(game_);
      for (StateIndex s = 0; s < states; ++s) {
        if (!unite[s] || sink[s]) continue;
        StageKey next = key.merged(stage_of_state(obj_, s));
        if (!next.is_full(n)) solve(next);
      }
      QuantifiedLexObjective<V> qobj;
      for (std::size_t i : result.indices) {
        QuantifiedObjective<V> q;
        q.kind = obj_[i].kind;
        q.weights.assign(states, std::nullopt);
        for (StateIndex s = 0; s < states; ++s) {
          if (!unite[s]) continue;
          if (obj_[i].contains(s)) {
            q.weights[s] = V(1);
            continue;
          }
          StageKey next = key.merged(stage_of_state(obj_, s));
          V v = sink[s] ? V(obj_[i].kind == ObjectiveKind::Reach ? 0 : 1)
                        : stage_value(next, i, s);
          q.weights[s] = obj_[i].kind == ObjectiveKind::Reach ? v : V(1) - v;
        }
        qobj.entries.push_back(std::move(q));
      }
      auto absorbed = make_absorbing(game_, unite);
      auto ab = solve_absorbing(absorbed, qobj, cfg_);
      stats.primary_calls += ab.primary_calls;
      stats.qro_calls += ab.qro_calls;
      stats.strategy_calls += ab.strategy_calls;
      stats.iterations += ab.iterations;
      ss.average_actions = absorbed.average_actions();
      ss.restricted_average_actions = ab.restricted.average_actions();
      result.values = ab.values;
      result.strategy = ab.strategy;
      // Choices at absorbed states are never used; keep them valid labels.
      for (StateIndex s = 0; s < states; ++s)
        if (unite[s] && game_.owner(s) == Player::Max)
          result.strategy.choice[s] = game_.actions(s).front().label;
      report_.absorbing.emplace(key, std::move(ab));
    }
    ++stats.stages_explored;
    stats.stages[key] = ss;
    memo_.emplace(key, std::move(result));
  }

  const StochasticGame& game_;
  const LexObjective& obj_;
  SolverConfig cfg_;
  std::map<StageKey, StageResult<V>> memo_;
  SolveReport<V> report_;
};

}  // namespace detail

template <class V>
SolveReport<V> solve_lex(const StochasticGame& game, const LexObjective& obj,
                         const SolverConfig& cfg = {}) {
  cfg.validate();
  obj.check_against(game);
  if (obj.size() == 0) throw ModelError("empty objective");
  return detail::LexSolver<V>(game, obj, cfg).run();
}

// Product of the game with the visited-targets memory. Each state is the
// pair (s, memory after entering s); pairs whose memory holds every index
// are sinks. `origin[p]` and `memory[p]` describe product state p.
struct StageProduct {
  StochasticGame game;
  LexObjective objective;
  std::vector<StateIndex> origin;
  std::vector<StageKey> memory;
  std::vector<std::optional<StateIndex>> entry;  // per original state
};

// When `sigma` is given, Max states keep only the action it picks.
inline StageProduct stage_product(const StochasticGame& game,
                                  const LexObjective& obj,
                                  const StagedStrategy* sigma = nullptr) {
  const std::size_t n = obj.size();
  StageProduct out;
  std::map<std::pair<StateIndex, StageKey>, StateIndex> index;
  std::deque<StateIndex> queue;
  auto visit = [&](StateIndex s, StageKey m) {
    auto [it, fresh] = index.try_emplace({s, m}, out.origin.size());
    if (fresh) {
      out.origin.push_back(s);
      out.memory.push_back(m);
      queue.push_back(it->second);
    }
    return it->second;
  };
  out.entry.resize(game.num_states());
  for (StateIndex s = 0; s < game.num_states(); ++s)
    out.entry[s] = visit(s, stage_of_state(obj, s));

  std::vector<std::vector<Action>> acts;
  while (!queue.empty()) {
    StateIndex p = queue.front();
    queue.pop_front();
    StateIndex s = out.origin[p];
    StageKey m = out.memory[p];
    if (acts.size() <= p) acts.resize(p + 1);
    if (m.is_full(n)) continue;
    std::optional<std::size_t> only;
    if (sigma && game.owner(s) == sigma->player)
      only = sigma->at(m).action_at(game, s);
    for (std::size_t a = 0; a < game.actions(s).size(); ++a) {
      if (only && *only != a) continue;
      const auto& act = game.actions(s)[a];
      Action pa{act.label, {}};
      for (const auto& t : act.distribution) {
        StateIndex q = visit(t.target, m.merged(stage_of_state(obj, t.target)));
        pa.distribution.push_back({q, t.probability});
      }
      if (acts.size() <= p) acts.resize(p + 1);
      acts[p].push_back(std::move(pa));
    }
  }
  acts.resize(out.origin.size());

  GameBuilder b;
  for (StateIndex p = 0; p < out.origin.size(); ++p)
    b.add_state(game.name(out.origin[p]) + "@" + out.memory[p].to_string(),
                game.owner(out.origin[p]));
  for (StateIndex p = 0; p < out.origin.size(); ++p)
    for (auto& a : acts[p]) b.add_action(p, a.label, std::move(a.distribution));
  out.game = std::move(b).build();

  std::vector<Objective> entries;
  for (std::size_t i = 0; i < n; ++i) {
    Objective o{obj[i].kind, {}};
    for (StateIndex p = 0; p < out.origin.size(); ++p)
      if (out.memory[p].contains(i)) o.target.push_back(p);
    entries.push_back(std::move(o));
  }
  out.objective = LexObjective(std::move(entries));
  return out;
}

// Lex-value Max guarantees with `sigma` against every Min strategy, per
// state, starting with the memory of that state.
template <class V>
LexValueAssignment<V> evaluate_strategy(const StochasticGame& game,
                                        const LexObjective& obj,
                                        const StagedStrategy& sigma,
                                        const SolverConfig& cfg = {}) {
  auto prod = stage_product(game, obj, &sigma);
  auto rep = solve_lex<V>(prod.game, prod.objective, cfg);
  LexValueAssignment<V> out;
  for (StateIndex s = 0; s < game.num_states(); ++s)
    out.values.push_back(rep.values[*prod.entry[s]]);
  return out;
}

namespace detail {

inline std::vector<long long> grid(const LexVector<double>& x) {
  std::vector<long long> out;
  for (double v : x) out.push_back(std::llround(v * 1e6));
  return out;
}

}  // namespace detail

// v(s0) >=lex threshold. VI values and the threshold are both rounded to
// the 1e-6 grid first.
template <class V>
bool decide(const LexVector<V>& value, const LexVector<Rational>& threshold) {
  if (value.size() != threshold.size())
    throw ModelError("threshold has " + std::to_string(threshold.size()) +
                     " components, objective has " +
                     std::to_string(value.size()));
  if constexpr (kExact<V>) {
    return lex_compare(value, threshold) >= 0;
  } else {
    LexVector<double> t;
    for (const auto& x : threshold) t.push_back(to_double(x));
    return detail::grid(value) >= detail::grid(t);
  }
}

template <class V>
bool decide(const StochasticGame& game, const LexObjective& obj, StateIndex s0,
            const LexVector<Rational>& threshold, const SolverConfig& cfg = {}) {
  if (threshold.size() != obj.size())
    throw ModelError("threshold has " + std::to_string(threshold.size()) +
                     " components, objective has " + std::to_string(obj.size()));
  auto rep = solve_lex<V>(game, obj, cfg);
  return decide(rep.values[s0], threshold);
}

template <class V>
struct DeterminacyReport {
  LexValueAssignment<V> values;
  LexValueAssignment<V> dual;  // owners swapped, kinds flipped
  V deviation = 0;             // max |v_i + dual_i - 1|
};

template <class V>
DeterminacyReport<V> determinacy_check(const StochasticGame& game,
                                       const LexObjective& obj,
                                       const SolverConfig& cfg = {}) {
  DeterminacyReport<V> r;
  r.values = solve_lex<V>(game, obj, cfg).values;
  r.dual = solve_lex<V>(swap_owners(game), obj.flipped(), cfg).values;
  for (StateIndex s = 0; s < game.num_states(); ++s)
    for (std::size_t i = 0; i < obj.size(); ++i) {
      V d = r.values[s][i] + r.dual[s][i] - V(1);
      if (d < 0) d = -d;
      if (r.deviation < d) r.deviation = d;
    }
  return r;
}

}  // namespace lexsg
