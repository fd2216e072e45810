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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

namespace lexsg {
namespace {

using testing::load_model;
using testing::lv;
using testing::q;

QuantifiedObjective<Rational> reach_of(const StochasticGame& g,
                                       std::initializer_list<const char*> names) {
  std::vector<StateIndex> t;
  for (auto n : names) t.push_back(g.index_of(n));
  return QuantifiedObjective<Rational>::from_target(ObjectiveKind::Reach, t,
                                                    g.num_states());
}

TEST(MarkovChain, OneStep) {
  auto m = parse_game(
      "sg 1\nstate a max\nstate target max\nstate fail max\n"
      "act a go target:1/3 fail:2/3\n");
  auto v = mc_reach_exact(MarkovChain::from_game(m.game), reach_of(m.game, {"target"}));
  EXPECT_EQ(v[0], q(1, 3));
  EXPECT_EQ(v[2], 0);
}

TEST(MarkovChain, Loop) {
  auto m = parse_game("sg 1\nstate a max\nstate target max\nact a go a:1/2 target:1/2\n");
  auto v = mc_reach_exact(MarkovChain::from_game(m.game), reach_of(m.game, {"target"}));
  EXPECT_EQ(v[0], 1);
}

TEST(MarkovChain, InducedRunningExample) {
  auto m = load_model("running.sg");
  const auto& g = m.game;
  auto f = ActionFilter::all(g);
  f.keep[g.index_of("p")] = {false, true};
  f.keep[g.index_of("r")] = {false, false, true};
  auto mc = MarkovChain::from_game(restrict(g, f));
  auto v = mc_reach_exact(mc, reach_of(g, {"s", "t"}));
  EXPECT_EQ(v[g.index_of("r")], q(1, 2));
  EXPECT_EQ(v[g.index_of("p")], q(1, 2));
  EXPECT_THROW(MarkovChain::from_game(g), ModelError);
}

TEST(MarkovChain, AgreesWithSolverOnChains) {
  for (const auto& gg : testing::small_corpus(40)) {
    auto f = ActionFilter::all(gg.game);
    for (auto& row : f.keep)
      for (std::size_t a = 1; a < row.size(); ++a) row[a] = false;
    auto chain = restrict(gg.game, f);
    auto t = QuantifiedObjective<Rational>::from_objective(gg.objective[0],
                                                          chain.num_states());
    EXPECT_EQ(mc_reach_exact(MarkovChain::from_game(chain), t),
              solve_reach(chain, t).value.values);
  }
}

TEST(BruteForce, RunningExample) {
  auto m = load_model("running.sg");
  auto v = brute_force_lex(m.game, *m.objective);
  EXPECT_EQ(v[m.game.index_of("r")], lv({q(1, 2), q(1, 4)}));
  EXPECT_EQ(v[m.game.index_of("v")], lv({0, q(1, 2)}));
  EXPECT_EQ(v[m.game.index_of("w")], lv({0, 1}));
}

TEST(BruteForce, SingleState) {
  auto m = parse_game("sg 1\nstate a min\nobj reach a\n");
  EXPECT_EQ(brute_force_lex(m.game, *m.objective)[0], lv({1}));
}

TEST(BruteForce, Limits) {
  GridSpec spec;
  auto big = gen_avoid(spec);
  EXPECT_THROW(brute_force_lex(big.game, big.objective), LimitError);
  auto m = load_model("running.sg");
  OracleLimits tight;
  tight.max_pairs = 1;
  EXPECT_THROW(brute_force_lex(m.game, *m.objective, tight), LimitError);
}

StochasticGame reversed_actions(const StochasticGame& g) {
  GameBuilder b;
  for (const auto& st : g.states()) b.add_state(st.name, st.owner);
  for (StateIndex s = 0; s < g.num_states(); ++s) {
    const auto& acts = g.actions(s);
    for (auto it = acts.rbegin(); it != acts.rend(); ++it)
      b.add_action(s, it->label, it->distribution);
  }
  return std::move(b).build();
}

TEST(BruteForce, ActionOrderDoesNotMatter) {
  for (const auto& gg : testing::small_corpus(30))
    EXPECT_EQ(brute_force_lex(gg.game, gg.objective).values,
              brute_force_lex(reversed_actions(gg.game), gg.objective).values);
}

// Any fixed Max strategy guarantees at most the value.
TEST(BruteForce, ArbitraryStrategiesAreBounded) {
  std::mt19937_64 rng(5);
  for (const auto& gg : testing::small_corpus(30)) {
    auto truth = brute_force_lex(gg.game, gg.objective);
    StagedStrategy sigma;
    sigma.objective = gg.objective;
    for (std::uint32_t m = 0; m + 1 < (1u << gg.objective.size()); ++m) {
      MDStrategy md{Player::Max, std::vector<std::string>(gg.game.num_states())};
      for (StateIndex s = 0; s < gg.game.num_states(); ++s)
        if (gg.game.owner(s) == Player::Max) {
          const auto& acts = gg.game.actions(s);
          md.choice[s] = acts[rng() % acts.size()].label;
        }
      sigma.table[StageKey{m}] = md;
    }
    auto ev = evaluate_strategy<Rational>(gg.game, gg.objective, sigma);
    for (StateIndex s = 0; s < gg.game.num_states(); ++s)
      EXPECT_TRUE(lex_compare(ev[s], truth[s]) <= 0);
  }
}

StagedStrategy running_min_strategy(const StochasticGame& g, const LexObjective& obj) {
  StagedStrategy tau;
  tau.player = Player::Min;
  tau.objective = obj;
  auto md = MDStrategy::first_actions(g, Player::Min);
  md.choice[g.index_of("p")] = "to_q";
  for (std::uint32_t m = 0; m < 3; ++m) tau.table[StageKey{m}] = md;
  return tau;
}

TEST(Simulate, RunningExample) {
  auto m = load_model("running.sg");
  const auto& g = m.game;
  auto sigma = solve_lex<Rational>(g, *m.objective).strategy;
  auto tau = running_min_strategy(g, *m.objective);
  const std::size_t episodes = 100000;
  auto f = simulate(g, *m.objective, sigma, tau, g.index_of("r"), episodes, 200, 11);
  const double want[] = {0.5, 0.25};
  for (std::size_t i = 0; i < 2; ++i) {
    double se = std::sqrt(want[i] * (1 - want[i]) / episodes);
    EXPECT_NEAR(f[i], want[i], 3 * se) << i;
  }
  EXPECT_EQ(f, simulate(g, *m.objective, sigma, tau, g.index_of("r"), episodes, 200, 11));
}

TEST(Simulate, DeterministicGame) {
  auto m = parse_game(
      "sg 1\nstate a max\nstate b min\nstate c max\nstate d max\n"
      "act a x b:1\nact a y d:1\nact b z c:1\nobj reach c\nobj safe d\n");
  auto rep = solve_lex<Rational>(m.game, *m.objective);
  StagedStrategy tau;
  tau.player = Player::Min;
  tau.objective = *m.objective;
  for (std::uint32_t k = 0; k < 3; ++k)
    tau.table[StageKey{k}] = MDStrategy::first_actions(m.game, Player::Min);
  auto f = simulate(m.game, *m.objective, rep.strategy, tau, 0, 50, 10, 3);
  EXPECT_EQ(f, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(rep.values[0], lv({1, 1}));
}

}  // namespace
}  // namespace lexsg
