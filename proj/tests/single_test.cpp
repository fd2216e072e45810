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

#include <random>

#include "support.hpp"

namespace lexsg {
namespace {

using testing::load_model;
using testing::q;

struct Running : ::testing::Test {
  Model m = load_model("running.sg");
  const StochasticGame& g = m.game;
  StateIndex at(const char* name) const { return g.index_of(name); }

  template <class V>
  QuantifiedObjective<V> target(ObjectiveKind kind,
                                std::initializer_list<const char*> names) const {
    std::vector<StateIndex> t;
    for (auto n : names) t.push_back(at(n));
    return QuantifiedObjective<V>::from_target(kind, t, g.num_states());
  }

  // The running example without p -> s and r -> {t,u}.
  StochasticGame restricted() const {
    auto f = ActionFilter::all(g);
    f.keep[at("p")] = {false, true};
    f.keep[at("r")] = {true, false, true};
    return restrict(g, f);
  }
};

TEST_F(Running, PositiveStates) {
  auto pos = positive_states(g, target<Rational>(ObjectiveKind::Reach, {"s", "t"}));
  for (StateIndex s = 0; s < g.num_states(); ++s) {
    bool zero = g.name(s) == "u" || g.name(s) == "v" || g.name(s) == "w";
    EXPECT_EQ(pos[s], !zero) << g.name(s);
  }
  auto none = positive_states(g, target<Rational>(ObjectiveKind::Reach, {}));
  EXPECT_EQ(none, std::vector<bool>(8, false));
  auto q0 = target<Rational>(ObjectiveKind::Reach, {"s", "t"});
  q0.weights[at("s")] = Rational(0);
  q0.weights[at("t")] = Rational(0);
  EXPECT_EQ(positive_states(g, q0), std::vector<bool>(8, false));
  auto all = target<Rational>(ObjectiveKind::Reach,
                              {"p", "q", "r", "s", "t", "u", "v", "w"});
  EXPECT_EQ(positive_states(g, all), std::vector<bool>(8, true));
}

TEST_F(Running, ReachValues) {
  auto ex = solve_reach(g, target<Rational>(ObjectiveKind::Reach, {"s", "t"}));
  auto vi = solve_reach(g, target<double>(ObjectiveKind::Reach, {"s", "t"}));
  for (auto n : {"p", "q", "r"}) {
    EXPECT_EQ(ex.value[at(n)], q(1, 2)) << n;
    EXPECT_NEAR(vi.value[at(n)], 0.5, 1e-6) << n;
  }
  EXPECT_EQ(ex.value[at("v")], 0);
  EXPECT_EQ(vi.value[at("v")], 0.0);  // clamped by the graph analysis
}

TEST_F(Running, QuantifiedReachOnRestrictedGame) {
  auto h = restricted();
  QuantifiedObjective<Rational> q2;
  q2.kind = ObjectiveKind::Reach;
  q2.weights.assign(8, std::nullopt);
  q2.weights[at("s")] = q(1);
  q2.weights[at("t")] = q(0);
  q2.weights[at("u")] = q(0);
  q2.weights[at("v")] = q(1, 2);
  q2.weights[at("w")] = q(1);
  auto r = solve_reach(h, q2);
  EXPECT_EQ(r.value[at("r")], q(1, 4));
  EXPECT_EQ(r.value[at("v")], q(1, 2));
  EXPECT_EQ(r.value[at("p")], q(1, 4));
  EXPECT_EQ(r.value[at("q")], q(1, 4));
  EXPECT_EQ(r.max_strategy.choice[at("r")], "to_tv");
}

TEST_F(Running, WholeDomainIsOne) {
  auto all = target<Rational>(ObjectiveKind::Reach,
                              {"p", "q", "r", "s", "t", "u", "v", "w"});
  for (const auto& v : solve_reach(g, all).value.values) EXPECT_EQ(v, 1);
}

TEST_F(Running, SafeValues) {
  auto ex = solve_safe(g, target<Rational>(ObjectiveKind::Safe, {"t", "u"}));
  EXPECT_EQ(ex.value[at("w")], 1);
  EXPECT_EQ(ex.value[at("v")], q(1, 2));
  EXPECT_EQ(ex.value[at("t")], 0);
  EXPECT_EQ(ex.value[at("u")], 0);
  for (const auto& v : solve_safe(g, target<Rational>(ObjectiveKind::Safe, {})).value.values)
    EXPECT_EQ(v, 1);
  auto every = target<double>(ObjectiveKind::Safe,
                              {"p", "q", "r", "s", "t", "u", "v", "w"});
  for (double v : solve_safe(g, every).value.values) EXPECT_EQ(v, 0.0);
}

TEST_F(Running, ActionValuesAndFilter) {
  auto reach = solve_reach(g, target<Rational>(ObjectiveKind::Reach, {"s", "t"}));
  auto av = action_values(g, reach.value);
  EXPECT_EQ(av[at("r")], (std::vector<Rational>{q(1, 2), q(1, 2), q(1, 2)}));
  EXPECT_EQ(av[at("s")], (std::vector<Rational>{q(1)}));
  EXPECT_EQ(av[at("q")], (std::vector<Rational>{reach.value[at("r")]}));

  auto f = locally_optimal_filter(g, reach.value);
  EXPECT_EQ(f.keep[at("p")], (std::vector<bool>{false, true}));
  ValueAssignment<Rational> flat{std::vector<Rational>(8, q(1, 3))};
  EXPECT_EQ(locally_optimal_filter(g, flat), ActionFilter::all(g));
}

TEST_F(Running, AlmostSureUnder) {
  auto h = restricted();
  std::vector<bool> final(8, false);
  for (auto n : {"s", "t", "u", "v", "w"}) final[at(n)] = true;
  auto sigma = MDStrategy::first_actions(h, Player::Max);
  sigma.choice[at("r")] = "to_tv";
  EXPECT_TRUE(almost_sure_reach_under(h, sigma, final));
  sigma.choice[at("r")] = "to_q";
  EXPECT_FALSE(almost_sure_reach_under(h, sigma, final));
  EXPECT_TRUE(almost_sure_reach_under(h, sigma, std::vector<bool>(8, true)));
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.vi_epsilon = 1e-5;  // not below action_epsilon
  EXPECT_THROW(c.validate(), ModelError);
  c = {};
  c.vi_epsilon = 0;
  EXPECT_THROW(c.validate(), ModelError);
}

TEST(SolverConfig, IterationLimit) {
  auto m = parse_game(
      "sg 1\nstate a max\nstate b max\nstate c max\n"
      "act a x a:99/100 b:1/200 c:1/200\nobj reach b\n");
  SolverConfig c;
  c.max_iterations = 3;
  auto t = QuantifiedObjective<double>::from_objective((*m.objective)[0], 3);
  EXPECT_THROW(solve_reach(m.game, t, c), LimitError);
}

// Weighted objectives for the corpus games: first objective's targets
// with weights drawn from {0, 1/4, 1/2, 1}.
QuantifiedObjective<Rational> weighted(const GeneratedGame& gg, int salt) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(salt));
  const Rational choices[] = {q(0), q(1, 4), q(1, 2), q(1)};
  QuantifiedObjective<Rational> out;
  out.kind = ObjectiveKind::Reach;
  out.weights.assign(gg.game.num_states(), std::nullopt);
  for (StateIndex s : gg.objective[0].target) out.weights[s] = choices[rng() % 4];
  return out;
}

TEST(Properties, ComplementIdentity) {
  for (const auto& gg : testing::small_corpus(40)) {
    auto swapped = swap_owners(gg.game);
    for (const auto& o : gg.objective.entries()) {
      auto qe = QuantifiedObjective<Rational>::from_target(ObjectiveKind::Safe,
                                                          o.target, gg.game.num_states());
      auto qd = QuantifiedObjective<double>::from_target(ObjectiveKind::Safe,
                                                        o.target, gg.game.num_states());
      auto a = solve_safe(gg.game, qe), b = solve_reach(swapped, qe);
      auto c = solve_safe(gg.game, qd), d = solve_reach(swapped, qd);
      for (StateIndex s = 0; s < gg.game.num_states(); ++s) {
        EXPECT_EQ(a.value[s] + b.value[s], 1);
        EXPECT_NEAR(c.value[s] + d.value[s], 1.0, 2e-8);
      }
    }
  }
}

TEST(Properties, GadgetEquivalence) {
  int k = 0;
  for (const auto& gg : testing::small_corpus(40)) {
    auto qw = weighted(gg, k++);
    auto direct = solve_reach(gg.game, qw);
    auto gad = quantified_gadget(gg.game, qw);
    auto plain = QuantifiedObjective<Rational>::from_target(
        ObjectiveKind::Reach, gad.target, gad.game.num_states());
    auto via = solve_reach(gad.game, plain);
    for (StateIndex s = 0; s < gg.game.num_states(); ++s)
      if (!qw.in_domain(s)) EXPECT_EQ(direct.value[s], via.value[s]);
  }
}

TEST(Properties, ViFromBelowAndCloseToExact) {
  int k = 0;
  for (const auto& gg : testing::small_corpus(40)) {
    auto qw = weighted(gg, k++);
    QuantifiedObjective<double> qd;
    qd.kind = qw.kind;
    for (const auto& w : qw.weights)
      qd.weights.push_back(w ? std::optional<double>(to_double(*w)) : std::nullopt);
    auto ex = solve_reach(gg.game, qw);
    auto vi = solve_reach(gg.game, qd);
    for (StateIndex s = 0; s < gg.game.num_states(); ++s) {
      double e = to_double(ex.value[s]);
      EXPECT_LE(vi.value[s], e + 1e-12);
      EXPECT_NEAR(vi.value[s], e, 1e-6);
      EXPECT_EQ(vi.value[s] == 0.0, ex.value[s] == 0);
    }
  }
}

// Fixing both returned strategies gives a chain whose values are the
// returned values.
TEST(Properties, ExactStrategiesReproduceValues) {
  int k = 0;
  for (const auto& gg : testing::small_corpus(40)) {
    auto qw = weighted(gg, k++);
    auto r = solve_reach(gg.game, qw);
    auto f = ActionFilter::all(gg.game);
    for (StateIndex s = 0; s < gg.game.num_states(); ++s) {
      const auto& pick = gg.game.owner(s) == Player::Max ? r.max_strategy : r.min_strategy;
      auto a = pick.action_at(gg.game, s);
      for (std::size_t b = 0; b < f.keep[s].size(); ++b) f.keep[s][b] = a == b;
    }
    auto mc = MarkovChain::from_game(restrict(gg.game, f));
    EXPECT_EQ(mc_reach_exact(mc, qw), r.value.values);
  }
}

}  // namespace
}  // namespace lexsg
