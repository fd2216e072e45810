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

#include "support.hpp"

namespace lexsg {
namespace {

using testing::load_model;
using testing::q;

TEST(Parse, RunningExampleShape) {
  auto m = load_model("running.sg");
  const auto& g = m.game;
  EXPECT_EQ(g.num_states(), 8u);
  std::size_t max = 0;
  for (StateIndex s = 0; s < g.num_states(); ++s)
    max += g.owner(s) == Player::Max;
  EXPECT_EQ(max, 4u);
  for (auto name : {"q", "r", "s", "w"})
    EXPECT_EQ(g.owner(g.index_of(name)), Player::Max) << name;
  ASSERT_TRUE(m.objective);
  EXPECT_EQ(m.objective->size(), 2u);
  EXPECT_EQ(g.initial(), g.find("p"));
}

TEST(Parse, SingleStateGetsSelfLoop) {
  auto m = parse_game("sg 1\nstate a max\n");
  ASSERT_EQ(m.game.num_states(), 1u);
  ASSERT_EQ(m.game.actions(0).size(), 1u);
  EXPECT_EQ(m.game.actions(0)[0].label, kSelfLoopLabel);
  EXPECT_TRUE(is_sink(m.game, 0));
}

TEST(Parse, Errors) {
  auto bad = [](const std::string& text) {
    EXPECT_THROW(parse_game(text), ParseError) << text;
  };
  bad("sg 1\nstate a max\nstate b min\nact a x a:1/2 b:1/3\n");
  bad("state a max\n");
  bad("sg 1\nstate a max\nact a x c:1\n");
  bad("sg 1\nstate a max\nstate a min\n");
  bad("sg 1\nstate a max\nact a x a:1\nact a x a:1\n");
  bad("sg 1\nstate a max\nact a x a:1/2 a:1/2\n");
  bad("sg 1\nstate a maybe\n");
  bad("sg 1\nstate a max\nobj reach z\n");
}

TEST(Parse, ErrorCarriesLineNumber) {
  try {
    parse_game("sg 1\nstate a max\nact a x a:2/3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(Parse, DecimalsAreExact) {
  auto m = parse_game("sg 1\nstate a max\nstate b max\nact a x a:0.08 b:0.92\n");
  EXPECT_EQ(m.game.actions(0)[0].distribution[0].probability, q(2, 25));
  EXPECT_EQ(parse_rational("0.25"), q(1, 4));
  EXPECT_EQ(parse_rational("007"), q(7));
  EXPECT_EQ(parse_rational("010/100"), q(1, 10));
  EXPECT_EQ(parse_rational(".5"), q(1, 2));
  EXPECT_FALSE(try_parse_rational("1/0"));
  EXPECT_FALSE(try_parse_rational("abc"));
}

TEST(Serialize, RoundTrip) {
  for (auto name : {"running.sg", "memory.sg"}) {
    auto m = load_model(name);
    auto again = parse_game(serialize_game(m.game, *m.objective));
    EXPECT_EQ(again.game, m.game) << name;
    EXPECT_EQ(*again.objective, *m.objective) << name;
  }
  auto one = parse_game("sg 1\nstate a min\n");
  EXPECT_EQ(parse_game(serialize_game(one.game)).game, one.game);
  for (const auto& g : testing::small_corpus(20)) {
    auto again = parse_game(serialize_game(g.game, g.objective));
    EXPECT_EQ(again.game, g.game);
    EXPECT_EQ(*again.objective, g.objective);
  }
}

TEST(Sinks, Examples) {
  auto m = load_model("running.sg");
  auto s = sinks(m.game);
  std::vector<std::string> got;
  for (StateIndex i = 0; i < m.game.num_states(); ++i)
    if (s[i]) got.push_back(m.game.name(i));
  EXPECT_EQ(got, (std::vector<std::string>{"s", "t", "u", "w"}));
  auto loop = parse_game("sg 1\nstate a max\nstate b min\nact a x b:1\nact b y a:1\n");
  EXPECT_EQ(sinks(loop.game), (std::vector<bool>{false, false}));
}

TEST(Restrict, KeepsOrderAndOwners) {
  auto m = load_model("running.sg");
  const auto& g = m.game;
  EXPECT_EQ(restrict(g, ActionFilter::all(g)), g);

  auto f = ActionFilter::all(g);
  StateIndex r = g.index_of("r");
  f.keep[r] = {true, false, false};  // only r -> q
  auto h = restrict(g, f);
  EXPECT_EQ(h.actions(r).size(), 1u);
  EXPECT_EQ(h.actions(r)[0].label, "to_q");
  EXPECT_EQ(parse_game(serialize_game(h)).game, h);
  for (StateIndex s = 0; s < g.num_states(); ++s) {
    EXPECT_EQ(h.owner(s), g.owner(s));
    if (is_sink(g, s)) EXPECT_TRUE(is_sink(h, s));
  }

  f.keep[r] = {false, false, false};
  EXPECT_THROW(restrict(g, f), ModelError);
}

TEST(MakeAbsorbing, Cuts) {
  auto m = load_model("memory.sg");
  const auto& g = m.game;
  std::vector<bool> cut(3, false);
  cut[g.index_of("q")] = cut[g.index_of("r")] = true;
  auto h = make_absorbing(g, cut);
  auto s = sinks(h);
  EXPECT_FALSE(s[g.index_of("p")]);
  EXPECT_TRUE(s[g.index_of("q")]);
  EXPECT_TRUE(s[g.index_of("r")]);
  EXPECT_EQ(h.actions(g.index_of("q")).size(), 1u);
  EXPECT_EQ(h.actions(g.index_of("q"))[0].label, kSelfLoopLabel);

  EXPECT_EQ(make_absorbing(g, std::vector<bool>(3, false)), g);
  auto all = make_absorbing(g, std::vector<bool>(3, true));
  EXPECT_EQ(sinks(all), std::vector<bool>(3, true));
}

TEST(LexCompare, Order) {
  using testing::lv;
  EXPECT_TRUE(lex_compare(lv({q(1, 2), q(1, 4)}), lv({q(1, 2), q(0)})) > 0);
  EXPECT_TRUE(lex_compare(lv({q(0), q(1)}), lv({q(1, 2), q(1, 4)})) < 0);
  EXPECT_TRUE(lex_compare(lv({q(1, 3), q(2, 3)}), lv({q(1, 3), q(2, 3)})) == 0);
  EXPECT_THROW(lex_compare(lv({q(1)}), lv({q(1), q(0)})), ModelError);
}

TEST(LexCompare, ComplementReversesOrder) {
  std::vector<Rational> pool{q(0), q(1, 4), q(1, 2), q(1)};
  for (auto a : pool)
    for (auto b : pool)
      for (auto c : pool)
        for (auto d : pool) {
          LexVector<Rational> x{a, b}, y{c, d};
          LexVector<Rational> cx{1 - a, 1 - b}, cy{1 - c, 1 - d};
          EXPECT_EQ(lex_compare(x, y) <= 0, lex_compare(cx, cy) >= 0);
        }
}

TEST(Objective, Absorbing) {
  auto run = load_model("running.sg");
  EXPECT_TRUE(is_absorbing(*run.objective, run.game));
  auto mem = load_model("memory.sg");
  EXPECT_FALSE(is_absorbing(*mem.objective, mem.game));
  auto sinks_only = parse_game("sg 1\nstate a max\nstate b max\nobj reach a b\n");
  EXPECT_TRUE(is_absorbing(*sinks_only.objective, sinks_only.game));
}

TEST(Objective, Stages) {
  auto m = load_model("memory.sg");
  const auto& obj = *m.objective;
  EXPECT_EQ(stage_of_state(obj, m.game.index_of("q")), StageKey{}.with(0));
  EXPECT_EQ(stage_of_state(obj, m.game.index_of("p")), StageKey{});
  EXPECT_EQ(stage_of_state(obj, m.game.index_of("q")).to_string(), "1");

  auto one = stage_objective(obj, StageKey{}.with(0));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], obj[1]);
  auto two = stage_objective(obj, StageKey{}.with(1));
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0], obj[0]);
  EXPECT_EQ(stage_objective(obj, StageKey{}), obj);
  EXPECT_THROW(stage_objective(obj, StageKey{}.with(0).with(1)), ModelError);

  auto all = parse_game("sg 1\nstate a max\nobj reach a\nobj safe a\n");
  EXPECT_TRUE(stage_of_state(*all.objective, 0).is_full(2));
}

TEST(Objective, StageKeyText) {
  EXPECT_EQ(StageKey::parse("none", 3), StageKey{});
  EXPECT_EQ(StageKey::parse("1,3", 3), StageKey{}.with(0).with(2));
  EXPECT_THROW(StageKey::parse("4", 3), ParseError);
}

TEST(Objective, ThresholdVector) {
  auto v = parse_lex_vector("1/2, 0.25");
  EXPECT_EQ(v, (LexVector<Rational>{q(1, 2), q(1, 4)}));
  EXPECT_THROW(parse_lex_vector("1/2,x"), ParseError);
  EXPECT_THROW(parse_lex_vector("2"), ParseError);
}

}  // namespace
}  // namespace lexsg
