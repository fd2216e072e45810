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

std::vector<ObjectiveKind> kinds(const LexObjective& obj) {
  std::vector<ObjectiveKind> out;
  for (const auto& e : obj.entries()) out.push_back(e.kind);
  return out;
}

void round_trips(const GeneratedGame& g) {
  auto again = parse_game(serialize_game(g.game, g.objective));
  EXPECT_EQ(again.game, g.game);
  EXPECT_EQ(*again.objective, g.objective);
}

TEST(Hallway, Shape) {
  GridSpec spec;
  spec.width = spec.height = 5;
  auto g = gen_hallway(spec);
  round_trips(g);
  EXPECT_EQ(kinds(g.objective),
            (std::vector<ObjectiveKind>{ObjectiveKind::Reach, ObjectiveKind::Safe}));
  EXPECT_TRUE(g.game.initial());
  EXPECT_EQ(serialize_game(g.game, g.objective),
            serialize_game(gen_hallway(spec).game, g.objective));
  spec.seed = 9;
  EXPECT_NE(serialize_game(gen_hallway(spec).game), serialize_game(g.game));
}

TEST(Hallway, SmallestInstanceFitsOracle) {
  GridSpec spec;
  spec.width = spec.height = 2;
  auto g = gen_hallway(spec);
  round_trips(g);
  std::vector<StateIndex> start{*g.game.initial()};
  OracleStats stats;
  auto truth = brute_force_lex(g.game, g.objective, {}, &stats, &start);
  auto rep = solve_lex<Rational>(g.game, g.objective);
  EXPECT_EQ(truth[start[0]], rep.values[start[0]]);
}

TEST(Avoid, Shape) {
  GridSpec spec;
  spec.width = spec.height = 4;
  auto g = gen_avoid(spec);
  round_trips(g);
  EXPECT_EQ(kinds(g.objective),
            (std::vector<ObjectiveKind>{ObjectiveKind::Safe, ObjectiveKind::Reach,
                                        ObjectiveKind::Reach}));
  EXPECT_EQ(serialize_game(gen_avoid(spec).game), serialize_game(g.game));
}

TEST(Grid, Validation) {
  GridSpec spec;
  spec.width = 1;
  EXPECT_THROW(gen_hallway(spec), ModelError);
  spec = {};
  spec.slip = Rational(3, 2);
  EXPECT_THROW(gen_avoid(spec), ModelError);
}

TEST(Dice, AbsorbingSingleStage) {
  for (int rounds : {1, 3}) {
    auto g = gen_dice(rounds);
    round_trips(g);
    EXPECT_TRUE(is_absorbing(g.objective, g.game));
    auto rep = solve_lex<double>(g.game, g.objective);
    EXPECT_EQ(rep.stats.stages_explored, 1u);
  }
  EXPECT_THROW(gen_dice(0), ModelError);
}

TEST(Random, Basic) {
  FuzzSpec spec;
  spec.num_states = 6;
  spec.max_actions = 2;
  spec.seed = 1;
  auto g = gen_random(spec);
  round_trips(g);
  EXPECT_EQ(g.game.num_states(), 6u);
  EXPECT_EQ(serialize_game(gen_random(spec).game), serialize_game(g.game));
  for (StateIndex s = 0; s < 6; ++s) {
    EXPECT_LE(g.game.actions(s).size(), 2u);
    for (const auto& a : g.game.actions(s))
      for (const auto& t : a.distribution)
        EXPECT_LE(t.probability.get_den(), 8);
  }

  spec.num_objectives = 1;
  EXPECT_EQ(gen_random(spec).objective.size(), 1u);
  spec.num_objectives = 4;
  EXPECT_THROW(gen_random(spec), ModelError);
}

TEST(Random, AllStatesReachable) {
  for (const auto& g : testing::small_corpus(30)) {
    std::vector<bool> seen(g.game.num_states(), false);
    std::vector<StateIndex> todo{*g.game.initial()};
    seen[todo[0]] = true;
    while (!todo.empty()) {
      StateIndex s = todo.back();
      todo.pop_back();
      for (const auto& a : g.game.actions(s))
        for (const auto& t : a.distribution)
          if (!seen[t.target]) {
            seen[t.target] = true;
            todo.push_back(t.target);
          }
    }
    EXPECT_EQ(seen, std::vector<bool>(g.game.num_states(), true));
  }
}

TEST(Random, AbsorbingFlag) {
  FuzzSpec spec;
  spec.absorbing = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    auto g = gen_random(spec);
    EXPECT_TRUE(is_absorbing(g.objective, g.game));
  }
}

}  // namespace
}  // namespace lexsg
