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

// Parameterized case-study games (hallway rescue, avoid the observer, a
// dice race) and a seeded random game generator for differential tests.
//
// Fixed dynamics constants:
//   hallway  healthy move succeeds with 1 - slip, else the robot stays;
//            entering a debris cell damages with probability `damage`;
//            the damaged robot only limps: 1/4 to a uniform neighbour;
//            the human stays with 1/2, else moves to a uniform neighbour,
//            except on its panic cell (its start) while the robot is
//            healthy, where Min moves it.
//   avoid    intruder moves succeed with 1 - slip; `search` finds the
//            item with probability `search`; `leave` exits from the exit
//            cell; within distance 1 Min moves the observer, otherwise it
//            steps uniformly among staying and its neighbours.
//   dice     each round Max then Min rolls a fair d6 or a steady die
//            (3 or 4); Max wins on a positive sum difference.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/lex.hpp"
#include "lexsg/objective.hpp"

namespace lexsg {

struct GridSpec {
  int width = 3;
  int height = 3;
  Rational slip{1, 10};
  Rational damage{1, 100};
  Rational search{1, 10};
  std::uint64_t seed = 0;

  void validate() const {
    if (width < 2 || height < 2) throw ModelError("grid must be at least 2x2");
    for (const auto* p : {&slip, &damage, &search})
      if (*p < 0 || *p > 1) throw ModelError("grid probability outside [0,1]");
  }
};

struct FuzzSpec {
  int num_states = 6;
  int max_actions = 3;
  int max_branching = 3;
  int num_objectives = 2;
  std::uint64_t seed = 0;
  std::optional<bool> absorbing;        // drawn from the seed when unset
  std::uint64_t max_pairs = 3000;       // strategy pairs on the product

  void validate() const {
    if (num_states < 2 || max_actions < 1 || max_branching < 1 ||
        num_objectives < 1)
      throw ModelError("fuzz spec fields must be positive (>= 2 states)");
    if (num_objectives > 3)
      throw ModelError("fuzz games have at most 3 objectives");
  }
};

struct GeneratedGame {
  StochasticGame game;
  LexObjective objective;
};

namespace detail {

struct Cell {
  int x, y;
  bool operator==(const Cell&) const = default;
};

struct Grid {
  int w, h;
  int id(Cell c) const { return c.y * w + c.x; }
  Cell at(int i) const { return {i % w, i / w}; }
  int size() const { return w * h; }

  // In the order north, east, south, west.
  std::vector<std::pair<std::string, int>> moves(int i) const {
    Cell c = at(i);
    std::vector<std::pair<std::string, int>> out;
    if (c.y + 1 < h) out.push_back({"north", id({c.x, c.y + 1})});
    if (c.x + 1 < w) out.push_back({"east", id({c.x + 1, c.y})});
    if (c.y > 0) out.push_back({"south", id({c.x, c.y - 1})});
    if (c.x > 0) out.push_back({"west", id({c.x - 1, c.y})});
    return out;
  }

  int distance(int a, int b) const {
    Cell p = at(a), q = at(b);
    return std::abs(p.x - q.x) + std::abs(p.y - q.y);
  }

  std::string name(int i) const {
    Cell c = at(i);
    return std::to_string(c.x) + "_" + std::to_string(c.y);
  }
};

inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t k) {
  return rng() % k;
}

// Merges equal targets; builders reject repeated successors.
class DistBuilder {
 public:
  void add(StateIndex t, const Rational& p) {
    if (p != 0) mass_[t] += p;
  }
  std::vector<Transition> build() const {
    std::vector<Transition> out;
    for (const auto& [t, p] : mass_) out.push_back({t, p});
    return out;
  }

 private:
  std::map<StateIndex, Rational> mass_;
};

// Declares states lazily by name so that only reachable ones exist.
class LazyGame {
 public:
  template <class Expand>
  StateIndex get(const std::string& name, Player owner, Expand&& expand) {
    if (auto s = b_.find(name)) return *s;
    StateIndex s = b_.add_state(name, owner);
    pending_.push_back({s, std::forward<Expand>(expand)});
    return s;
  }

  GameBuilder& builder() { return b_; }

  void run() {
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      auto job = std::move(pending_[k]);
      job.second(job.first);
    }
  }

 private:
  GameBuilder b_;
  std::vector<std::pair<StateIndex, std::function<void(StateIndex)>>> pending_;
};

inline std::vector<int> debris_cells(const Grid& g, int robot, int human,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> free;
  for (int i = 0; i < g.size(); ++i)
    if (i != robot && i != human) free.push_back(i);
  std::size_t count = std::max<std::size_t>(1, g.size() / 4);
  std::vector<int> out;
  while (out.size() < count && !free.empty()) {
    std::size_t k = pick(rng, free.size());
    out.push_back(free[k]);
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Product-wide count of strategy pairs (Max choices times Min choices).
inline long double strategy_pairs(const StochasticGame& game,
                                  const LexObjective& obj) {
  auto prod = stage_product(game, obj);
  long double c = 1;
  for (StateIndex p = 0; p < prod.game.num_states(); ++p)
    c *= static_cast<long double>(prod.game.actions(p).size());
  return c;
}

}  // namespace detail

// Robot (Max) rescuing a wandering human. Objective (Reach saved,
// Safe damaged): the damaged states are every state of the damaged copy.
inline GeneratedGame gen_hallway(const GridSpec& spec) {
  spec.validate();
  detail::Grid g{spec.width, spec.height};
  const int start = 0, panic = g.size() - 1;
  auto debris = detail::debris_cells(g, start, panic, spec.seed);
  auto is_debris = [&](int c) {
    return std::binary_search(debris.begin(), debris.end(), c);
  };
  const Rational limp{1, 4};
  const Rational half{1, 2};

  detail::LazyGame lg;
  StateIndex saved = lg.builder().add_state("saved", Player::Max);
  StateIndex saved_hurt = lg.builder().add_state("saved_damaged", Player::Max);

  std::function<StateIndex(int, int, bool)> robot;
  std::function<StateIndex(int, int)> panic_state;

  // Distribution over the next robot states once the robot stands on r
  // and the human on h, the human moving randomly.
  auto human_random = [&](detail::DistBuilder& d, int r, int h, bool hurt,
                          const Rational& p) {
    auto nb = g.moves(h);
    Rational step = p * half / static_cast<long>(nb.size());
    d.add(robot(r, h, hurt), p * half);
    for (const auto& [label, c] : nb)
      d.add(c == r ? (hurt ? saved_hurt : saved) : robot(r, c, hurt), step);
  };
  // The robot has just arrived at r (hurt or not) while the human is at h.
  auto arrive = [&](detail::DistBuilder& d, int r, int h, bool hurt,
                    const Rational& p) {
    if (r == h) {
      d.add(hurt ? saved_hurt : saved, p);
    } else if (h == panic && !hurt) {
      d.add(panic_state(r, h), p);
    } else {
      human_random(d, r, h, hurt, p);
    }
  };

  robot = [&](int r, int h, bool hurt) {
    std::string name = std::string(hurt ? "d" : "h") + "_r" + g.name(r) +
                       "_p" + g.name(h);
    return lg.get(name, Player::Max, [&, r, h, hurt](StateIndex s) {
      if (hurt) {
        auto nb = g.moves(r);
        detail::DistBuilder d;
        Rational step = limp / static_cast<long>(nb.size());
        for (const auto& [label, c] : nb) arrive(d, c, h, true, step);
        arrive(d, r, h, true, 1 - limp);
        lg.builder().add_action(s, "limp", d.build());
        return;
      }
      for (const auto& [label, c] : g.moves(r)) {
        detail::DistBuilder d;
        Rational ok = 1 - spec.slip;
        if (is_debris(c)) {
          arrive(d, c, h, true, ok * spec.damage);
          arrive(d, c, h, false, ok * (1 - spec.damage));
        } else {
          arrive(d, c, h, false, ok);
        }
        arrive(d, r, h, false, spec.slip);
        lg.builder().add_action(s, label, d.build());
      }
    });
  };
  panic_state = [&](int r, int h) {
    return lg.get("m_r" + g.name(r) + "_p" + g.name(h), Player::Min,
                  [&, r, h](StateIndex s) {
                    for (const auto& [label, c] : g.moves(h)) {
                      detail::DistBuilder d;
                      d.add(c == r ? saved : robot(r, c, false), 1);
                      lg.builder().add_action(s, label, d.build());
                    }
                  });
  };

  StateIndex init = robot(start, panic, false);
  lg.run();
  auto& b = lg.builder();
  b.set_initial(init);
  auto game = std::move(b).build();
  std::vector<StateIndex> hurt_states;
  for (StateIndex s = 0; s < game.num_states(); ++s)
    if (game.name(s).rfind("d_", 0) == 0 || s == saved_hurt)
      hurt_states.push_back(s);
  LexObjective obj({Objective{ObjectiveKind::Reach, {saved, saved_hurt}},
                    Objective{ObjectiveKind::Safe, hurt_states}});
  return {std::move(game), std::move(obj)};
}

// Intruder (Max) against an observer (Min). Objective (Safe caught,
// Reach exited, Reach item): item states are those where it was found.
inline GeneratedGame gen_avoid(const GridSpec& spec) {
  spec.validate();
  detail::Grid g{spec.width, spec.height};
  const int start = 0, exit = g.size() - 1;
  int observer0;
  {
    std::mt19937_64 rng(spec.seed);
    std::vector<int> free;
    for (int i = 0; i < g.size(); ++i)
      if (i != start && i != exit && g.distance(i, start) > 1) free.push_back(i);
    if (free.empty())
      for (int i = 0; i < g.size(); ++i)
        if (i != start) free.push_back(i);
    observer0 = free[detail::pick(rng, free.size())];
  }

  detail::LazyGame lg;
  auto& b = lg.builder();
  StateIndex caught = b.add_state("caught", Player::Max);
  StateIndex out = b.add_state("out", Player::Max);
  StateIndex out_item = b.add_state("out_item", Player::Max);

  std::function<StateIndex(int, int, bool)> intruder;
  std::function<StateIndex(int, int, bool)> watch;

  // Intruder now on i, observer on o.
  auto observe = [&](detail::DistBuilder& d, int i, int o, bool item,
                     const Rational& p) {
    if (i == o) {
      d.add(caught, p);
    } else if (g.distance(i, o) <= 1) {
      d.add(watch(i, o, item), p);
    } else {
      auto nb = g.moves(o);
      Rational step = p / static_cast<long>(nb.size() + 1);
      d.add(intruder(i, o, item), step);
      for (const auto& [label, c] : nb)
        d.add(c == i ? caught : intruder(i, c, item), step);
    }
  };

  intruder = [&](int i, int o, bool item) {
    std::string name = std::string(item ? "f" : "x") + "_i" + g.name(i) +
                       "_o" + g.name(o);
    return lg.get(name, Player::Max, [&, i, o, item](StateIndex s) {
      for (const auto& [label, c] : g.moves(i)) {
        detail::DistBuilder d;
        observe(d, c, o, item, 1 - spec.slip);
        observe(d, i, o, item, spec.slip);
        lg.builder().add_action(s, label, d.build());
      }
      if (!item) {
        detail::DistBuilder d;
        observe(d, i, o, true, spec.search);
        observe(d, i, o, false, 1 - spec.search);
        lg.builder().add_action(s, "search", d.build());
      }
      if (i == exit) {
        detail::DistBuilder d;
        d.add(item ? out_item : out, 1);
        lg.builder().add_action(s, "leave", d.build());
      }
    });
  };
  watch = [&](int i, int o, bool item) {
    std::string name = std::string(item ? "wf" : "wx") + "_i" + g.name(i) +
                       "_o" + g.name(o);
    return lg.get(name, Player::Min, [&, i, o, item](StateIndex s) {
      detail::DistBuilder stay;
      stay.add(intruder(i, o, item), 1);
      lg.builder().add_action(s, "wait", stay.build());
      for (const auto& [label, c] : g.moves(o)) {
        detail::DistBuilder d;
        d.add(c == i ? caught : intruder(i, c, item), 1);
        lg.builder().add_action(s, label, d.build());
      }
    });
  };

  StateIndex init = intruder(start, observer0, false);
  lg.run();
  b.set_initial(init);
  auto game = std::move(b).build();
  std::vector<StateIndex> items{out_item};
  for (StateIndex s = 0; s < game.num_states(); ++s) {
    const auto& nm = game.name(s);
    if (nm.rfind("f_", 0) == 0 || nm.rfind("wf_", 0) == 0) items.push_back(s);
  }
  LexObjective obj({Objective{ObjectiveKind::Safe, {caught}},
                    Objective{ObjectiveKind::Reach, {out, out_item}},
                    Objective{ObjectiveKind::Reach, items}});
  return {std::move(game), std::move(obj)};
}

// Dice race over `rounds` rounds. Objective (Reach win, Reach draw); both
// target sets are sinks.
inline GeneratedGame gen_dice(int rounds) {
  if (rounds < 1) throw ModelError("dice needs at least one round");
  detail::LazyGame lg;
  auto& b = lg.builder();
  StateIndex win = b.add_state("win", Player::Max);
  StateIndex draw = b.add_state("draw", Player::Max);
  StateIndex lose = b.add_state("lose", Player::Max);
  const std::vector<std::pair<std::string, std::vector<std::pair<int, Rational>>>>
      dice{{"fair",
            {{1, {1, 6}}, {2, {1, 6}}, {3, {1, 6}}, {4, {1, 6}}, {5, {1, 6}},
             {6, {1, 6}}}},
           {"steady", {{3, {1, 2}}, {4, {1, 2}}}}};

  std::function<StateIndex(int, bool, int)> turn;
  turn = [&](int round, bool max_turn, int diff) -> StateIndex {
    if (round == rounds) return diff > 0 ? win : diff == 0 ? draw : lose;
    std::string name = std::string(max_turn ? "a" : "b") + std::to_string(round) +
                       "_" + (diff < 0 ? "m" + std::to_string(-diff)
                                       : std::to_string(diff));
    return lg.get(name, max_turn ? Player::Max : Player::Min,
                  [&, round, max_turn, diff](StateIndex s) {
                    for (const auto& [label, faces] : dice) {
                      detail::DistBuilder d;
                      for (const auto& [face, p] : faces) {
                        if (max_turn) {
                          d.add(turn(round, false, diff + face), p);
                        } else {
                          d.add(turn(round + 1, true, diff - face), p);
                        }
                      }
                      lg.builder().add_action(s, label, d.build());
                    }
                  });
  };
  StateIndex init = turn(0, true, 0);
  lg.run();
  b.set_initial(init);
  auto game = std::move(b).build();
  LexObjective obj({Objective{ObjectiveKind::Reach, {win}},
                    Objective{ObjectiveKind::Reach, {draw}}});
  return {std::move(game), std::move(obj)};
}

// Random game whose states are all reachable from the initial state s0.
// Denominators are at most 8. Draws are repeated (deterministically) until
// the strategy space on the stage product is within `max_pairs`.
inline GeneratedGame gen_random(const FuzzSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  using detail::pick;
  const int n = spec.num_states;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    bool absorbing = spec.absorbing ? *spec.absorbing : pick(rng, 2) == 0;
    int num_sinks = absorbing ? 1 + static_cast<int>(pick(rng, 2))
                              : static_cast<int>(pick(rng, 2));
    GameBuilder b;
    for (int s = 0; s < n; ++s)
      b.add_state("s" + std::to_string(s),
                  pick(rng, 2) == 0 ? Player::Max : Player::Min);
    for (int s = 0; s < n - num_sinks; ++s) {
      int acts = 1 + static_cast<int>(pick(rng, spec.max_actions));
      for (int a = 0; a < acts; ++a) {
        int branch = 1 + static_cast<int>(
                             pick(rng, std::min(spec.max_branching, n)));
        std::vector<StateIndex> targets;
        while (static_cast<int>(targets.size()) < branch) {
          StateIndex t = pick(rng, n);
          if (std::find(targets.begin(), targets.end(), t) == targets.end())
            targets.push_back(t);
        }
        long den = branch + static_cast<long>(pick(rng, 9 - branch));
        std::vector<long> cuts{0, den};
        while (static_cast<int>(cuts.size()) < branch + 1) {
          long c = 1 + static_cast<long>(pick(rng, den - 1));
          if (std::find(cuts.begin(), cuts.end(), c) == cuts.end())
            cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<Transition> dist;
        for (int k = 0; k < branch; ++k)
          dist.push_back({targets[k], make_rational(cuts[k + 1] - cuts[k], den)});
        b.add_action(s, "a" + std::to_string(a), std::move(dist));
      }
    }
    b.set_initial(0);
    auto game = std::move(b).build();

    std::vector<bool> seen(n, false);
    std::vector<StateIndex> queue{0};
    seen[0] = true;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (const auto& a : game.actions(queue[k]))
        for (const auto& t : a.distribution)
          if (!seen[t.target]) {
            seen[t.target] = true;
            queue.push_back(t.target);
          }
    if (static_cast<int>(queue.size()) != n) continue;

    std::vector<Objective> entries;
    for (int i = 0; i < spec.num_objectives; ++i) {
      Objective o{pick(rng, 2) == 0 ? ObjectiveKind::Reach : ObjectiveKind::Safe,
                  {}};
      if (absorbing) {
        for (int s = n - num_sinks; s < n; ++s)
          if (pick(rng, 2) == 0) o.target.push_back(s);
        if (o.target.empty()) o.target.push_back(n - 1 - pick(rng, num_sinks));
      } else {
        int size = 1 + static_cast<int>(pick(rng, 2));
        while (static_cast<int>(o.target.size()) < size) {
          StateIndex t = pick(rng, n);
          if (std::find(o.target.begin(), o.target.end(), t) == o.target.end())
            o.target.push_back(t);
        }
      }
      entries.push_back(std::move(o));
    }
    LexObjective obj(std::move(entries));
    if (detail::strategy_pairs(game, obj) >
        static_cast<long double>(spec.max_pairs))
      continue;
    return {std::move(game), std::move(obj)};
  }
  throw ModelError("no random game within the strategy budget");
}

}  // namespace lexsg
