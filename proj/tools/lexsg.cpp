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


// lexsg command-line front end.
//
//   lexsg solve  model.sg [--mode vi|exact] [--state s] [--strategy-out f]
//   lexsg decide model.sg --threshold 1/2,1/4 [--state s]
//   lexsg check  model.sg --strategy f
//   lexsg gen    --kind hallway|avoid|dice|random [generator flags] [-o f]
//   lexsg oracle model.sg [--max-pairs k]
//
// Exit status: 0 success, 2 usage error, 3 input error, 4 solver limit.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexsg/lexsg.hpp"

namespace {

using namespace lexsg;

constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kLimit = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string mode = "vi";
  double epsilon = 1e-8;
  double action_epsilon = 1e-6;
  std::string state;
  std::string threshold;
  std::string strategy_out;
  std::string strategy;
  std::string format = "text";
  std::string output;

  std::string kind = "random";
  int width = 3;
  int height = 3;
  int rounds = 3;
  std::string slip = "1/10";
  std::string damage = "1/100";
  std::string search = "1/10";
  std::optional<std::uint64_t> seed;
  int states = 6;
  int actions = 3;
  int branching = 3;
  int objectives = 2;
  std::string absorbing = "auto";

  std::uint64_t max_pairs = 2'000'000;
};

struct Loaded {
  StochasticGame game;
  LexObjective objective;
};

Loaded load(const Options& o) {
  auto m = load_game(o.input);
  if (!m.objective) throw ModelError("model has no obj lines");
  return {std::move(m.game), std::move(*m.objective)};
}

SolverConfig config(const Options& o) {
  SolverConfig cfg;
  cfg.mode = o.mode == "exact" ? Mode::Exact : Mode::Vi;
  cfg.vi_epsilon = o.epsilon;
  cfg.action_epsilon = o.action_epsilon;
  try {
    cfg.validate();
  } catch (const ModelError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// Selected state, or every state when --state is absent.
std::vector<StateIndex> selected(const Options& o, const StochasticGame& g) {
  std::vector<StateIndex> out;
  if (o.state.empty()) {
    for (StateIndex s = 0; s < g.num_states(); ++s) out.push_back(s);
  } else {
    auto s = g.find(o.state);
    if (!s) throw ModelError("unknown state '" + o.state + "'");
    out.push_back(*s);
  }
  return out;
}

StateIndex start_state(const Options& o, const StochasticGame& g) {
  if (!o.state.empty()) return selected(o, g).front();
  if (!g.initial()) throw UsageError("no --state given and the model has no init");
  return *g.initial();
}

std::size_t stage_count(std::size_t n) { return (std::size_t{1} << n) - 1; }

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t)
      .count();
}

template <class V>
std::vector<std::vector<std::string>> value_strings(
    const LexValueAssignment<V>& v) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : v.values) {
    auto& r = out.emplace_back();
    for (const auto& x : row) r.push_back(to_string(x));
  }
  return out;
}

template <class V>
void print_values(const Options& o, const StochasticGame& g,
                  const LexValueAssignment<V>& v,
                  const std::vector<StateIndex>& states) {
  for (StateIndex s : states) {
    if (o.format == "lines") {
      std::cout << "value " << g.name(s);
      for (const auto& x : v[s]) std::cout << ' ' << to_string(x);
      std::cout << '\n';
    } else {
      std::cout << g.name(s) << ": " << format_lex_vector(v[s]) << '\n';
    }
  }
}

template <class V>
int solve(const Options& o) {
  auto [game, obj] = load(o);
  auto cfg = config(o);
  auto states = selected(o, game);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = solve_lex<V>(game, obj, cfg);
  double secs = seconds_since(t0);

  if (!o.strategy_out.empty()) {
    auto vals = value_strings(rep.values);
    std::ofstream out(o.strategy_out);
    if (!out) throw ParseError(0, "cannot write '" + o.strategy_out + "'");
    out << write_strategy(game, rep.strategy, &vals);
  }

  const auto& st = rep.stats;
  std::string stages = std::to_string(st.stages_explored) + "/" +
                       std::to_string(stage_count(obj.size()));
  if (o.format == "lines") {
    print_values(o, game, rep.values, states);
    std::cout << "stages " << stages << '\n';
    return 0;
  }
  std::cout << "mode " << to_string(cfg.mode) << ", " << game.num_states()
            << " states, objective (";
  for (std::size_t i = 0; i < obj.size(); ++i)
    std::cout << (i ? ", " : "") << to_string(obj[i].kind);
  std::cout << ")\n";
  print_values(o, game, rep.values, states);
  std::cout << "stages " << stages << '\n';
  std::cout << "calls primary " << st.primary_calls << ", qro " << st.qro_calls
            << ", strategy " << st.strategy_calls << '\n';
  for (const auto& [key, ss] : st.stages)
    std::cout << "stage " << key.to_string() << ": average actions "
              << to_string(ss.average_actions) << " -> "
              << to_string(ss.restricted_average_actions)
              << (ss.simple ? " (single objective)" : "") << '\n';
  std::cout << "time " << to_string(secs) << " s\n";
  return 0;
}

template <class V>
int decide_cmd(const Options& o) {
  auto [game, obj] = load(o);
  auto cfg = config(o);
  LexVector<Rational> threshold;
  try {
    threshold = parse_lex_vector(o.threshold);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--threshold: ") + e.what());
  }
  StateIndex s0 = start_state(o, game);
  std::cout << (decide<V>(game, obj, s0, threshold, cfg) ? "true" : "false")
            << '\n';
  return 0;
}

// achieved >=lex claimed, components within `tol` counting as equal.
template <class V>
bool meets(const LexVector<V>& achieved, const LexVector<Rational>& claimed,
           double tol) {
  for (std::size_t i = 0; i < claimed.size(); ++i) {
    if constexpr (kExact<V>) {
      if (achieved[i] != claimed[i]) return achieved[i] > claimed[i];
    } else {
      double c = to_double(claimed[i]);
      if (achieved[i] > c + tol) return true;
      if (achieved[i] < c - tol) return false;
    }
  }
  return true;
}

template <class V>
int check(const Options& o) {
  auto [game, obj] = load(o);
  auto cfg = config(o);
  std::ifstream in(o.strategy);
  if (!in) throw ParseError(0, "cannot open '" + o.strategy + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto file = read_strategy(buf.str(), game, obj);
  auto achieved = evaluate_strategy<V>(game, obj, file.strategy, cfg);
  const double tol = kExact<V> ? 0.0 : 1e-6;
  bool pass = true;
  std::size_t compared = 0;
  for (StateIndex s : selected(o, game)) {
    std::cout << game.name(s) << ": achieved " << format_lex_vector(achieved[s]);
    auto it = file.claimed.find(s);
    if (it != file.claimed.end()) {
      bool ok = meets(achieved[s], it->second, tol);
      pass = pass && ok;
      ++compared;
      std::cout << " claimed " << format_lex_vector(it->second)
                << (ok ? " ok" : " FAIL");
    }
    std::cout << '\n';
  }
  if (compared == 0)
    std::cout << "no claimed values\n";
  else
    std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return 0;
}

Rational probability(const std::string& flag, const std::string& text) {
  auto r = try_parse_rational(text);
  if (!r) throw UsageError(flag + ": not a number: '" + text + "'");
  return *r;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LEXSG_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("LEXSG_SEED is not an integer: '") + env + "'");
    }
  }
  return 1;
}

int gen(const Options& o) {
  std::uint64_t seed = o.seed ? *o.seed : default_seed();
  GeneratedGame g;
  try {
    if (o.kind == "hallway" || o.kind == "avoid") {
      GridSpec spec;
      spec.width = o.width;
      spec.height = o.height;
      spec.slip = probability("--slip", o.slip);
      spec.damage = probability("--damage", o.damage);
      spec.search = probability("--search", o.search);
      spec.seed = seed;
      g = o.kind == "hallway" ? gen_hallway(spec) : gen_avoid(spec);
    } else if (o.kind == "dice") {
      if (o.rounds < 1) throw UsageError("--rounds must be positive");
      g = gen_dice(o.rounds);
    } else {
      FuzzSpec spec;
      spec.num_states = o.states;
      spec.max_actions = o.actions;
      spec.max_branching = o.branching;
      spec.num_objectives = o.objectives;
      spec.seed = seed;
      if (o.absorbing != "auto") spec.absorbing = o.absorbing == "yes";
      g = gen_random(spec);
    }
  } catch (const ModelError& e) {
    throw UsageError(e.what());
  }
  std::string text = serialize_game(g.game, g.objective);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) throw ParseError(0, "cannot write '" + o.output + "'");
    out << text;
    std::cout << "wrote " << o.output << " (" << g.game.num_states()
              << " states)\n";
  }
  return 0;
}

template <class V>
int oracle(const Options& o) {
  auto [game, obj] = load(o);
  auto cfg = config(o);
  auto states = selected(o, game);
  OracleLimits limits;
  limits.max_pairs = o.max_pairs;
  OracleStats stats;
  auto t0 = std::chrono::steady_clock::now();
  auto truth = brute_force_lex(game, obj, limits, &stats,
                               o.state.empty() ? nullptr : &states);
  double oracle_secs = seconds_since(t0);
  auto rep = solve_lex<V>(game, obj, cfg);

  V worst = 0;
  for (StateIndex s : states)
    for (std::size_t i = 0; i < obj.size(); ++i) {
      V d = from_rational<V>(truth[s][i]) - rep.values[s][i];
      if (d < 0) d = -d;
      if (worst < d) worst = d;
    }
  LexValueAssignment<V> as_v;
  for (const auto& row : truth.values) {
    auto& r = as_v.values.emplace_back();
    for (const auto& x : row) r.push_back(from_rational<V>(x));
  }
  if (o.format == "lines") {
    for (StateIndex s : states) {
      std::cout << "oracle " << game.name(s);
      for (const auto& x : truth[s]) std::cout << ' ' << to_string(x);
      std::cout << "\nsolver " << game.name(s);
      for (const auto& x : rep.values[s]) std::cout << ' ' << to_string(x);
      std::cout << '\n';
    }
  } else {
    std::cout << "oracle (" << stats.pairs << " strategy pairs, "
              << stats.product_states << " product states, "
              << to_string(oracle_secs) << " s)\n";
    print_values(o, game, as_v, states);
    std::cout << "solver (" << to_string(cfg.mode) << ")\n";
    print_values(o, game, rep.values, states);
  }
  std::cout << "discrepancy " << to_string(worst) << '\n';
  return 0;
}

template <class F>
int dispatch(F&& run) {
  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LimitError& e) {
    std::string what = e.what();
    if (what.find("limits exceeded") == std::string::npos)
      what = "limits exceeded: " + what;
    std::cerr << "error: " << what << '\n';
    return kLimit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Lexicographic reachability and safety in stochastic games"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("model", o.input, "Model file (.sg)")->required();
    cmd->add_option("--mode", o.mode, "vi or exact")
        ->check(CLI::IsMember({"vi", "exact"}));
    cmd->add_option("--epsilon", o.epsilon, "Value-iteration stopping threshold");
    cmd->add_option("--action-epsilon", o.action_epsilon,
                    "Tolerance for optimal actions in vi mode");
    cmd->add_option("--state", o.state, "Restrict output to this state");
    cmd->add_option("--format", o.format, "text or lines")
        ->check(CLI::IsMember({"text", "lines"}));
  };

  auto* solve_cmd = app.add_subcommand("solve", "Compute lex-values and a strategy");
  common(solve_cmd);
  solve_cmd->add_option("--strategy-out", o.strategy_out, "Write the strategy here");

  auto* decide_cmd_ = app.add_subcommand("decide", "Is the lex-value >= threshold?");
  common(decide_cmd_);
  decide_cmd_->add_option("--threshold", o.threshold, "e.g. 1/2,0.25")->required();

  auto* check_cmd = app.add_subcommand("check", "Evaluate a strategy file");
  common(check_cmd);
  check_cmd->add_option("--strategy", o.strategy, "Strategy file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare with brute force");
  common(oracle_cmd);
  oracle_cmd->add_option("--max-pairs", o.max_pairs,
                         "Strategy pairs allowed per start state");

  auto* gen_cmd = app.add_subcommand("gen", "Write a generated model");
  gen_cmd->add_option("--kind", o.kind, "hallway, avoid, dice or random")
      ->check(CLI::IsMember({"hallway", "avoid", "dice", "random"}));
  gen_cmd->add_option("-o,--output", o.output, "Output file (default stdout)");
  gen_cmd->add_option("--width", o.width);
  gen_cmd->add_option("--height", o.height);
  gen_cmd->add_option("--slip", o.slip);
  gen_cmd->add_option("--damage", o.damage);
  gen_cmd->add_option("--search", o.search);
  gen_cmd->add_option("--rounds", o.rounds);
  gen_cmd->add_option("--seed", o.seed, "Defaults to $LEXSG_SEED, else 1");
  gen_cmd->add_option("--states", o.states);
  gen_cmd->add_option("--actions", o.actions);
  gen_cmd->add_option("--branching", o.branching);
  gen_cmd->add_option("--objectives", o.objectives);
  gen_cmd->add_option("--absorbing", o.absorbing, "auto, yes or no")
      ->check(CLI::IsMember({"auto", "yes", "no"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  // The oracle is exact, so its comparison defaults to exact mode too.
  if (*oracle_cmd && oracle_cmd->get_option("--mode")->count() == 0)
    o.mode = "exact";
  bool exact = o.mode == "exact";
  auto pick = [&](auto vi, auto ex) {
    return dispatch([&] { return exact ? ex(o) : vi(o); });
  };
  if (*solve_cmd) return pick(solve<double>, solve<Rational>);
  if (*decide_cmd_) return pick(decide_cmd<double>, decide_cmd<Rational>);
  if (*check_cmd) return pick(check<double>, check<Rational>);
  if (*oracle_cmd) return pick(oracle<double>, oracle<Rational>);
  return dispatch([&] { return gen(o); });
}
