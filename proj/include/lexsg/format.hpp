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

// Reader and writer for the line-oriented .sg model format:
//
//   sg 1
//   state <name> <max|min>
//   act <state> <label> <succ>:<prob> [<succ>:<prob> ...]
//   obj <reach|safe> <state> [<state> ...]
//   init <state>
//
// '#' starts a comment. Probabilities are "a/b" or decimal literals and are
// read exactly.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexsg/game.hpp"
#include "lexsg/objective.hpp"

namespace lexsg {

struct Model {
  StochasticGame game;
  std::optional<LexObjective> objective;
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) words.emplace_back(line.substr(start, i - start));
  }
  return words;
}

}  // namespace detail

inline Model parse_game(std::string_view text) {
  struct Line {
    std::size_t number;
    std::vector<std::string> words;
  };
  std::vector<Line> lines;
  {
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(pos, end - pos);
      ++number;
      if (auto hash = raw.find('#'); hash != std::string_view::npos)
        raw = raw.substr(0, hash);
      auto words = detail::split_words(raw);
      if (!words.empty()) lines.push_back({number, std::move(words)});
      pos = end + 1;
    }
  }
  if (lines.empty() || lines.front().words != std::vector<std::string>{"sg", "1"})
    throw ParseError(lines.empty() ? 1 : lines.front().number,
                     "expected header 'sg 1'");

  GameBuilder builder;
  // States first, so actions may refer to states declared later.
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, w] = lines[k];
    if (w[0] != "state") continue;
    if (w.size() != 3 || (w[2] != "max" && w[2] != "min"))
      throw ParseError(number, "expected 'state <name> <max|min>'");
    try {
      builder.add_state(w[1], w[2] == "max" ? Player::Max : Player::Min);
    } catch (const ModelError& e) {
      throw ParseError(number, e.what());
    }
  }
  auto lookup = [&](std::size_t number, const std::string& name) {
    auto s = builder.find(name);
    if (!s) throw ParseError(number, "unknown state '" + name + "'");
    return *s;
  };

  std::vector<Objective> objectives;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, w] = lines[k];
    const std::string& kw = w[0];
    if (kw == "state") continue;
    if (kw == "act") {
      if (w.size() < 4)
        throw ParseError(number, "expected 'act <state> <label> <succ>:<prob> ...'");
      StateIndex s = lookup(number, w[1]);
      std::vector<Transition> dist;
      Rational sum = 0;
      for (std::size_t j = 3; j < w.size(); ++j) {
        auto colon = w[j].rfind(':');
        if (colon == std::string::npos)
          throw ParseError(number, "expected <succ>:<prob>, got '" + w[j] + "'");
        StateIndex t = lookup(number, w[j].substr(0, colon));
        auto p = try_parse_rational(std::string_view(w[j]).substr(colon + 1));
        if (!p) throw ParseError(number, "bad probability in '" + w[j] + "'");
        if (*p <= 0 || *p > 1)
          throw ParseError(number, "probability outside (0,1] in '" + w[j] + "'");
        for (const auto& tr : dist)
          if (tr.target == t)
            throw ParseError(number, "duplicate successor '" + w[j] + "'");
        sum += *p;
        dist.push_back({t, *p});
      }
      if (sum != 1)
        throw ParseError(number, "probability sum != 1 (" + sum.get_str() + ")");
      try {
        builder.add_action(s, w[2], std::move(dist));
      } catch (const ModelError& e) {
        throw ParseError(number, e.what());
      }
    } else if (kw == "obj") {
      if (w.size() < 2 || (w[1] != "reach" && w[1] != "safe"))
        throw ParseError(number, "expected 'obj <reach|safe> <state> ...'");
      Objective o{w[1] == "reach" ? ObjectiveKind::Reach : ObjectiveKind::Safe, {}};
      for (std::size_t j = 2; j < w.size(); ++j)
        o.target.push_back(lookup(number, w[j]));
      objectives.push_back(std::move(o));
    } else if (kw == "init") {
      if (w.size() != 2) throw ParseError(number, "expected 'init <state>'");
      builder.set_initial(lookup(number, w[1]));
    } else if (kw == "sg") {
      throw ParseError(number, "duplicate header");
    } else {
      throw ParseError(number, "unknown keyword '" + kw + "'");
    }
  }

  Model model{[&] {
                try {
                  return std::move(builder).build();
                } catch (const ModelError& e) {
                  throw ParseError(0, e.what());
                }
              }(),
              std::nullopt};
  if (!objectives.empty()) {
    try {
      model.objective = LexObjective(std::move(objectives));
    } catch (const ModelError& e) {
      throw ParseError(0, e.what());
    }
  }
  return model;
}

inline Model load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_game(buf.str());
}

inline std::string serialize_game(const StochasticGame& game,
                                  const LexObjective* objective = nullptr) {
  std::ostringstream out;
  out << "sg 1\n";
  for (const auto& st : game.states())
    out << "state " << st.name << ' ' << to_string(st.owner) << '\n';
  for (const auto& st : game.states())
    for (const auto& a : st.actions) {
      out << "act " << st.name << ' ' << a.label;
      for (const auto& t : a.distribution)
        out << ' ' << game.name(t.target) << ':' << t.probability.get_str();
      out << '\n';
    }
  if (objective)
    for (const auto& e : objective->entries()) {
      out << "obj " << to_string(e.kind);
      for (StateIndex s : e.target) out << ' ' << game.name(s);
      out << '\n';
    }
  if (game.initial()) out << "init " << game.name(*game.initial()) << '\n';
  return out.str();
}

inline std::string serialize_game(const StochasticGame& game,
                                  const LexObjective& objective) {
  return serialize_game(game, &objective);
}

}  // namespace lexsg
