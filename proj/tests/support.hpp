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


#pragma once

#include <string>
#include <vector>

#include "lexsg/lexsg.hpp"

#ifndef LEXSG_MODEL_DIR
#define LEXSG_MODEL_DIR "models"
#endif

namespace lexsg::testing {

inline Model load_model(const std::string& name) {
  return load_game(std::string(LEXSG_MODEL_DIR) + "/" + name);
}

inline Rational q(long a, long b = 1) { return make_rational(a, b); }

inline LexVector<Rational> lv(std::initializer_list<Rational> xs) { return xs; }

// Small random games, all within oracle range.
inline std::vector<GeneratedGame> small_corpus(int count) {
  std::vector<GeneratedGame> out;
  for (int k = 0; k < count; ++k) {
    FuzzSpec spec;
    spec.num_states = 3 + k % 4;
    spec.max_actions = 2 + (k / 4) % 2;
    spec.num_objectives = 1 + k % 3;
    spec.seed = 1000 + static_cast<std::uint64_t>(k);
    spec.max_pairs = 5000;
    out.push_back(gen_random(spec));
  }
  return out;
}

}  // namespace lexsg::testing
