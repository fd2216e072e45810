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

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lexsg/rational.hpp"

namespace lexsg::detail {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

// Solves x = P x + b exactly by sparse Gaussian elimination in index order.
// Throws Error if I - P is singular.
inline std::vector<Rational> solve_fixed_point(const std::vector<SparseRow>& p,
                                               std::vector<Rational> b) {
  const std::size_t m = p.size();
  std::vector<std::map<std::size_t, Rational>> row(m);
  std::vector<std::set<std::size_t>> users(m);
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [j, c] : p[i]) {
      if (c == 0) continue;
      row[i][j] += c;
      if (j != i) users[j].insert(i);
    }

  for (std::size_t k = 0; k < m; ++k) {
    auto& rk = row[k];
    if (auto self = rk.find(k); self != rk.end()) {
      Rational d = 1 - self->second;
      rk.erase(self);
      if (d == 0) throw Error("singular linear system");
      if (d != 1) {
        for (auto& [j, c] : rk) c /= d;
        b[k] /= d;
      }
    }
    for (std::size_t i : users[k]) {
      if (i <= k) continue;
      auto& ri = row[i];
      auto it = ri.find(k);
      if (it == ri.end()) continue;
      Rational f = it->second;
      ri.erase(it);
      b[i] += f * b[k];
      for (const auto& [j, c] : rk) {
        Rational& slot = ri[j];
        slot += f * c;
        if (slot == 0) {
          ri.erase(j);
        } else if (j != i) {
          users[j].insert(i);
        }
      }
    }
  }

  std::vector<Rational> x(m);
  for (std::size_t k = m; k-- > 0;) {
    Rational v = b[k];
    for (const auto& [j, c] : row[k]) v += c * x[j];
    x[k] = v;
  }
  return x;
}

}  // namespace lexsg::detail
