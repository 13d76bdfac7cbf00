// Copyright 2026 The neolex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's own distance or metric code.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace neolex::testing {

/// Full-matrix Wagner-Fischer over code points.
inline std::size_t naive_levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
    }
  }
  return d[a.size()][b.size()];
}

/// Minimum of edits / max(len) over every dictionary form, by full scan.
inline double naive_min_normalized(const std::u32string& word, const std::vector<std::u32string>& dict) {
  double best = 1.0;
  for (const auto& f : dict) {
    const std::size_t m = std::max(word.size(), f.size());
    const double d = m == 0 ? 0.0 : static_cast<double>(naive_levenshtein(word, f)) / static_cast<double>(m);
    best = std::min(best, d);
  }
  return best;
}

struct NaivePrf {
  std::size_t tp = 0, fp = 0, fn = 0;
  double p = 0, r = 0, f1 = 0;
};

inline NaivePrf naive_prf(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  NaivePrf out;
  for (const auto& x : predicted) (gold.count(x) ? out.tp : out.fp)++;
  for (const auto& x : gold) {
    if (!predicted.count(x)) ++out.fn;
  }
  out.p = out.tp + out.fp == 0 ? 0.0 : double(out.tp) / double(out.tp + out.fp);
  out.r = out.tp + out.fn == 0 ? 0.0 : double(out.tp) / double(out.tp + out.fn);
  out.f1 = out.p + out.r == 0 ? 0.0 : 2 * out.p * out.r / (out.p + out.r);
  return out;
}

struct NaiveGroupForm {
  std::string predicted;
  std::string gold;
};

struct NaiveGroupCounts {
  std::size_t g = 0, s = 0, k = 0, forms = 0, correct_forms = 0;
};

/// Literal reading of the group metrics: S counts groups whose predicted
/// lemmas are all equal; K counts groups whose predicted lemmas all equal gold.
inline NaiveGroupCounts naive_group_accuracy(const std::vector<std::vector<NaiveGroupForm>>& groups) {
  NaiveGroupCounts c;
  c.g = groups.size();
  for (const auto& grp : groups) {
    bool all_same = true;
    bool all_gold = true;
    for (std::size_t i = 0; i < grp.size(); ++i) {
      for (std::size_t j = 0; j < grp.size(); ++j) {
        if (grp[i].predicted != grp[j].predicted) all_same = false;
      }
      if (grp[i].predicted != grp[i].gold) all_gold = false;
      ++c.forms;
      if (grp[i].predicted == grp[i].gold) ++c.correct_forms;
    }
    if (all_same) ++c.s;
    if (all_gold) ++c.k;
  }
  return c;
}

}  // namespace neolex::testing
