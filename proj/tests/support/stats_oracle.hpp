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

// Batch recomputation of candidate statistics straight from an occurrence
// list. Uses only the record types, none of the library's merge logic.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "neolex/candidates.hpp"

namespace neolex::testing {

inline std::map<std::string, CandidateStats> naive_stats(const std::vector<Occurrence>& occurrences,
                                                         std::size_t context_limit) {
  std::map<std::string, std::vector<const Occurrence*>> by_key;
  for (const auto& o : occurrences) by_key[o.key].push_back(&o);

  std::map<std::string, CandidateStats> out;
  for (const auto& [key, occ] : by_key) {
    CandidateStats s;
    s.key = key;
    std::vector<Context> all;
    for (const auto* o : occ) {
      s.surface_variants[o->surface] += 1;
      s.doc_ids.insert(o->doc_id);
      s.term_freq += 1;
      if (o->cap == CapClass::lower) s.lowercase_count += 1;
      if (!o->proper_noun) s.non_ne_count += 1;
      if (o->polish_context) s.polish_context_count += 1;
      s.domain_counts[o->host_domain] += 1;
      s.daily_counts[std::chrono::floor<std::chrono::days>(o->timestamp)] += 1;
      if (!s.first_seen || o->timestamp < *s.first_seen) s.first_seen = o->timestamp;
      if (!s.last_seen || o->timestamp > *s.last_seen) s.last_seen = o->timestamp;
      all.push_back({o->sentence, o->doc_id, o->timestamp, o->sentence_index});
    }
    // For each distinct sentence its smallest record; then the smallest N of those.
    std::map<std::string, Context> min_by_text;
    for (const auto& c : all) {
      auto it = min_by_text.find(c.sentence);
      if (it == min_by_text.end() || c < it->second) min_by_text[c.sentence] = c;
    }
    std::vector<Context> distinct;
    for (const auto& [_, c] : min_by_text) distinct.push_back(c);
    std::sort(distinct.begin(), distinct.end());
    if (distinct.size() > context_limit) distinct.resize(context_limit);
    s.contexts = distinct;
    out[key] = s;
  }
  return out;
}

}  // namespace neolex::testing
