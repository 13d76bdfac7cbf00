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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "neolex/analyze.hpp"
#include "neolex/labels.hpp"
#include "neolex/lexicon.hpp"

namespace neolex {

/// Number of distinct context sentences kept per candidate.
inline constexpr std::size_t kDefaultContextLimit = 10;

/// A sampled usage sentence. Ordered by (timestamp, doc_id, sentence_index, sentence).
struct Context {
  std::string sentence;
  std::string doc_id;
  Timestamp timestamp{};
  std::size_t sentence_index = 0;

  bool operator==(const Context&) const = default;
  std::strong_ordering operator<=>(const Context& o) const;
};

struct CandidateStats {
  std::string key;
  std::map<std::string, std::uint64_t> surface_variants;
  std::set<std::string> doc_ids;
  std::uint64_t term_freq = 0;
  std::uint64_t lowercase_count = 0;
  std::uint64_t non_ne_count = 0;
  std::uint64_t polish_context_count = 0;
  std::map<std::string, std::uint64_t> domain_counts;  // host_domain -> occurrences
  std::map<Timestamp, std::uint64_t> daily_counts;     // start of UTC day -> occurrences
  std::vector<Context> contexts;                       // sorted, distinct sentences
  std::optional<Timestamp> first_seen;
  std::optional<Timestamp> last_seen;

  std::size_t doc_freq() const noexcept { return doc_ids.size(); }
  std::size_t unique_domains() const noexcept { return domain_counts.size(); }
  /// Most frequent surface variant; ties go to the smaller string.
  std::string dominant_surface() const;

  /// Adds the counters of `other` into this record (key is kept).
  void merge(const CandidateStats& other, std::size_t context_limit = kDefaultContextLimit);

  bool operator==(const CandidateStats&) const = default;
};

/// Merge of several records under a new key.
CandidateStats merge_all(std::string key, const std::vector<CandidateStats>& parts,
                         std::size_t context_limit = kDefaultContextLimit);

/// Inserts into a sorted context list keeping the first `limit` distinct sentences.
void merge_contexts(std::vector<Context>& into, const std::vector<Context>& from, std::size_t limit);

/// One occurrence of a candidate in an annotated document.
struct Occurrence {
  std::string key;
  std::string surface;
  CapClass cap = CapClass::lower;
  bool proper_noun = false;
  std::string doc_id;
  std::string host_domain;
  Timestamp timestamp{};
  std::size_t sentence_index = 0;
  std::string sentence;
  bool polish_context = false;
};

struct CandidateToken {
  std::size_t token_index = 0;
  std::string key;
};

/// Tokens whose normalized surface is absent from every reference. Tokens
/// without any letter are never candidates. Throws PreconditionError when
/// `references` is empty.
std::vector<CandidateToken> extract_candidates(const AnnotatedDocument& doc,
                                               const std::vector<const ReferenceLexicon*>& references);

/// Builds occurrence records for the given candidate tokens.
std::vector<Occurrence> make_occurrences(const AnnotatedDocument& doc, const std::vector<CandidateToken>& candidates);

/// Per-key accumulation of occurrences. Partial accumulators merge
/// associatively and commutatively.
class CandidateAccumulator {
 public:
  explicit CandidateAccumulator(std::size_t context_limit = kDefaultContextLimit) : context_limit_(context_limit) {}

  void add(const Occurrence& occurrence);
  void add_all(const std::vector<Occurrence>& occurrences);
  void merge(const CandidateAccumulator& other);

  const std::map<std::string, CandidateStats>& stats() const noexcept { return stats_; }
  const CandidateStats* find(std::string_view key) const;
  std::size_t size() const noexcept { return stats_.size(); }
  std::size_t context_limit() const noexcept { return context_limit_; }

 private:
  std::size_t context_limit_;
  std::map<std::string, CandidateStats> stats_;
};

/// Single-record view of one occurrence.
CandidateStats stats_of(const Occurrence& occurrence, std::size_t context_limit = kDefaultContextLimit);

// ---------------------------------------------------------------------------
// Orthographic consolidation
// ---------------------------------------------------------------------------

/// Normalized form with hyphens and whitespace removed. Idempotent.
std::string consolidation_key(std::string_view form);

struct VariantCluster {
  std::string key;                     // consolidation key
  std::vector<CandidateStats> members; // one per form, sorted by key
  CandidateStats aggregate;            // key = consolidation key

  std::uint64_t term_freq() const noexcept { return aggregate.term_freq; }
};

/// Clusters forms sharing a consolidation key. Adjacent token pairs in
/// `bigram_source` whose concatenation matches an existing key are counted
/// as a spaced member ("tusko bus").
std::vector<VariantCluster> consolidate_orthographic_variants(const CandidateAccumulator& stats,
                                                              const std::vector<AnnotatedDocument>& bigram_source);

// ---------------------------------------------------------------------------
// Lemma grouping
// ---------------------------------------------------------------------------

enum class LemmaMode { context_free, in_context };

std::string to_string(LemmaMode m);
LemmaMode parse_lemma_mode(std::string_view s);

struct CandidateGroup {
  std::string id;         // equals base_form
  std::string base_form;
  std::vector<CandidateStats> members;         // per form, sorted by key
  std::map<std::string, std::string> lemmas;   // member key -> lemma
  CandidateStats aggregate;                    // key = base_form
  ReviewStatus review_status = ReviewStatus::pending;
  std::optional<Definition> definition;
  std::optional<SentimentLabel> sentiment;
  std::optional<DomainLabel> domain;

  std::vector<std::string> member_keys() const;
  /// Merge of all member stats, for verification against `aggregate`.
  CandidateStats recompute_aggregate(std::size_t context_limit = kDefaultContextLimit) const;

  bool operator==(const CandidateGroup&) const = default;
};

struct GroupingWarning {
  std::string form;
  std::string message;
};

/// Lemmatizes every member form and merges clusters that share a lemma.
/// Context-free mode sends the dominant surface alone; in-context mode sends
/// it with each stored context and keeps the majority lemma (ties to the
/// smaller string). A missing lemma or an adapter failure yields the form
/// itself. base_form is the lemma with the largest summed term_freq, ties to
/// the smaller string. Output is sorted by base_form.
std::vector<CandidateGroup> group_by_lemma(const std::vector<VariantCluster>& clusters, AnalyzerAdapter& adapter,
                                           LemmaMode mode, std::vector<GroupingWarning>* warnings = nullptr,
                                           std::size_t context_limit = kDefaultContextLimit);

// ---------------------------------------------------------------------------
// JSON records
// ---------------------------------------------------------------------------

std::string stats_to_json(const CandidateStats& stats);
CandidateStats stats_from_json(std::string_view json);
std::string group_to_json(const CandidateGroup& group);
CandidateGroup group_from_json(std::string_view json);

}  // namespace neolex
