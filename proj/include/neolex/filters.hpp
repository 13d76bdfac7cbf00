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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neolex/candidates.hpp"
#include "neolex/lexicon.hpp"
#include "neolex/llm.hpp"
#include "neolex/metrics.hpp"

namespace neolex {

struct FilterConfig {
  std::size_t min_len = 3;
  std::size_t max_len = 20;
  std::size_t min_doc_freq = 5;
  std::size_t min_lowercase = 5;
  std::size_t min_non_ne = 5;
  std::size_t min_polish_contexts = 5;
  double min_norm_edit_distance = 0.5;
  std::size_t min_unique_domains = 1;
  std::vector<std::string> enabled_references;  // frequency-list names, in chain order
  bool llm_filter_enabled = true;
  bool reject_compounds = false;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
  bool operator==(const FilterConfig&) const = default;
};

/// Filter identifiers.
namespace filter_id {
inline constexpr std::string_view length = "length";
inline constexpr std::string_view min_length = "min-length";
inline constexpr std::string_view max_length = "max-length";
inline constexpr std::string_view digits = "digits";
inline constexpr std::string_view invalid_chars = "invalid-chars";
inline constexpr std::string_view doc_freq = "doc-freq";
inline constexpr std::string_view lowercase = "lowercase";
inline constexpr std::string_view non_ne = "non-ne";
inline constexpr std::string_view edit_distance = "edit-distance";
inline constexpr std::string_view spelling = "spelling";
inline constexpr std::string_view english = "english-dictionary";
inline constexpr std::string_view reference = "reference-corpora";  // every enabled reference
inline constexpr std::string_view reference_prefix = "reference:";  // "reference:<name>" for one list
inline constexpr std::string_view unique_domains = "unique-domains";
inline constexpr std::string_view compound = "compound";
inline constexpr std::string_view llm = "llm";
}  // namespace filter_id

/// Every id accepted by apply_filter (reference:<name> ids aside).
const std::vector<std::string>& known_filter_ids();
bool is_known_filter_id(std::string_view id);

/// Row label of a stage, e.g. "+ Freq ≥ 5" or "+ Not in NKJP".
std::string stage_label(std::string_view id, const FilterConfig& config);

/// Incremental order: min-length, max-length, digits, doc-freq, lowercase,
/// non-ne, edit-distance, spelling, english-dictionary, one reference:<name>
/// per enabled reference, then llm when enabled.
std::vector<std::string> default_chain(const FilterConfig& config);

struct FilterDecision {
  std::string filter_id;
  bool passed = true;
  bool undetermined = false;  // LLM stage could not decide; the group is kept
  std::string reason;         // non-empty when rejected or undetermined
  std::optional<std::string> evidence;

  bool operator==(const FilterDecision&) const = default;
};

/// Resources the filters consult. Pointers are borrowed; a filter that needs
/// a missing resource throws PreconditionError.
struct FilterLexicons {
  const ReferenceLexicon* dictionary = nullptr;     // spelling, compound
  const EditDistanceIndex* edit_index = nullptr;   // edit-distance
  const ReferenceLexicon* english = nullptr;       // english-dictionary
  std::map<std::string, const ReferenceLexicon*> references;  // by name
  DiacriticFoldTable fold;
};

/// True iff some code point occurs at least three times in a row.
bool has_triple_repeat(std::string_view word);

/// A split of `word` into two dictionary words of at least 3 code points.
std::optional<std::pair<std::string, std::string>> compound_split(const ReferenceLexicon& dictionary,
                                                                  std::string_view word);

/// Pure predicate for one non-LLM filter. Throws PreconditionError for an
/// unknown id, for "llm", or when a required lexicon is missing.
FilterDecision apply_filter(const CandidateGroup& group, std::string_view id, const FilterConfig& config,
                            const FilterLexicons& lexicons);

struct LlmExemplar {
  std::string word;
  std::vector<std::string> examples;
};

struct LlmExemplars {
  std::vector<LlmExemplar> positive;  // exactly 3
  std::vector<LlmExemplar> negative;  // exactly 3

  void validate() const;
};

/// JSON {"positive": [{"word", "examples"}], "negative": [...]}.
LlmExemplars load_llm_exemplars(const std::filesystem::path& path);
LlmExemplars parse_llm_exemplars(std::string_view json);

/// Number of contexts shown for the target word.
inline constexpr std::size_t kLlmFilterContexts = 5;

std::string llm_filter_prompt(const CandidateGroup& group, const LlmExemplars& exemplars,
                              std::size_t max_contexts = kLlmFilterContexts,
                              const PromptTemplates& templates = PromptTemplates::defaults());

/// Asks the client whether the group is a neologism. Client failures and
/// responses without the marker (after retries) yield an undetermined,
/// passing decision. Throws PreconditionError when the group has no context.
FilterDecision llm_filter(const CandidateGroup& group, const LlmExemplars& exemplars, LlmClient& client,
                          std::size_t max_contexts = kLlmFilterContexts,
                          const PromptTemplates& templates = PromptTemplates::defaults());

struct GoldSet {
  std::set<std::string> forms;  // normalized base forms
  bool exhaustive = true;       // false: recall is not reported

  static GoldSet from_words(const std::vector<std::string>& words, bool exhaustive = true);
};

/// Gold entry matched by a group (its base form or one of its member keys).
std::optional<std::string> gold_match(const CandidateGroup& group, const GoldSet& gold);

/// P/R/F1 of a survivor set against gold.
StageReport evaluate_stage(std::string label, std::string id, const std::vector<CandidateGroup>& survivors,
                           const std::optional<GoldSet>& gold);

struct LlmStageSetup {
  LlmClient* client = nullptr;
  LlmExemplars exemplars;
  const PromptTemplates* templates = nullptr;
  std::size_t parallelism = 4;
  std::size_t max_contexts = kLlmFilterContexts;
};

struct ChainOptions {
  std::optional<GoldSet> gold;
  std::optional<LlmStageSetup> llm;  // required when the chain contains "llm"
  std::size_t parallelism = 0;       // pure filters; 0 = hardware concurrency
};

struct RejectedGroup {
  CandidateGroup group;
  FilterDecision decision;  // first failing filter
};

struct ChainResult {
  std::vector<CandidateGroup> survivors;
  std::vector<RejectedGroup> rejected;
  std::vector<StageReport> stages;                            // "No filter" first
  std::map<std::string, FilterDecision> flags;                // group id -> undetermined LLM or compound flag
  std::map<std::string, std::vector<FilterDecision>> audit;   // group id -> every evaluated decision
};

/// Applies the filters cumulatively in `order`, recording a StageReport after
/// each one. An empty order yields only the "No filter" stage.
ChainResult run_chain(const std::vector<CandidateGroup>& groups, const std::vector<std::string>& order,
                      const FilterConfig& config, const FilterLexicons& lexicons, const ChainOptions& options = {});

std::string to_json(const FilterDecision& d);

}  // namespace neolex
