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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neolex/analyze.hpp"
#include "neolex/candidates.hpp"
#include "neolex/filters.hpp"
#include "neolex/ingest.hpp"
#include "neolex/lexicon.hpp"
#include "neolex/llm.hpp"
#include "neolex/metrics.hpp"

namespace neolex {

// ---------------------------------------------------------------------------
// Configuration file
// ---------------------------------------------------------------------------

struct LlmEndpointConfig {
  ClientConfig client;
  std::string api_key_env;              // environment variable holding the key
  std::optional<std::filesystem::path> mock;  // scripted MockClient JSON
};

struct AppConfig {
  std::filesystem::path database = "neolex.db";
  std::optional<std::filesystem::path> feeds;

  std::optional<std::filesystem::path> dictionary;
  std::optional<std::filesystem::path> english;
  std::map<std::string, std::filesystem::path> references;  // frequency lists by name
  std::vector<std::string> extract_references = {"dictionary"};

  FilterConfig filter;
  std::vector<std::string> chain;  // empty: default chain

  std::string analyzer = "identity";  // identity | command | http
  std::string analyzer_command;
  std::string analyzer_url;
  std::chrono::milliseconds analyzer_timeout{10000};
  LemmaMode lemma_mode = LemmaMode::in_context;
  std::size_t context_limit = kDefaultContextLimit;
  std::size_t parallelism = 4;

  std::optional<LlmEndpointConfig> llm;
  std::size_t llm_parallelism = 4;
  std::optional<std::filesystem::path> llm_exemplars;
  std::optional<std::filesystem::path> llm_templates;
  std::optional<LlmEndpointConfig> judge;

  std::chrono::seconds ingest_timeout{20};
  std::size_t ingest_parallel_sources = 4;
  std::string ingest_user_agent = "neolex/0.1";
};

/// Parses `key = value` lines; '#' starts a comment line. Relative paths are
/// resolved against `base_dir`. Unknown keys and bad values throw ConfigError
/// naming the line.
AppConfig parse_app_config(std::string_view text, const std::filesystem::path& base_dir = {});
AppConfig load_app_config(const std::filesystem::path& path);

/// Every accepted key, for documentation and validation.
const std::vector<std::string>& app_config_keys();

// ---------------------------------------------------------------------------
// Resources
// ---------------------------------------------------------------------------

/// Lexicons and indexes loaded from an AppConfig.
class Resources {
 public:
  explicit Resources(const AppConfig& config);
  /// Takes already built lexicons (tests and bindings).
  Resources(std::optional<ReferenceLexicon> dictionary, std::optional<ReferenceLexicon> english,
            std::map<std::string, ReferenceLexicon> references, std::vector<std::string> extract_references = {"dictionary"});
  Resources(const Resources&) = delete;
  Resources& operator=(const Resources&) = delete;

  FilterLexicons filter_lexicons() const;
  /// Lexicons a token must be absent from to become a candidate. Throws
  /// ConfigError for an unknown name.
  std::vector<const ReferenceLexicon*> extraction_references() const;

  const ReferenceLexicon* dictionary() const noexcept { return dictionary_.get(); }
  const ReferenceLexicon* english() const noexcept { return english_.get(); }
  const ReferenceLexicon* reference(const std::string& name) const;

 private:
  void index();

  std::unique_ptr<ReferenceLexicon> dictionary_;
  std::unique_ptr<ReferenceLexicon> english_;
  std::map<std::string, std::unique_ptr<ReferenceLexicon>> references_;
  std::unique_ptr<EditDistanceIndex> edit_index_;
  std::vector<std::string> extract_names_;
  DiacriticFoldTable fold_;
};

std::unique_ptr<AnalyzerAdapter> make_analyzer(const AppConfig& config);
/// Mock client when a mock file is set, HTTP client otherwise.
std::unique_ptr<LlmClient> make_llm_client(const LlmEndpointConfig& config);

/// JSON lines of stored documents or of {"url", "text", "fetched_at"}
/// records, from which documents are built.
std::vector<Document> load_documents(const std::filesystem::path& path);

/// One base form per line; blank lines and '#' comments are skipped.
GoldSet load_gold_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Corpus to candidate groups
// ---------------------------------------------------------------------------

struct PipelineOptions {
  AnnotateOptions annotate;
  LemmaMode lemma_mode = LemmaMode::in_context;
  std::size_t context_limit = kDefaultContextLimit;
  std::size_t parallelism = 4;
};

struct PipelineResult {
  std::size_t documents = 0;
  std::size_t occurrences = 0;
  std::size_t candidate_forms = 0;
  std::size_t clusters = 0;
  std::size_t annotation_warnings = 0;
  std::vector<GroupingWarning> grouping_warnings;
  std::vector<CandidateGroup> groups;
};

/// Annotates the documents, extracts and accumulates candidates, merges
/// orthographic variants and groups them by lemma.
PipelineResult build_candidate_groups(const std::vector<Document>& documents, AnalyzerAdapter& adapter,
                                      const std::vector<const ReferenceLexicon*>& references,
                                      const PipelineOptions& options = {});

// ---------------------------------------------------------------------------
// Evaluation datasets
// ---------------------------------------------------------------------------

struct GroupingItem {
  std::string base_form;
  std::vector<std::string> forms;
  std::vector<std::string> examples;
};

/// JSON-lines or JSON array of {"base_form", "forms": [...], "examples": [...]}.
std::vector<GroupingItem> load_grouping_dataset(const std::filesystem::path& path);

/// Lemmatizes every form. In context mode each form is sent with the first
/// example containing it, or the first example when none does.
std::vector<LemmaGroup> lemmatize_grouping_items(const std::vector<GroupingItem>& items, AnalyzerAdapter& adapter,
                                                 LemmaMode mode);

struct CategoryEvalItem {
  std::string id;
  std::string neologism;
  std::string definition;
  std::vector<std::string> contexts;
  Sentiment sentiment = Sentiment::neutral;
  Domain domain = Domain::technology_science;
};

/// JSON-lines or JSON array of {"neologism"|"base_form", "definition",
/// "examples", "sentiment", "domain"}.
std::vector<CategoryEvalItem> load_category_dataset(const std::filesystem::path& path);

struct CategoryEvalReport {
  CategorySetup setup = CategorySetup::examples;
  CategorizationReport sentiment;
  CategorizationReport domain;
  std::vector<ItemError> errors;
};

/// Labels every item with the given setup; the reference definition is used
/// where the setup needs one. Failed items are reported and left out of the
/// scores.
CategoryEvalReport run_category_evaluation(const std::vector<CategoryEvalItem>& items, LlmClient& client,
                                           CategorySetup setup, const LlmOptions& options = {});

std::string to_json(const CategoryEvalReport& r);

}  // namespace neolex
