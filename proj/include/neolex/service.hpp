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
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neolex/filters.hpp"
#include "neolex/llm.hpp"
#include "neolex/store.hpp"

namespace neolex {

// ---------------------------------------------------------------------------
// CSV (RFC 4180)
// ---------------------------------------------------------------------------

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);
/// Rows joined with CRLF line ends, each row terminated.
std::string write_csv(const std::vector<std::vector<std::string>>& rows);
/// Throws ParseError on an unterminated quoted field or stray quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

inline const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> h = {"base_form",      "variants",  "doc_freq",      "term_freq",
                                             "unique_domains", "first_seen", "last_seen",    "review_status",
                                             "definition",     "sentiment", "domain",        "sample_context"};
  return h;
}

/// Export row of one group.
std::vector<std::string> csv_row(const CandidateGroup& group);

// ---------------------------------------------------------------------------
// Workbench
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxPageSize = 500;

/// Which groups of the latest run to show: "all", "survivors", "rejected",
/// "flagged", or a filter id (groups rejected by that filter).
struct Selection {
  std::optional<ReviewStatus> status;
  std::string stage = "all";
};

struct ListQuery {
  std::size_t page = 0;  // zero-based
  std::size_t page_size = 50;
  std::string sort_key = "base_form";  // optional leading '-' for descending
  Selection selection;
};

struct CandidateSummary {
  std::string id;
  std::string base_form;
  std::size_t variants = 0;
  std::size_t doc_freq = 0;
  std::uint64_t term_freq = 0;
  std::size_t unique_domains = 0;
  std::optional<Timestamp> first_seen;
  std::optional<Timestamp> last_seen;
  ReviewStatus review_status = ReviewStatus::pending;
  bool survived = true;
  std::optional<FilterDecision> rejected_by;
  std::optional<FilterDecision> flag;
  std::optional<std::string> definition;
  std::optional<Sentiment> sentiment;
  std::optional<Domain> domain;
};

struct CandidatePage {
  std::size_t total = 0;
  std::size_t page = 0;
  std::size_t page_size = 0;
  std::vector<CandidateSummary> items;
  std::vector<StageReport> stages;
};

/// Sort keys accepted by list_candidates.
const std::vector<std::string>& sort_keys();

struct TrendSeries {
  std::string group_id;
  std::vector<std::pair<Timestamp, std::uint64_t>> buckets;  // UTC days, ascending
};

struct CandidateDetail {
  CandidateGroup group;
  CandidateSummary summary;
  std::vector<ReviewDecision> decisions;
};

struct WorkbenchOptions {
  FilterLexicons lexicons;
  std::vector<std::string> chain;  // empty: default_chain(config)
  std::vector<std::string> skip;   // ids left out of the default chain
  LlmClient* llm = nullptr;        // definitions, categories and the LLM filter stage
  std::optional<LlmExemplars> exemplars;
  PromptTemplates templates = PromptTemplates::defaults();
  std::size_t llm_parallelism = 4;
  std::size_t filter_parallelism = 0;
  std::function<Timestamp()> clock;
};

/// Review workbench over a store. Reads share a lock; reruns and other
/// mutations take it exclusively.
class Workbench {
 public:
  Workbench(SqliteStore& store, WorkbenchOptions options, FilterConfig config = {});

  SqliteStore& store() noexcept { return store_; }
  FilterConfig filter_config() const;
  std::vector<std::string> chain() const;

  /// Stores new groups, carrying review state and artifacts over by id.
  void replace_groups(std::vector<CandidateGroup> groups);
  void set_gold(std::optional<GoldSet> gold);

  /// Runs the chain over the stored groups with the current config.
  std::vector<StageReport> rerun();
  /// Validates, then reruns with `config`; on any error the old config stays.
  std::vector<StageReport> update_filter_config_and_rerun(const FilterConfig& config);
  std::vector<StageReport> stage_reports() const;
  std::optional<StoredRun> latest_run() const;

  CandidatePage list_candidates(const ListQuery& query) const;
  CandidateDetail candidate(const std::string& id) const;

  ReviewDecision set_review_status(const std::string& id, ReviewStatus status, const std::string& reviewer);

  /// Inclusive day window; defaults to the group's first and last day.
  TrendSeries frequency_trend(const std::string& id, std::optional<Timestamp> from = std::nullopt,
                              std::optional<Timestamp> to = std::nullopt) const;

  std::string export_csv(const Selection& selection = {}) const;

  Definition request_definition(const std::string& id, int shots);
  CategoryArtifact request_categories(const std::string& id, CategorySetup setup);

 private:
  std::vector<CandidateGroup> select(const Selection& s, const std::optional<StoredRun>& run) const;
  CandidateSummary summarize(const CandidateGroup& g, const std::optional<StoredRun>& run) const;
  CandidateGroup require_group(const std::string& id) const;
  Timestamp now() const;

  SqliteStore& store_;
  WorkbenchOptions options_;
  FilterConfig config_;
  std::optional<GoldSet> gold_;
  mutable std::shared_mutex mu_;
};

std::string to_json(const CandidateSummary& s);
std::string to_json(const CandidatePage& p);
std::string to_json(const TrendSeries& t);
std::string to_json(const CandidateDetail& d);
std::string to_json(const CategoryArtifact& c);

}  // namespace neolex
