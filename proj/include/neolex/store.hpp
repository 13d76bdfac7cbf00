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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "neolex/candidates.hpp"
#include "neolex/filters.hpp"
#include "neolex/ingest.hpp"
#include "neolex/labels.hpp"
#include "neolex/llm.hpp"
#include "neolex/metrics.hpp"

namespace neolex {

class StoreError : public Error {
 public:
  using Error::Error;
};

struct ReviewDecision {
  std::string group_id;
  ReviewStatus status = ReviewStatus::pending;
  std::string reviewer;
  Timestamp decided_at{};
  std::int64_t version = 0;

  bool operator==(const ReviewDecision&) const = default;
};

/// Outcome of one filter-chain run over the stored groups.
struct StoredRun {
  std::int64_t id = 0;
  Timestamp created_at{};
  FilterConfig config;
  std::vector<std::string> chain;
  std::vector<StageReport> stages;
  std::set<std::string> survivors;
  std::map<std::string, FilterDecision> rejections;  // group id -> first failing filter
  std::map<std::string, FilterDecision> flags;       // group id -> undetermined or compound flag

  bool operator==(const StoredRun&) const = default;
};

struct CategoryArtifact {
  SentimentLabel sentiment;
  DomainLabel domain;
  std::string model_name;
  Timestamp created_at{};

  bool operator==(const CategoryArtifact&) const = default;
};

/// Embedded transactional store for documents, candidate groups, review
/// decisions, filter runs and LLM artifacts. Values are JSON. Thread-safe.
class SqliteStore : public DocumentStore, public CompletionCache {
 public:
  /// Opens or creates the database; ":memory:" gives a private in-memory store.
  explicit SqliteStore(const std::filesystem::path& path);
  ~SqliteStore() override;
  SqliteStore(const SqliteStore&) = delete;
  SqliteStore& operator=(const SqliteStore&) = delete;

  // DocumentStore
  bool insert(const Document& doc) override;
  bool contains(std::string_view id) const override;
  std::optional<Document> get(std::string_view id) const override;
  std::vector<Document> all() const override;
  std::size_t size() const override;

  // CompletionCache
  std::optional<std::string> get(const std::string& prompt_hash) override;
  void put(const std::string& prompt_hash, const std::string& model, const std::string& response) override;
  std::size_t cache_size() const;

  /// Replaces the candidate groups in one transaction.
  void replace_groups(const std::vector<CandidateGroup>& groups);
  void put_group(const CandidateGroup& group);
  std::optional<CandidateGroup> group(const std::string& id) const;
  std::vector<CandidateGroup> groups() const;  // sorted by id
  std::size_t group_count() const;

  /// Appends a decision with the next version for the group and updates the
  /// group's review status, atomically. Throws NotFoundError for an unknown group.
  ReviewDecision append_decision(const std::string& group_id, ReviewStatus status, const std::string& reviewer,
                                 Timestamp decided_at);
  std::vector<ReviewDecision> decisions(const std::string& group_id) const;

  /// Stores a run and the config that produced it, atomically; returns the run id.
  std::int64_t save_run(const StoredRun& run);
  std::optional<StoredRun> latest_run() const;

  void save_gold(const std::optional<GoldSet>& gold);
  std::optional<GoldSet> load_gold() const;

  void save_definition(const std::string& group_id, const Definition& d);
  std::optional<Definition> definition(const std::string& group_id, int shots) const;
  void save_categories(const std::string& group_id, const CategoryArtifact& c);
  std::optional<CategoryArtifact> categories(const std::string& group_id, CategorySetup setup) const;

 private:
  struct Db;
  std::unique_ptr<Db> db_;
  mutable std::recursive_mutex mu_;
};

std::string filter_config_to_json(const FilterConfig& c);
/// Missing keys keep their defaults; unknown keys throw ConfigError naming the field.
FilterConfig filter_config_from_json(std::string_view json, const FilterConfig& base = {});

std::string to_json(const ReviewDecision& d);
std::string run_to_json(const StoredRun& r);
StoredRun run_from_json(std::string_view json);

}  // namespace neolex
