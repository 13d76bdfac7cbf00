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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neolex/labels.hpp"
#include "neolex/text.hpp"

namespace neolex {

class LlmError : public Error {
 public:
  using Error::Error;
};

/// A response that did not contain the expected marker; keeps the raw text.
class LlmParseError : public LlmError {
 public:
  LlmParseError(const std::string& what, std::string raw) : LlmError(what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

struct ClientConfig {
  std::string endpoint;  // full chat-completions URL
  std::string model = "model";
  std::string api_key;   // sent as a bearer token when non-empty
  double temperature = 0.6;
  double top_p = 0.95;
  int max_tokens = 512;
  std::chrono::seconds timeout{120};
  int retries = 2;

  /// Throws ConfigError when temperature or top_p is outside (0, 1] or retries < 0.
  void validate() const;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  /// One completion for a single user message. Throws LlmError on failure.
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string model_name() const = 0;
  /// Extra attempts after a failed or unparseable response.
  virtual int retries() const { return 2; }
};

/// OpenAI-style chat-completions endpoint.
class HttpChatClient : public LlmClient {
 public:
  explicit HttpChatClient(ClientConfig config);
  std::string complete(const std::string& prompt) override;
  std::string model_name() const override { return config_.model; }
  int retries() const override { return config_.retries; }

  /// Request body sent for a prompt.
  std::string request_body(const std::string& prompt) const;
  /// Extracts choices[0].message.content; throws LlmError otherwise.
  static std::string parse_response(std::string_view body);

 private:
  ClientConfig config_;
};

/// Offline client answering from a table keyed by sha256(prompt), then by
/// substring rules in insertion order, then a default.
class MockClient : public LlmClient {
 public:
  MockClient() = default;
  /// JSON: {"model": str?, "default": str?, "responses": {sha256: str}?,
  ///        "rules": [{"contains": str, "response": str}]?}
  static std::unique_ptr<MockClient> from_file(const std::filesystem::path& path);
  static std::unique_ptr<MockClient> from_json(std::string_view json);

  void set_response(const std::string& prompt, std::string response);
  void add_rule(std::string contains, std::string response);
  void set_default(std::optional<std::string> response) { default_ = std::move(response); }

  std::string complete(const std::string& prompt) override;
  std::string model_name() const override { return model_; }
  int retries() const override { return retries_; }
  void set_retries(int r) { retries_ = r; }

  std::size_t calls() const noexcept { return calls_; }

 private:
  std::string model_ = "mock";
  std::map<std::string, std::string> by_hash_;
  std::vector<std::pair<std::string, std::string>> rules_;
  std::optional<std::string> default_;
  int retries_ = 2;
  std::atomic<std::size_t> calls_{0};
};

/// Client backed by a function; convenient for scripted tests.
class FunctionClient : public LlmClient {
 public:
  using Fn = std::function<std::string(const std::string& prompt)>;
  explicit FunctionClient(Fn fn, std::string model = "scripted", int retries = 2)
      : fn_(std::move(fn)), model_(std::move(model)), retries_(retries) {}
  std::string complete(const std::string& prompt) override {
    ++calls_;
    return fn_(prompt);
  }
  std::string model_name() const override { return model_; }
  int retries() const override { return retries_; }
  std::size_t calls() const noexcept { return calls_; }

 private:
  Fn fn_;
  std::string model_;
  int retries_;
  std::atomic<std::size_t> calls_{0};
};

/// Storage for completed prompts, keyed by sha256(prompt).
class CompletionCache {
 public:
  virtual ~CompletionCache() = default;
  virtual std::optional<std::string> get(const std::string& prompt_hash) = 0;
  virtual void put(const std::string& prompt_hash, const std::string& model, const std::string& response) = 0;
};

class MemoryCompletionCache : public CompletionCache {
 public:
  std::optional<std::string> get(const std::string& prompt_hash) override;
  void put(const std::string& prompt_hash, const std::string& model, const std::string& response) override;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

/// Serves repeated prompts from a cache. Only responses that the caller
/// accepted (see commit()) should be reused, so completions are stored by
/// the helpers below after a successful parse.
class CachingClient : public LlmClient {
 public:
  CachingClient(LlmClient& inner, CompletionCache& cache) : inner_(inner), cache_(cache) {}
  std::string complete(const std::string& prompt) override;
  std::string model_name() const override { return inner_.model_name(); }
  int retries() const override { return inner_.retries(); }
  void commit(const std::string& prompt, const std::string& response);

 private:
  LlmClient& inner_;
  CompletionCache& cache_;
};

/// Calls the client until `parse` succeeds, at most 1 + client.retries()
/// times. Transport errors and LlmParseError are retried; the last error is
/// rethrown. A CachingClient stores the accepted response.
template <typename Parse>
auto complete_parsed(LlmClient& client, const std::string& prompt, Parse&& parse)
    -> decltype(parse(std::string{})) {
  const int attempts = 1 + std::max(0, client.retries());
  for (int i = 0;; ++i) {
    try {
      const std::string response = client.complete(prompt);
      auto value = parse(response);
      if (auto* caching = dynamic_cast<CachingClient*>(&client)) caching->commit(prompt, response);
      return value;
    } catch (const LlmError&) {
      if (i + 1 >= attempts) throw;
    }
  }
}

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

/// Template text. Placeholders are `{name}`; `{#list}...{/list}` repeats its
/// body per item with `{index}` and `{text}`; `{?name}...{/name}` is kept
/// only when `name` is non-empty.
struct PromptTemplates {
  std::string definition;
  std::string pointwise;
  std::string pairwise;
  std::string sentiment;
  std::string domain;
  std::string filter;

  /// Built-in Polish templates.
  static PromptTemplates defaults();
  /// Reads <dir>/{definition,pointwise,pairwise,sentiment,domain,filter}.txt;
  /// missing files keep the built-in text.
  static PromptTemplates load(const std::filesystem::path& dir);
};

struct TemplateValues {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
};

/// Throws ParseError on an unknown placeholder or an unbalanced block.
std::string render_template(std::string_view tmpl, const TemplateValues& values);

// ---------------------------------------------------------------------------
// Response parsing (last matching marker wins)
// ---------------------------------------------------------------------------

enum class PointwiseVerdict { correct, incorrect };
enum class PairwiseValue { win, draw, lose };

std::string to_string(PointwiseVerdict v);
std::string to_string(PairwiseValue v);
PairwiseValue swap_sides(PairwiseValue v);

/// "Neologizm: tak|nie" (also "Neologism: yes|no"); nullopt when absent.
std::optional<bool> parse_filter_verdict(std::string_view response);
Sentiment parse_sentiment_response(std::string_view response);
Domain parse_domain_response(std::string_view response);
PointwiseVerdict parse_pointwise_response(std::string_view response);
PairwiseValue parse_pairwise_response(std::string_view response);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct LlmOptions {
  const PromptTemplates* templates = nullptr;  // built-in when null
  std::function<Timestamp()> clock;            // system clock when empty
};

std::string definition_prompt(const std::string& neologism, const std::vector<std::string>& contexts, int shots,
                              const PromptTemplates& templates = PromptTemplates::defaults());

/// shots must be 0, 3 or 5 and contexts must hold at least `shots` entries;
/// the first `shots` contexts are used. Throws PreconditionError, LlmError.
Definition generate_definition(const std::string& neologism, const std::vector<std::string>& contexts, int shots,
                               LlmClient& client, const LlmOptions& options = {});

enum class CategoryDimension { sentiment, domain };

/// Number of usage examples in the examples and both setups.
inline constexpr std::size_t kCategorizationExamples = 5;

std::string categorization_prompt(const std::string& neologism, CategorySetup setup,
                                  const std::vector<std::string>& contexts, const std::optional<Definition>& definition,
                                  CategoryDimension dimension,
                                  const PromptTemplates& templates = PromptTemplates::defaults());

SentimentLabel categorize_sentiment(const std::string& neologism, CategorySetup setup,
                                    const std::vector<std::string>& contexts,
                                    const std::optional<Definition>& definition, LlmClient& client,
                                    const LlmOptions& options = {});
DomainLabel categorize_domain(const std::string& neologism, CategorySetup setup,
                              const std::vector<std::string>& contexts, const std::optional<Definition>& definition,
                              LlmClient& client, const LlmOptions& options = {});

/// Number of usage examples shown to the judge.
inline constexpr std::size_t kJudgeExamples = 5;

struct PointwiseResult {
  PointwiseVerdict value = PointwiseVerdict::incorrect;
  std::string raw;
};

PointwiseResult judge_pointwise(const std::string& neologism, const std::string& reference_definition,
                                const std::string& candidate_definition, const std::vector<std::string>& contexts,
                                LlmClient& judge, const LlmOptions& options = {});

struct PairwiseVerdict {
  PairwiseValue value = PairwiseValue::draw;  // as answered for the presented order
  bool a_first = true;                        // presented order was (a, b)
  PairwiseValue de_shuffled = PairwiseValue::draw;  // from a's point of view
  std::string raw;
};

/// Presentation order for a seed: (a, b) iff the first mt19937_64 draw is even.
bool pairwise_a_first(std::uint64_t seed);

PairwiseVerdict judge_pairwise(const std::string& neologism, const std::string& definition_a,
                               const std::string& definition_b, const std::vector<std::string>& contexts,
                               LlmClient& judge, std::uint64_t seed, const LlmOptions& options = {});

struct DefinitionEvalItem {
  std::string id;
  std::string neologism;
  std::string reference_definition;
  std::vector<std::string> contexts;
};

struct ShotResult {
  int shots = 0;
  std::size_t items = 0;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t win = 0;
  std::size_t draw = 0;
  std::size_t lose = 0;
  std::size_t errors = 0;
  double accuracy = 0.0;  // correct / (correct + incorrect)
  double win_rate = 0.0;  // win / (win + draw + lose)
};

struct ItemError {
  std::string item_id;
  int shots = 0;
  std::string message;
};

struct DefinitionEvalReport {
  std::vector<ShotResult> shots;
  std::vector<ItemError> errors;
};

struct DefinitionEvalOptions {
  bool pointwise = true;
  bool pairwise = true;
  std::uint64_t seed = 0;
  std::size_t parallelism = 4;
  LlmOptions llm;
};

/// Generates a definition per (item, shots) and judges it against the
/// reference. Items with fewer than 5 contexts are rejected up front
/// (PreconditionError). Per-item failures are collected and the run continues.
DefinitionEvalReport run_definition_evaluation(const std::vector<DefinitionEvalItem>& dataset, LlmClient& generator,
                                               LlmClient& judge, const std::vector<int>& shots,
                                               const DefinitionEvalOptions& options = {});

std::string to_json(const DefinitionEvalReport& r);
std::string format_definition_eval_table(const DefinitionEvalReport& r);

/// JSON-lines or JSON array of {"id"?, "neologism"|"base_form", "definition", "examples": [...]}.
std::vector<DefinitionEvalItem> load_definition_dataset(const std::filesystem::path& path);

}  // namespace neolex
