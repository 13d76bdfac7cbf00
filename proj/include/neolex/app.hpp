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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "neolex/pipeline.hpp"
#include "neolex/service.hpp"

namespace neolex {

/// Everything a configured deployment needs: lexicons, store, analyzer,
/// LLM clients and the review workbench.
class Application {
 public:
  explicit Application(AppConfig config);
  Application(const Application&) = delete;
  Application& operator=(const Application&) = delete;

  const AppConfig& config() const noexcept { return config_; }
  const Resources& resources() const noexcept { return resources_; }
  SqliteStore& store() noexcept { return store_; }
  Workbench& workbench() noexcept { return *workbench_; }
  AnalyzerAdapter& analyzer() noexcept { return *analyzer_; }
  /// Null when no LLM is configured.
  LlmClient* llm() noexcept { return llm_.get(); }
  /// Falls back to the generation client when no judge is configured.
  LlmClient* judge() noexcept { return judge_ ? judge_.get() : llm_.get(); }
  const PromptTemplates& templates() const noexcept { return templates_; }
  /// Notes about skipped stages or fallbacks, for the operator.
  const std::vector<std::string>& notices() const noexcept { return notices_; }

  /// Polls the configured feed list into the store.
  PollReport ingest(Fetcher& fetcher);
  /// Rebuilds candidate groups from every stored document and reruns the
  /// filter chain with the configured filter settings. A gold set replaces
  /// the stored one.
  PipelineResult run_pipeline(const std::optional<GoldSet>& gold = std::nullopt);

 private:
  AppConfig config_;
  Resources resources_;
  SqliteStore store_;
  std::unique_ptr<AnalyzerAdapter> analyzer_;
  std::unique_ptr<LlmClient> llm_;
  std::unique_ptr<LlmClient> judge_;
  PromptTemplates templates_;
  std::vector<std::string> notices_;
  std::unique_ptr<Workbench> workbench_;
};

}  // namespace neolex
