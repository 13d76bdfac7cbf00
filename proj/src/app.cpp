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

#include "neolex/app.hpp"

#include <algorithm>

namespace neolex {

Application::Application(AppConfig config)
    : config_(std::move(config)),
      resources_(config_),
      store_(config_.database),
      analyzer_(make_analyzer(config_)),
      templates_(config_.llm_templates ? PromptTemplates::load(*config_.llm_templates) : PromptTemplates::defaults()) {
  if (config_.llm) llm_ = make_llm_client(*config_.llm);
  if (config_.judge) judge_ = make_llm_client(*config_.judge);

  WorkbenchOptions o;
  o.lexicons = resources_.filter_lexicons();
  o.chain = config_.chain;
  o.llm = llm_.get();
  o.templates = templates_;
  o.llm_parallelism = config_.llm_parallelism;
  o.filter_parallelism = config_.parallelism;
  if (config_.llm_exemplars) o.exemplars = load_llm_exemplars(*config_.llm_exemplars);

  if (config_.chain.empty()) {
    if (!resources_.english()) {
      o.skip.emplace_back(filter_id::english);
      notices_.push_back("no English lexicon is configured; the English dictionary stage is skipped");
    }
    if (!resources_.dictionary()) {
      o.skip.emplace_back(filter_id::edit_distance);
      o.skip.emplace_back(filter_id::spelling);
      notices_.push_back("no dictionary is configured; the edit distance and spelling stages are skipped");
    }
  }

  const bool wants_llm_stage =
      config_.chain.empty() ? config_.filter.llm_filter_enabled
                            : std::find(config_.chain.begin(), config_.chain.end(), filter_id::llm) != config_.chain.end();
  if (wants_llm_stage && !llm_) {
    notices_.push_back("no LLM is configured; the LLM filter stage is skipped");
  } else if (wants_llm_stage && !o.exemplars) {
    throw ConfigError("the LLM filter stage needs llm.exemplars");
  }
  workbench_ = std::make_unique<Workbench>(store_, std::move(o), config_.filter);
}

PollReport Application::ingest(Fetcher& fetcher) {
  if (!config_.feeds) throw ConfigError("feeds is not set");
  PollOptions po;
  po.max_parallel_sources = config_.ingest_parallel_sources;
  return poll_feeds(load_feed_list(*config_.feeds), fetcher, store_, po);
}

PipelineResult Application::run_pipeline(const std::optional<GoldSet>& gold) {
  PipelineOptions po;
  po.lemma_mode = config_.lemma_mode;
  po.context_limit = config_.context_limit;
  po.parallelism = config_.parallelism;
  auto result = build_candidate_groups(store_.all(), *analyzer_, resources_.extraction_references(), po);
  workbench_->replace_groups(result.groups);
  if (gold) workbench_->set_gold(gold);
  workbench_->update_filter_config_and_rerun(config_.filter);
  return result;
}

}  // namespace neolex
