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

#include "neolex/service.hpp"

#include <algorithm>
#include <mutex>

#include "json_codec.hpp"

namespace neolex {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// CSV

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  std::size_t i = 0;
  bool row_open = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_open = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    row_open = true;
    if (c == '"' && field.empty()) {
      ++i;
      for (;;) {
        if (i >= text.size()) throw ParseError("unterminated quoted CSV field");
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field += text[i++];
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
        throw ParseError("unexpected character after a quoted CSV field");
      }
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_row();
      i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
    } else if (c == '"') {
      throw ParseError("stray quote inside an unquoted CSV field");
    } else {
      field += c;
      ++i;
    }
  }
  if (row_open) end_row();
  return rows;
}

std::vector<std::string> csv_row(const CandidateGroup& g) {
  const auto& a = g.aggregate;
  std::string variants;
  for (const auto& k : g.member_keys()) {
    if (!variants.empty()) variants += '|';
    variants += k;
  }
  return {g.base_form,
          variants,
          std::to_string(a.doc_freq()),
          std::to_string(a.term_freq),
          std::to_string(a.unique_domains()),
          a.first_seen ? format_timestamp(*a.first_seen) : "",
          a.last_seen ? format_timestamp(*a.last_seen) : "",
          to_string(g.review_status),
          g.definition ? g.definition->text : "",
          g.sentiment ? to_string(g.sentiment->value) : "",
          g.domain ? to_string(g.domain->value) : "",
          a.contexts.empty() ? "" : a.contexts.front().sentence};
}

// ---------------------------------------------------------------------------
// Workbench

const std::vector<std::string>& sort_keys() {
  static const std::vector<std::string> keys = {"base_form",  "variants",  "doc_freq",     "term_freq",
                                                "unique_domains", "first_seen", "last_seen", "review_status"};
  return keys;
}

Workbench::Workbench(SqliteStore& store, WorkbenchOptions options, FilterConfig config)
    : store_(store), options_(std::move(options)), config_(std::move(config)) {
  config_.validate();
  if (auto run = store_.latest_run()) config_ = run->config;
  gold_ = store_.load_gold();
}

Timestamp Workbench::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

FilterConfig Workbench::filter_config() const {
  std::shared_lock lock(mu_);
  return config_;
}

namespace {

bool llm_available(const WorkbenchOptions& o) { return o.llm != nullptr && o.exemplars.has_value(); }

std::vector<std::string> effective_chain(const WorkbenchOptions& o, const FilterConfig& c) {
  auto order = o.chain.empty() ? default_chain(c) : o.chain;
  if (o.chain.empty()) {
    std::erase_if(order, [&](const std::string& id) { return std::ranges::find(o.skip, id) != o.skip.end(); });
  }
  if (!llm_available(o) || !c.llm_filter_enabled) {
    order.erase(std::remove(order.begin(), order.end(), std::string(filter_id::llm)), order.end());
  }
  return order;
}

}  // namespace

std::vector<std::string> Workbench::chain() const {
  std::shared_lock lock(mu_);
  return effective_chain(options_, config_);
}

void Workbench::replace_groups(std::vector<CandidateGroup> groups) {
  std::unique_lock lock(mu_);
  for (auto& g : groups) {
    if (auto old = store_.group(g.id)) {
      g.review_status = old->review_status;
      if (!g.definition) g.definition = old->definition;
      if (!g.sentiment) g.sentiment = old->sentiment;
      if (!g.domain) g.domain = old->domain;
    }
  }
  store_.replace_groups(groups);
}

void Workbench::set_gold(std::optional<GoldSet> gold) {
  std::unique_lock lock(mu_);
  store_.save_gold(gold);
  gold_ = std::move(gold);
}

std::vector<StageReport> Workbench::rerun() { return update_filter_config_and_rerun(filter_config()); }

std::vector<StageReport> Workbench::update_filter_config_and_rerun(const FilterConfig& config) {
  config.validate();
  std::unique_lock lock(mu_);
  const auto order = effective_chain(options_, config);
  std::optional<CachingClient> cached;
  ChainOptions co;
  co.gold = gold_;
  co.parallelism = options_.filter_parallelism;
  if (std::find(order.begin(), order.end(), filter_id::llm) != order.end()) {
    cached.emplace(*options_.llm, store_);
    co.llm = LlmStageSetup{&*cached, *options_.exemplars, &options_.templates, options_.llm_parallelism,
                           kLlmFilterContexts};
  }
  const auto result = run_chain(store_.groups(), order, config, options_.lexicons, co);

  StoredRun run;
  run.created_at = now();
  run.config = config;
  run.chain = order;
  run.stages = result.stages;
  for (const auto& g : result.survivors) run.survivors.insert(g.id);
  for (const auto& r : result.rejected) run.rejections[r.group.id] = r.decision;
  run.flags = result.flags;
  store_.save_run(run);
  config_ = config;
  return run.stages;
}

std::vector<StageReport> Workbench::stage_reports() const {
  std::shared_lock lock(mu_);
  auto run = store_.latest_run();
  return run ? run->stages : std::vector<StageReport>{};
}

std::optional<StoredRun> Workbench::latest_run() const {
  std::shared_lock lock(mu_);
  return store_.latest_run();
}

CandidateSummary Workbench::summarize(const CandidateGroup& g, const std::optional<StoredRun>& run) const {
  CandidateSummary s;
  s.id = g.id;
  s.base_form = g.base_form;
  s.variants = g.members.size();
  s.doc_freq = g.aggregate.doc_freq();
  s.term_freq = g.aggregate.term_freq;
  s.unique_domains = g.aggregate.unique_domains();
  s.first_seen = g.aggregate.first_seen;
  s.last_seen = g.aggregate.last_seen;
  s.review_status = g.review_status;
  if (run) {
    s.survived = run->survivors.count(g.id) != 0;
    if (auto it = run->rejections.find(g.id); it != run->rejections.end()) s.rejected_by = it->second;
    if (auto it = run->flags.find(g.id); it != run->flags.end()) s.flag = it->second;
  }
  if (g.definition) s.definition = g.definition->text;
  if (g.sentiment) s.sentiment = g.sentiment->value;
  if (g.domain) s.domain = g.domain->value;
  return s;
}

std::vector<CandidateGroup> Workbench::select(const Selection& sel, const std::optional<StoredRun>& run) const {
  const auto& stage = sel.stage;
  const bool by_filter = stage != "all" && stage != "survivors" && stage != "rejected" && stage != "flagged";
  if (by_filter && !is_known_filter_id(stage)) throw PreconditionError("invalid stage filter: " + stage);
  std::vector<CandidateGroup> out;
  for (auto& g : store_.groups()) {
    if (sel.status && g.review_status != *sel.status) continue;
    if (stage != "all") {
      if (!run) continue;
      const bool survived = run->survivors.count(g.id) != 0;
      const auto rej = run->rejections.find(g.id);
      if (stage == "survivors" && !survived) continue;
      if (stage == "rejected" && rej == run->rejections.end()) continue;
      if (stage == "flagged" && !run->flags.count(g.id)) continue;
      if (by_filter && (rej == run->rejections.end() || rej->second.filter_id != stage)) continue;
    }
    out.push_back(std::move(g));
  }
  return out;
}

CandidatePage Workbench::list_candidates(const ListQuery& q) const {
  if (q.page_size == 0 || q.page_size > kMaxPageSize) {
    throw PreconditionError("page_size must be between 1 and " + std::to_string(kMaxPageSize));
  }
  const bool descending = !q.sort_key.empty() && q.sort_key.front() == '-';
  const std::string key = descending ? q.sort_key.substr(1) : q.sort_key;
  const auto& keys = sort_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw PreconditionError("invalid sort key: " + key);

  std::shared_lock lock(mu_);
  const auto run = store_.latest_run();
  std::vector<CandidateSummary> all;
  for (const auto& g : select(q.selection, run)) all.push_back(summarize(g, run));

  auto compare = [&](const CandidateSummary& a, const CandidateSummary& b) -> int {
    auto cmp = [](const auto& x, const auto& y) { return x < y ? -1 : (y < x ? 1 : 0); };
    if (key == "base_form") return cmp(a.base_form, b.base_form);
    if (key == "variants") return cmp(a.variants, b.variants);
    if (key == "doc_freq") return cmp(a.doc_freq, b.doc_freq);
    if (key == "term_freq") return cmp(a.term_freq, b.term_freq);
    if (key == "unique_domains") return cmp(a.unique_domains, b.unique_domains);
    if (key == "first_seen") return cmp(a.first_seen, b.first_seen);
    if (key == "last_seen") return cmp(a.last_seen, b.last_seen);
    return cmp(to_string(a.review_status), to_string(b.review_status));
  };
  std::sort(all.begin(), all.end(), [&](const CandidateSummary& a, const CandidateSummary& b) {
    const int c = compare(a, b);
    if (c != 0) return descending ? c > 0 : c < 0;
    return a.id < b.id;
  });

  CandidatePage page;
  page.total = all.size();
  page.page = q.page;
  page.page_size = q.page_size;
  const std::size_t begin = std::min(all.size(), q.page * q.page_size);
  const std::size_t end = std::min(all.size(), begin + q.page_size);
  page.items.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(begin)),
                    std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(end)));
  if (run) page.stages = run->stages;
  return page;
}

CandidateGroup Workbench::require_group(const std::string& id) const {
  auto g = store_.group(id);
  if (!g) throw NotFoundError("unknown group: " + id);
  return std::move(*g);
}

CandidateDetail Workbench::candidate(const std::string& id) const {
  std::shared_lock lock(mu_);
  CandidateDetail d;
  d.group = require_group(id);
  d.summary = summarize(d.group, store_.latest_run());
  d.decisions = store_.decisions(id);
  return d;
}

ReviewDecision Workbench::set_review_status(const std::string& id, ReviewStatus status, const std::string& reviewer) {
  std::unique_lock lock(mu_);
  return store_.append_decision(id, status, reviewer, now());
}

TrendSeries Workbench::frequency_trend(const std::string& id, std::optional<Timestamp> from,
                                       std::optional<Timestamp> to) const {
  std::shared_lock lock(mu_);
  const auto g = require_group(id);
  const auto& daily = g.aggregate.daily_counts;
  TrendSeries t;
  t.group_id = id;
  if (!from) {
    if (daily.empty()) return t;
    from = daily.begin()->first;
  }
  if (!to) {
    if (daily.empty()) return t;
    to = daily.rbegin()->first;
  }
  const auto first = start_of_day(*from), last = start_of_day(*to);
  if (first > last) throw PreconditionError("inverted trend window");
  for (auto day = first; day <= last; day += std::chrono::days(1)) {
    auto it = daily.find(day);
    t.buckets.emplace_back(day, it == daily.end() ? 0 : it->second);
  }
  return t;
}

std::string Workbench::export_csv(const Selection& selection) const {
  std::shared_lock lock(mu_);
  auto groups = select(selection, store_.latest_run());
  std::sort(groups.begin(), groups.end(), [](const CandidateGroup& a, const CandidateGroup& b) {
    return std::tie(a.base_form, a.id) < std::tie(b.base_form, b.id);
  });
  std::vector<std::vector<std::string>> rows = {csv_header()};
  for (const auto& g : groups) rows.push_back(csv_row(g));
  return write_csv(rows);
}

namespace {

std::vector<std::string> sentences(const CandidateGroup& g) {
  std::vector<std::string> out;
  for (const auto& c : g.aggregate.contexts) out.push_back(c.sentence);
  return out;
}

[[noreturn]] void rethrow_llm(const LlmError& e) {
  throw LlmError(std::string(e.what()) + "; the request can be retried");
}

}  // namespace

Definition Workbench::request_definition(const std::string& id, int shots) {
  if (shots != 0 && shots != 3 && shots != 5) throw PreconditionError("shots must be 0, 3 or 5");
  CandidateGroup g;
  {
    std::shared_lock lock(mu_);
    g = require_group(id);
    if (auto cached = store_.definition(id, shots)) return *cached;
  }
  if (!options_.llm) throw PreconditionError("no LLM client is configured");
  const auto contexts = sentences(g);
  if (contexts.size() < static_cast<std::size_t>(shots)) {
    throw PreconditionError(g.base_form + " has " + std::to_string(contexts.size()) + " contexts; " +
                            std::to_string(shots) + "-shot definitions need " + std::to_string(shots));
  }
  LlmOptions lo;
  lo.templates = &options_.templates;
  lo.clock = [this] { return now(); };
  Definition d;
  try {
    d = generate_definition(g.base_form, contexts, shots, *options_.llm, lo);
  } catch (const LlmError& e) {
    rethrow_llm(e);
  }
  std::unique_lock lock(mu_);
  if (auto cached = store_.definition(id, shots)) return *cached;
  store_.save_definition(id, d);
  if (auto cur = store_.group(id)) {
    cur->definition = d;
    store_.put_group(*cur);
  }
  return d;
}

CategoryArtifact Workbench::request_categories(const std::string& id, CategorySetup setup) {
  CandidateGroup g;
  {
    std::shared_lock lock(mu_);
    g = require_group(id);
    if (auto cached = store_.categories(id, setup)) return *cached;
  }
  if (!options_.llm) throw PreconditionError("no LLM client is configured");
  const auto contexts = sentences(g);
  if (setup != CategorySetup::definition && contexts.size() < kCategorizationExamples) {
    throw PreconditionError(g.base_form + " has " + std::to_string(contexts.size()) + " contexts; setup '" +
                            to_string(setup) + "' needs " + std::to_string(kCategorizationExamples));
  }
  if (setup != CategorySetup::examples && !g.definition) {
    throw PreconditionError(g.base_form + " has no definition; request one before setup '" + to_string(setup) + "'");
  }
  LlmOptions lo;
  lo.templates = &options_.templates;
  CategoryArtifact c;
  try {
    c.sentiment = categorize_sentiment(g.base_form, setup, contexts, g.definition, *options_.llm, lo);
    c.domain = categorize_domain(g.base_form, setup, contexts, g.definition, *options_.llm, lo);
  } catch (const LlmError& e) {
    rethrow_llm(e);
  }
  c.model_name = options_.llm->model_name();
  c.created_at = now();
  std::unique_lock lock(mu_);
  if (auto cached = store_.categories(id, setup)) return *cached;
  store_.save_categories(id, c);
  if (auto cur = store_.group(id)) {
    cur->sentiment = c.sentiment;
    cur->domain = c.domain;
    store_.put_group(*cur);
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json opt_time(const std::optional<Timestamp>& t) { return t ? json(format_timestamp(*t)) : json(nullptr); }

json decision_or_null(const std::optional<FilterDecision>& d) {
  return d ? json::parse(neolex::to_json(*d)) : json(nullptr);
}

json summary_json(const CandidateSummary& s) {
  return {{"id", s.id},
          {"base_form", s.base_form},
          {"variants", s.variants},
          {"doc_freq", s.doc_freq},
          {"term_freq", s.term_freq},
          {"unique_domains", s.unique_domains},
          {"first_seen", opt_time(s.first_seen)},
          {"last_seen", opt_time(s.last_seen)},
          {"review_status", to_string(s.review_status)},
          {"survived", s.survived},
          {"rejected_by", decision_or_null(s.rejected_by)},
          {"flag", decision_or_null(s.flag)},
          {"definition", s.definition ? json(*s.definition) : json(nullptr)},
          {"sentiment", s.sentiment ? json(to_string(*s.sentiment)) : json(nullptr)},
          {"domain", s.domain ? json(to_string(*s.domain)) : json(nullptr)}};
}

}  // namespace

std::string to_json(const CandidateSummary& s) { return summary_json(s).dump(); }

std::string to_json(const CandidatePage& p) {
  json items = json::array();
  for (const auto& s : p.items) items.push_back(summary_json(s));
  return json{{"total", p.total},
              {"page", p.page},
              {"page_size", p.page_size},
              {"items", items},
              {"stages", json::parse(to_json(p.stages))}}
      .dump();
}

std::string to_json(const TrendSeries& t) {
  json buckets = json::array();
  for (const auto& [day, count] : t.buckets) buckets.push_back({{"date", format_date(day)}, {"count", count}});
  return json{{"group_id", t.group_id}, {"buckets", buckets}}.dump();
}

std::string to_json(const CandidateDetail& d) {
  json decisions = json::array();
  for (const auto& r : d.decisions) decisions.push_back(json::parse(to_json(r)));
  return json{{"group", codec::to_json(d.group)}, {"summary", summary_json(d.summary)}, {"decisions", decisions}}
      .dump();
}

std::string to_json(const CategoryArtifact& c) {
  return json{{"sentiment", to_string(c.sentiment.value)},
              {"domain", to_string(c.domain.value)},
              {"setup", to_string(c.sentiment.setup)},
              {"model_name", c.model_name},
              {"created_at", format_timestamp(c.created_at)}}
      .dump();
}

}  // namespace neolex
