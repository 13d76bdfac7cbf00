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

#include "neolex/llm.hpp"

#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "http_util.hpp"
#include "neolex/metrics.hpp"

namespace neolex {

namespace builtin_templates {
extern const char* const definition;
extern const char* const pointwise;
extern const char* const pairwise;
extern const char* const sentiment;
extern const char* const domain;
extern const char* const filter;
}  // namespace builtin_templates

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Clients

void ClientConfig::validate() const {
  if (!(temperature > 0.0 && temperature <= 1.0)) {
    throw ConfigError("temperature must be in (0, 1], got " + std::to_string(temperature));
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1], got " + std::to_string(top_p));
  if (retries < 0) throw ConfigError("retries must be >= 0");
  if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

HttpChatClient::HttpChatClient(ClientConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.endpoint.empty()) throw ConfigError("LLM endpoint is empty");
}

std::string HttpChatClient::request_body(const std::string& prompt) const {
  return json{{"model", config_.model},
              {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
              {"temperature", config_.temperature},
              {"top_p", config_.top_p},
              {"max_tokens", config_.max_tokens}}
      .dump();
}

std::string HttpChatClient::parse_response(std::string_view body) {
  try {
    const auto j = json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw LlmError("completion content is not a string");
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw LlmError(std::string("malformed completion response: ") + e.what());
  }
}

std::string HttpChatClient::complete(const std::string& prompt) {
  std::map<std::string, std::string> headers;
  if (!config_.api_key.empty()) headers["Authorization"] = "Bearer " + config_.api_key;
  http::Result r;
  try {
    r = http::post(config_.endpoint, request_body(prompt), "application/json", config_.timeout, headers);
  } catch (const LlmError&) {
    throw;
  } catch (const Error& e) {
    throw LlmError(std::string("LLM request failed: ") + e.what());
  }
  if (r.status != 200) throw LlmError("LLM endpoint returned HTTP " + std::to_string(r.status));
  return parse_response(r.body);
}

std::unique_ptr<MockClient> MockClient::from_json(std::string_view text) {
  auto m = std::make_unique<MockClient>();
  try {
    const auto j = json::parse(text);
    if (!j.is_object()) throw ParseError("mock responses must be a JSON object");
    if (j.contains("model")) m->model_ = j["model"].get<std::string>();
    if (j.contains("default") && !j["default"].is_null()) m->default_ = j["default"].get<std::string>();
    if (j.contains("retries")) m->retries_ = j["retries"].get<int>();
    if (j.contains("responses")) {
      for (const auto& [hash, response] : j["responses"].items()) m->by_hash_[hash] = response.get<std::string>();
    }
    if (j.contains("rules")) {
      for (const auto& r : j["rules"]) {
        m->rules_.emplace_back(r.at("contains").get<std::string>(), r.at("response").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed mock responses: ") + e.what());
  }
  return m;
}

std::unique_ptr<MockClient> MockClient::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open mock responses: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void MockClient::set_response(const std::string& prompt, std::string response) {
  by_hash_[sha256_hex(prompt)] = std::move(response);
}

void MockClient::add_rule(std::string contains, std::string response) {
  rules_.emplace_back(std::move(contains), std::move(response));
}

std::string MockClient::complete(const std::string& prompt) {
  ++calls_;
  if (auto it = by_hash_.find(sha256_hex(prompt)); it != by_hash_.end()) return it->second;
  for (const auto& [needle, response] : rules_) {
    if (prompt.find(needle) != std::string::npos) return response;
  }
  if (default_) return *default_;
  throw LlmError("mock client has no response for prompt " + sha256_hex(prompt));
}

std::optional<std::string> MemoryCompletionCache::get(const std::string& prompt_hash) {
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(prompt_hash); it != entries_.end()) return it->second;
  return std::nullopt;
}

void MemoryCompletionCache::put(const std::string& prompt_hash, const std::string&, const std::string& response) {
  std::lock_guard lock(mu_);
  entries_[prompt_hash] = response;
}

std::size_t MemoryCompletionCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string CachingClient::complete(const std::string& prompt) {
  if (auto hit = cache_.get(sha256_hex(prompt))) return *hit;
  return inner_.complete(prompt);
}

void CachingClient::commit(const std::string& prompt, const std::string& response) {
  cache_.put(sha256_hex(prompt), inner_.model_name(), response);
}

// ---------------------------------------------------------------------------
// Templates

PromptTemplates PromptTemplates::defaults() {
  return {builtin_templates::definition, builtin_templates::pointwise, builtin_templates::pairwise,
          builtin_templates::sentiment,  builtin_templates::domain,    builtin_templates::filter};
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t = defaults();
  const std::pair<const char*, std::string*> slots[] = {
      {"definition", &t.definition}, {"pointwise", &t.pointwise}, {"pairwise", &t.pairwise},
      {"sentiment", &t.sentiment},   {"domain", &t.domain},       {"filter", &t.filter}};
  for (const auto& [name, slot] : slots) {
    const auto path = dir / (std::string(name) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    std::stringstream ss;
    ss << in.rdbuf();
    *slot = ss.str();
    if (!is_valid_utf8(*slot)) throw EncodingError("template is not valid UTF-8: " + path.string());
  }
  return t;
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

void render_into(std::string& out, std::string_view tmpl, const TemplateValues& values) {
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find('{', i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      return;
    }
    out.append(tmpl.substr(i, open - i));
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(open));
      return;
    }
    const auto inner = tmpl.substr(open + 1, close - open - 1);
    const char kind = inner.empty() ? '\0' : inner.front();
    if ((kind == '#' || kind == '?') && is_identifier(inner.substr(1))) {
      const std::string name(inner.substr(1));
      const std::string end_tag = "{/" + name + "}";
      const auto end = tmpl.find(end_tag, close + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated template block: " + name);
      const auto body = tmpl.substr(close + 1, end - close - 1);
      if (kind == '#') {
        auto it = values.lists.find(name);
        if (it == values.lists.end()) throw ParseError("unknown template list: " + name);
        for (std::size_t k = 0; k < it->second.size(); ++k) {
          TemplateValues item = values;
          item.scalars["index"] = std::to_string(k + 1);
          item.scalars["text"] = it->second[k];
          render_into(out, body, item);
        }
      } else {
        const auto s = values.scalars.find(name);
        const auto l = values.lists.find(name);
        const bool present =
            (s != values.scalars.end() && !s->second.empty()) || (l != values.lists.end() && !l->second.empty());
        if (present) render_into(out, body, values);
      }
      i = end + end_tag.size();
    } else if (kind == '/' && is_identifier(inner.substr(1))) {
      throw ParseError("unbalanced template block end: " + std::string(inner.substr(1)));
    } else if (is_identifier(inner)) {
      auto it = values.scalars.find(std::string(inner));
      if (it == values.scalars.end()) throw ParseError("unknown template placeholder: " + std::string(inner));
      out += it->second;
      i = close + 1;
    } else {
      out += '{';
      i = open + 1;
    }
  }
}

const PromptTemplates& templates_of(const LlmOptions& o) {
  static const PromptTemplates builtin = PromptTemplates::defaults();
  return o.templates ? *o.templates : builtin;
}

Timestamp now_of(const LlmOptions& o) {
  if (o.clock) return o.clock();
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

std::vector<std::string> first_n(const std::vector<std::string>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size()))};
}

}  // namespace

std::string render_template(std::string_view tmpl, const TemplateValues& values) {
  std::string out;
  render_into(out, tmpl, values);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

std::string to_string(PointwiseVerdict v) { return v == PointwiseVerdict::correct ? "CORRECT" : "INCORRECT"; }

std::string to_string(PairwiseValue v) {
  switch (v) {
    case PairwiseValue::win: return "WIN";
    case PairwiseValue::draw: return "DRAW";
    case PairwiseValue::lose: return "LOSE";
  }
  return "DRAW";
}

PairwiseValue swap_sides(PairwiseValue v) {
  if (v == PairwiseValue::win) return PairwiseValue::lose;
  if (v == PairwiseValue::lose) return PairwiseValue::win;
  return PairwiseValue::draw;
}

namespace {

char32_t code_point_before(std::string_view s, std::size_t pos) {
  if (pos == 0) return 0;
  std::size_t start = pos - 1;
  while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
  const auto cps = utf8_to_u32(s.substr(start, pos - start));
  return cps.empty() ? 0 : cps.front();
}

char32_t code_point_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  std::size_t end = pos + 1;
  while (end < s.size() && (static_cast<unsigned char>(s[end]) & 0xC0) == 0x80) ++end;
  const auto cps = utf8_to_u32(s.substr(pos, end - pos));
  return cps.empty() ? 0 : cps.front();
}

/// Alias whose whole-word occurrence ends last in the response (longest on ties).
template <typename T>
std::optional<T> last_label(std::string_view response, const std::vector<std::pair<std::string, T>>& aliases) {
  const std::string text = to_lower(response);
  std::optional<T> best;
  std::size_t best_end = 0, best_len = 0;
  for (const auto& [alias, value] : aliases) {
    for (auto pos = text.find(alias); pos != std::string::npos; pos = text.find(alias, pos + 1)) {
      const auto end = pos + alias.size();
      if (is_letter(code_point_before(text, pos)) || is_letter(code_point_at(text, end))) continue;
      if (!best || end > best_end || (end == best_end && alias.size() > best_len)) {
        best = value;
        best_end = end;
        best_len = alias.size();
      }
    }
  }
  return best;
}

template <typename T>
T require_label(std::string_view response, const std::vector<std::pair<std::string, T>>& aliases, const char* what) {
  if (auto v = last_label(response, aliases)) return *v;
  throw LlmParseError(std::string("no ") + what + " in response", std::string(response));
}

const std::vector<std::pair<std::string, Sentiment>>& sentiment_aliases() {
  static const std::vector<std::pair<std::string, Sentiment>> a = {
      {"pozytywny", Sentiment::positive}, {"pozytywne", Sentiment::positive}, {"pozytywna", Sentiment::positive},
      {"neutralny", Sentiment::neutral},  {"neutralne", Sentiment::neutral},  {"neutralna", Sentiment::neutral},
      {"negatywny", Sentiment::negative}, {"negatywne", Sentiment::negative}, {"negatywna", Sentiment::negative},
      {"positive", Sentiment::positive},  {"neutral", Sentiment::neutral},    {"negative", Sentiment::negative}};
  return a;
}

const std::vector<std::pair<std::string, Domain>>& domain_aliases() {
  static const std::vector<std::pair<std::string, Domain>> a = [] {
    std::vector<std::pair<std::string, Domain>> v = {
        {"technologia i nauka", Domain::technology_science},
        {"kultura i rozrywka", Domain::culture_entertainment},
        {"życie społeczne i relacje", Domain::social_life_relationships},
        {"ekonomia i biznes", Domain::economy_business},
        {"ekologia i środowisko", Domain::ecology_environment},
        {"polityka i społeczeństwo", Domain::politics_society}};
    for (auto d : kAllDomains) v.emplace_back(to_lower(to_string(d)), d);
    return v;
  }();
  return a;
}

}  // namespace

std::optional<bool> parse_filter_verdict(std::string_view response) {
  static const std::regex marker(R"(neologi[zs]m\s*:\s*<?\s*(tak|nie|yes|no)\b)");
  const std::string text = to_lower(response);
  std::optional<bool> verdict;
  for (std::sregex_iterator it(text.begin(), text.end(), marker), end; it != end; ++it) {
    const auto v = (*it)[1].str();
    verdict = v == "tak" || v == "yes";
  }
  return verdict;
}

Sentiment parse_sentiment_response(std::string_view response) {
  return require_label(response, sentiment_aliases(), "sentiment category");
}

Domain parse_domain_response(std::string_view response) {
  return require_label(response, domain_aliases(), "domain category");
}

PointwiseVerdict parse_pointwise_response(std::string_view response) {
  static const std::vector<std::pair<std::string, PointwiseVerdict>> a = {{"correct", PointwiseVerdict::correct},
                                                                          {"incorrect", PointwiseVerdict::incorrect}};
  return require_label(response, a, "CORRECT/INCORRECT verdict");
}

PairwiseValue parse_pairwise_response(std::string_view response) {
  static const std::vector<std::pair<std::string, PairwiseValue>> a = {
      {"win", PairwiseValue::win}, {"draw", PairwiseValue::draw}, {"lose", PairwiseValue::lose}};
  return require_label(response, a, "WIN/DRAW/LOSE verdict");
}

// ---------------------------------------------------------------------------
// Operations

std::string definition_prompt(const std::string& neologism, const std::vector<std::string>& contexts, int shots,
                              const PromptTemplates& templates) {
  if (shots != 0 && shots != 3 && shots != 5) {
    throw PreconditionError("shots must be 0, 3 or 5, got " + std::to_string(shots));
  }
  if (contexts.size() < static_cast<std::size_t>(shots)) {
    throw PreconditionError(neologism + ": " + std::to_string(shots) + "-shot definition needs " +
                            std::to_string(shots) + " contexts, have " + std::to_string(contexts.size()));
  }
  TemplateValues v;
  v.scalars["neologism"] = neologism;
  v.scalars["num_examples"] = std::to_string(shots);
  v.lists["examples"] = first_n(contexts, static_cast<std::size_t>(shots));
  return render_template(templates.definition, v);
}

Definition generate_definition(const std::string& neologism, const std::vector<std::string>& contexts, int shots,
                               LlmClient& client, const LlmOptions& options) {
  const auto prompt = definition_prompt(neologism, contexts, shots, templates_of(options));
  auto text = complete_parsed(client, prompt, [](const std::string& r) {
    std::string t(trim(r));
    if (t.empty()) throw LlmParseError("empty definition", r);
    return t;
  });
  Definition d;
  d.neologism = neologism;
  d.text = std::move(text);
  d.shots = shots;
  d.examples_used = first_n(contexts, static_cast<std::size_t>(shots));
  d.model_name = client.model_name();
  d.created_at = now_of(options);
  return d;
}

std::string categorization_prompt(const std::string& neologism, CategorySetup setup,
                                  const std::vector<std::string>& contexts, const std::optional<Definition>& definition,
                                  CategoryDimension dimension, const PromptTemplates& templates) {
  const bool wants_examples = setup != CategorySetup::definition;
  const bool wants_definition = setup != CategorySetup::examples;
  if (wants_examples && contexts.size() < kCategorizationExamples) {
    throw PreconditionError(neologism + ": setup '" + to_string(setup) + "' needs " +
                            std::to_string(kCategorizationExamples) + " contexts, have " +
                            std::to_string(contexts.size()));
  }
  if (wants_definition && (!definition || trim(definition->text).empty())) {
    throw PreconditionError(neologism + ": setup '" + to_string(setup) + "' needs a definition");
  }
  TemplateValues v;
  v.scalars["neologism"] = neologism;
  v.scalars["definition"] = wants_definition ? definition->text : "";
  v.lists["examples"] = wants_examples ? first_n(contexts, kCategorizationExamples) : std::vector<std::string>{};
  return render_template(dimension == CategoryDimension::sentiment ? templates.sentiment : templates.domain, v);
}

SentimentLabel categorize_sentiment(const std::string& neologism, CategorySetup setup,
                                    const std::vector<std::string>& contexts,
                                    const std::optional<Definition>& definition, LlmClient& client,
                                    const LlmOptions& options) {
  const auto prompt =
      categorization_prompt(neologism, setup, contexts, definition, CategoryDimension::sentiment, templates_of(options));
  return {complete_parsed(client, prompt, [](const std::string& r) { return parse_sentiment_response(r); }), setup};
}

DomainLabel categorize_domain(const std::string& neologism, CategorySetup setup,
                              const std::vector<std::string>& contexts, const std::optional<Definition>& definition,
                              LlmClient& client, const LlmOptions& options) {
  const auto prompt =
      categorization_prompt(neologism, setup, contexts, definition, CategoryDimension::domain, templates_of(options));
  return {complete_parsed(client, prompt, [](const std::string& r) { return parse_domain_response(r); }), setup};
}

PointwiseResult judge_pointwise(const std::string& neologism, const std::string& reference_definition,
                                const std::string& candidate_definition, const std::vector<std::string>& contexts,
                                LlmClient& judge, const LlmOptions& options) {
  if (trim(reference_definition).empty() || trim(candidate_definition).empty()) {
    throw PreconditionError(neologism + ": pointwise judging needs two non-empty definitions");
  }
  if (contexts.size() < kJudgeExamples) {
    throw PreconditionError(neologism + ": pointwise judging needs " + std::to_string(kJudgeExamples) +
                            " contexts, have " + std::to_string(contexts.size()));
  }
  TemplateValues v;
  v.scalars["neologism"] = neologism;
  v.scalars["reference_definition"] = reference_definition;
  v.scalars["definition"] = candidate_definition;
  v.lists["examples"] = first_n(contexts, kJudgeExamples);
  const auto prompt = render_template(templates_of(options).pointwise, v);
  return complete_parsed(judge, prompt, [](const std::string& r) {
    return PointwiseResult{parse_pointwise_response(r), r};
  });
}

bool pairwise_a_first(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return (rng() & 1U) == 0;
}

PairwiseVerdict judge_pairwise(const std::string& neologism, const std::string& definition_a,
                               const std::string& definition_b, const std::vector<std::string>& contexts,
                               LlmClient& judge, std::uint64_t seed, const LlmOptions& options) {
  if (trim(definition_a).empty() || trim(definition_b).empty()) {
    throw PreconditionError(neologism + ": pairwise judging needs two non-empty definitions");
  }
  const bool a_first = pairwise_a_first(seed);
  TemplateValues v;
  v.scalars["neologism"] = neologism;
  v.scalars["definition_1"] = a_first ? definition_a : definition_b;
  v.scalars["definition_2"] = a_first ? definition_b : definition_a;
  v.lists["examples"] = first_n(contexts, kJudgeExamples);
  const auto prompt = render_template(templates_of(options).pairwise, v);
  return complete_parsed(judge, prompt, [&](const std::string& r) {
    PairwiseVerdict out;
    out.value = parse_pairwise_response(r);
    out.a_first = a_first;
    out.de_shuffled = a_first ? out.value : swap_sides(out.value);
    out.raw = r;
    return out;
  });
}

// ---------------------------------------------------------------------------
// Definition evaluation

namespace {

std::uint64_t job_seed(std::uint64_t seed, std::size_t item, int shots) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (item * 8 + static_cast<std::uint64_t>(shots) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct JobOutcome {
  std::optional<PointwiseVerdict> pointwise;
  std::optional<PairwiseValue> pairwise;
  std::vector<std::string> errors;
};

}  // namespace

DefinitionEvalReport run_definition_evaluation(const std::vector<DefinitionEvalItem>& dataset, LlmClient& generator,
                                               LlmClient& judge, const std::vector<int>& shots,
                                               const DefinitionEvalOptions& options) {
  for (int s : shots) {
    if (s != 0 && s != 3 && s != 5) throw PreconditionError("shots must be 0, 3 or 5, got " + std::to_string(s));
  }
  for (const auto& item : dataset) {
    if (item.contexts.size() < kJudgeExamples) {
      throw PreconditionError("item " + item.id + " (" + item.neologism + ") has " +
                              std::to_string(item.contexts.size()) + " examples, needs " +
                              std::to_string(kJudgeExamples));
    }
  }

  const std::size_t jobs = dataset.size() * shots.size();
  std::vector<JobOutcome> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t s = j / dataset.size();
      const std::size_t i = j % dataset.size();
      const auto& item = dataset[i];
      auto& out = outcomes[j];
      std::optional<Definition> def;
      try {
        def = generate_definition(item.neologism, item.contexts, shots[s], generator, options.llm);
      } catch (const Error& e) {
        out.errors.push_back(std::string("definition: ") + e.what());
        continue;
      }
      if (options.pointwise) {
        try {
          out.pointwise = judge_pointwise(item.neologism, item.reference_definition, def->text, item.contexts, judge,
                                          options.llm)
                              .value;
        } catch (const Error& e) {
          out.errors.push_back(std::string("pointwise: ") + e.what());
        }
      }
      if (options.pairwise) {
        try {
          out.pairwise = judge_pairwise(item.neologism, def->text, item.reference_definition, item.contexts, judge,
                                        job_seed(options.seed, i, shots[s]), options.llm)
                             .de_shuffled;
        } catch (const Error& e) {
          out.errors.push_back(std::string("pairwise: ") + e.what());
        }
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, jobs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  DefinitionEvalReport report;
  if (dataset.empty()) return report;
  for (std::size_t s = 0; s < shots.size(); ++s) {
    ShotResult r;
    r.shots = shots[s];
    r.items = dataset.size();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& o = outcomes[s * dataset.size() + i];
      if (o.pointwise) ++(*o.pointwise == PointwiseVerdict::correct ? r.correct : r.incorrect);
      if (o.pairwise) {
        if (*o.pairwise == PairwiseValue::win) ++r.win;
        if (*o.pairwise == PairwiseValue::draw) ++r.draw;
        if (*o.pairwise == PairwiseValue::lose) ++r.lose;
      }
      if (!o.errors.empty()) ++r.errors;
      for (const auto& msg : o.errors) report.errors.push_back({dataset[i].id, shots[s], msg});
    }
    const auto judged = r.correct + r.incorrect;
    const auto compared = r.win + r.draw + r.lose;
    r.accuracy = judged == 0 ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(judged);
    r.win_rate = compared == 0 ? 0.0 : static_cast<double>(r.win) / static_cast<double>(compared);
    report.shots.push_back(r);
  }
  return report;
}

std::string to_json(const DefinitionEvalReport& r) {
  json shots = json::array();
  for (const auto& s : r.shots) {
    shots.push_back({{"shots", s.shots},
                     {"items", s.items},
                     {"correct", s.correct},
                     {"incorrect", s.incorrect},
                     {"win", s.win},
                     {"draw", s.draw},
                     {"lose", s.lose},
                     {"errors", s.errors},
                     {"accuracy", s.accuracy},
                     {"win_rate", s.win_rate}});
  }
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"item", e.item_id}, {"shots", e.shots}, {"message", e.message}});
  return json{{"shots", shots}, {"errors", errors}}.dump();
}

std::string format_definition_eval_table(const DefinitionEvalReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : r.shots) {
    rows.push_back({std::to_string(s.shots) + "-shot", std::to_string(s.items), std::to_string(s.correct),
                    fixed_decimal(s.accuracy), std::to_string(s.win), std::to_string(s.draw), std::to_string(s.lose),
                    fixed_decimal(s.win_rate), std::to_string(s.errors)});
  }
  return format_table({"Shots", "Items", "Correct", "Accuracy", "Win", "Draw", "Lose", "Win rate", "Errors"}, rows);
}

std::vector<DefinitionEvalItem> load_definition_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open dataset: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::vector<json> records;
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '[') {
      for (const auto& j : json::parse(text)) records.push_back(j);
    } else {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        if (!trim(line).empty()) records.push_back(json::parse(line));
      }
    }
    std::vector<DefinitionEvalItem> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& j = records[i];
      DefinitionEvalItem item;
      item.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                                 : std::to_string(i + 1);
      item.neologism = j.contains("neologism") ? j["neologism"].get<std::string>() : j.at("base_form").get<std::string>();
      item.reference_definition = j.at("definition").get<std::string>();
      const auto& ex = j.contains("examples") ? j["examples"] : j.at("contexts");
      for (const auto& e : ex) item.contexts.push_back(e.get<std::string>());
      out.push_back(std::move(item));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": malformed dataset: " + e.what());
  }
}

}  // namespace neolex
