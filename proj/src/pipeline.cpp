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

#include "neolex/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_codec.hpp"

namespace neolex {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration file

namespace {

const std::vector<std::string>& endpoint_keys() {
  static const std::vector<std::string> keys = {"endpoint", "model",       "temperature", "top_p", "max_tokens",
                                                "timeout",  "retries",     "api_key_env", "mock"};
  return keys;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  for (const auto& part : split(v, ',')) {
    const auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

class Line {
 public:
  Line(std::size_t number, std::string key, std::string value)
      : number_(number), key_(std::move(key)), value_(std::move(value)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(number_) + ": " + key_ + ": " + what);
  }

  const std::string& str() const { return value_; }

  std::size_t size() const {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      if (!value_.empty() && value_[0] == '-') throw std::invalid_argument("negative");
      v = std::stoull(value_, &pos);
    } catch (const std::exception&) {
      fail("expected a non-negative integer, got '" + value_ + "'");
    }
    if (pos != value_.size()) fail("expected a non-negative integer, got '" + value_ + "'");
    return static_cast<std::size_t>(v);
  }

  int integer() const {
    const auto v = size();
    if (v > 1'000'000'000) fail("value out of range");
    return static_cast<int>(v);
  }

  double real() const {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(value_, &pos);
    } catch (const std::exception&) {
      fail("expected a number, got '" + value_ + "'");
    }
    if (pos != value_.size()) fail("expected a number, got '" + value_ + "'");
    return v;
  }

  bool boolean() const {
    const auto v = to_lower(value_);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail("expected true or false, got '" + value_ + "'");
  }

  std::filesystem::path path(const std::filesystem::path& base) const {
    if (value_.empty()) fail("empty path");
    std::filesystem::path p(value_);
    return p.is_absolute() || base.empty() ? p : base / p;
  }

 private:
  std::size_t number_;
  std::string key_;
  std::string value_;
};

void set_endpoint(LlmEndpointConfig& e, const std::string& field, const Line& line,
                  const std::filesystem::path& base) {
  auto& c = e.client;
  if (field == "endpoint") c.endpoint = line.str();
  else if (field == "model") c.model = line.str();
  else if (field == "temperature") c.temperature = line.real();
  else if (field == "top_p") c.top_p = line.real();
  else if (field == "max_tokens") c.max_tokens = line.integer();
  else if (field == "timeout") c.timeout = std::chrono::seconds(line.size());
  else if (field == "retries") c.retries = line.integer();
  else if (field == "api_key_env") e.api_key_env = line.str();
  else if (field == "mock") e.mock = line.path(base);
}

}  // namespace

const std::vector<std::string>& app_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {"database",
                                  "feeds",
                                  "lexicon.dictionary",
                                  "lexicon.english",
                                  "lexicon.reference.<name>",
                                  "extract.references",
                                  "filter.min_len",
                                  "filter.max_len",
                                  "filter.min_doc_freq",
                                  "filter.min_lowercase",
                                  "filter.min_non_ne",
                                  "filter.min_polish_contexts",
                                  "filter.min_norm_edit_distance",
                                  "filter.min_unique_domains",
                                  "filter.references",
                                  "filter.llm",
                                  "filter.reject_compounds",
                                  "filter.chain",
                                  "analyzer",
                                  "analyzer.command",
                                  "analyzer.url",
                                  "analyzer.timeout_ms",
                                  "analyzer.mode",
                                  "contexts.limit",
                                  "parallelism",
                                  "llm.parallelism",
                                  "llm.exemplars",
                                  "llm.templates",
                                  "ingest.timeout",
                                  "ingest.parallel_sources",
                                  "ingest.user_agent"};
    for (const auto& f : endpoint_keys()) {
      k.push_back("llm." + f);
      k.push_back("judge." + f);
    }
    return k;
  }();
  return keys;
}

AppConfig parse_app_config(std::string_view text, const std::filesystem::path& base_dir) {
  AppConfig c;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto t = trim(raw);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key(trim(t.substr(0, eq)));
    const Line line(number, key, std::string(trim(t.substr(eq + 1))));
    auto& f = c.filter;

    if (key == "database") c.database = line.path(base_dir);
    else if (key == "feeds") c.feeds = line.path(base_dir);
    else if (key == "lexicon.dictionary") c.dictionary = line.path(base_dir);
    else if (key == "lexicon.english") c.english = line.path(base_dir);
    else if (key.rfind("lexicon.reference.", 0) == 0 && key.size() > 18) c.references[key.substr(18)] = line.path(base_dir);
    else if (key == "extract.references") c.extract_references = parse_list(line.str());
    else if (key == "filter.min_len") f.min_len = line.size();
    else if (key == "filter.max_len") f.max_len = line.size();
    else if (key == "filter.min_doc_freq") f.min_doc_freq = line.size();
    else if (key == "filter.min_lowercase") f.min_lowercase = line.size();
    else if (key == "filter.min_non_ne") f.min_non_ne = line.size();
    else if (key == "filter.min_polish_contexts") f.min_polish_contexts = line.size();
    else if (key == "filter.min_norm_edit_distance") f.min_norm_edit_distance = line.real();
    else if (key == "filter.min_unique_domains") f.min_unique_domains = line.size();
    else if (key == "filter.references") f.enabled_references = parse_list(line.str());
    else if (key == "filter.llm") f.llm_filter_enabled = line.boolean();
    else if (key == "filter.reject_compounds") f.reject_compounds = line.boolean();
    else if (key == "filter.chain") {
      c.chain = parse_list(line.str());
      for (const auto& id : c.chain) {
        if (!is_known_filter_id(id)) line.fail("unknown filter id '" + id + "'");
      }
    } else if (key == "analyzer") {
      if (line.str() != "identity" && line.str() != "command" && line.str() != "http") {
        line.fail("expected identity, command or http");
      }
      c.analyzer = line.str();
    } else if (key == "analyzer.command") c.analyzer_command = line.str();
    else if (key == "analyzer.url") c.analyzer_url = line.str();
    else if (key == "analyzer.timeout_ms") c.analyzer_timeout = std::chrono::milliseconds(line.size());
    else if (key == "analyzer.mode") {
      try {
        c.lemma_mode = parse_lemma_mode(line.str());
      } catch (const Error& e) {
        line.fail(e.what());
      }
    } else if (key == "contexts.limit") c.context_limit = line.size();
    else if (key == "parallelism") c.parallelism = line.size();
    else if (key == "llm.parallelism") c.llm_parallelism = line.size();
    else if (key == "llm.exemplars") c.llm_exemplars = line.path(base_dir);
    else if (key == "llm.templates") c.llm_templates = line.path(base_dir);
    else if (key == "ingest.timeout") c.ingest_timeout = std::chrono::seconds(line.size());
    else if (key == "ingest.parallel_sources") c.ingest_parallel_sources = line.size();
    else if (key == "ingest.user_agent") c.ingest_user_agent = line.str();
    else {
      const auto dot = key.find('.');
      const std::string section = key.substr(0, dot);
      const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
      const auto& ek = endpoint_keys();
      if ((section == "llm" || section == "judge") && std::find(ek.begin(), ek.end(), field) != ek.end()) {
        auto& slot = section == "llm" ? c.llm : c.judge;
        if (!slot) slot.emplace();
        set_endpoint(*slot, field, line, base_dir);
      } else {
        line.fail("unknown key");
      }
    }
  }
  c.filter.validate();
  if (c.analyzer == "command" && c.analyzer_command.empty()) throw ConfigError("analyzer.command is required");
  if (c.analyzer == "http" && c.analyzer_url.empty()) throw ConfigError("analyzer.url is required");
  for (auto* e : {&c.llm, &c.judge}) {
    if (!*e) continue;
    (*e)->client.validate();
    if (!(*e)->mock && (*e)->client.endpoint.empty()) {
      throw ConfigError((e == &c.llm ? "llm" : "judge") + std::string(": endpoint or mock is required"));
    }
  }
  return c;
}

AppConfig load_app_config(const std::filesystem::path& path) {
  return parse_app_config(read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Resources

Resources::Resources(const AppConfig& config) : extract_names_(config.extract_references) {
  if (config.dictionary) {
    dictionary_ = std::make_unique<ReferenceLexicon>(load_lexicon(*config.dictionary, LexiconKind::dictionary, "dictionary"));
  }
  if (config.english) {
    english_ = std::make_unique<ReferenceLexicon>(load_lexicon(*config.english, LexiconKind::dictionary, "english"));
  }
  for (const auto& [name, path] : config.references) {
    references_[name] = std::make_unique<ReferenceLexicon>(load_lexicon(path, LexiconKind::frequency_list, name));
  }
  index();
}

Resources::Resources(std::optional<ReferenceLexicon> dictionary, std::optional<ReferenceLexicon> english,
                     std::map<std::string, ReferenceLexicon> references, std::vector<std::string> extract_references)
    : extract_names_(std::move(extract_references)) {
  if (dictionary) dictionary_ = std::make_unique<ReferenceLexicon>(std::move(*dictionary));
  if (english) english_ = std::make_unique<ReferenceLexicon>(std::move(*english));
  for (auto& [name, lex] : references) references_[name] = std::make_unique<ReferenceLexicon>(std::move(lex));
  index();
}

void Resources::index() {
  if (dictionary_) edit_index_ = std::make_unique<EditDistanceIndex>(*dictionary_);
}

const ReferenceLexicon* Resources::reference(const std::string& name) const {
  auto it = references_.find(name);
  return it == references_.end() ? nullptr : it->second.get();
}

FilterLexicons Resources::filter_lexicons() const {
  FilterLexicons l;
  l.dictionary = dictionary_.get();
  l.edit_index = edit_index_.get();
  l.english = english_.get();
  for (const auto& [name, lex] : references_) l.references[name] = lex.get();
  l.fold = fold_;
  return l;
}

std::vector<const ReferenceLexicon*> Resources::extraction_references() const {
  std::vector<const ReferenceLexicon*> out;
  for (const auto& name : extract_names_) {
    const ReferenceLexicon* lex = name == "dictionary" ? dictionary_.get()
                                  : name == "english"  ? english_.get()
                                                       : reference(name);
    if (!lex) throw ConfigError("extract.references: no lexicon named '" + name + "' is loaded");
    out.push_back(lex);
  }
  return out;
}

std::unique_ptr<AnalyzerAdapter> make_analyzer(const AppConfig& c) {
  if (c.analyzer == "command") return std::make_unique<SubprocessAdapter>(c.analyzer_command, c.analyzer_timeout);
  if (c.analyzer == "http") {
    return std::make_unique<HttpAdapter>(
        c.analyzer_url, std::chrono::ceil<std::chrono::seconds>(c.analyzer_timeout));
  }
  return std::make_unique<IdentityAdapter>();
}

std::unique_ptr<LlmClient> make_llm_client(const LlmEndpointConfig& e) {
  if (e.mock) return MockClient::from_file(*e.mock);
  auto client = e.client;
  if (!e.api_key_env.empty()) {
    const char* key = std::getenv(e.api_key_env.c_str());
    if (!key || !*key) throw ConfigError("environment variable " + e.api_key_env + " is not set");
    client.api_key = key;
  }
  return std::make_unique<HttpChatClient>(client);
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<Document> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      if (j.contains("id")) {
        out.push_back(document_from_json(line));
      } else {
        out.push_back(make_document(j.at("url").get<std::string>(), j.at("text").get<std::string>(),
                                    parse_timestamp(j.at("fetched_at").get<std::string>())));
      }
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

GoldSet load_gold_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (!t.empty() && t.front() != '#') words.emplace_back(t);
  }
  return GoldSet::from_words(words);
}

// ---------------------------------------------------------------------------
// Corpus to candidate groups

PipelineResult build_candidate_groups(const std::vector<Document>& documents, AnalyzerAdapter& adapter,
                                      const std::vector<const ReferenceLexicon*>& references,
                                      const PipelineOptions& options) {
  if (references.empty()) throw PreconditionError("at least one extraction reference is required");
  PipelineResult r;
  r.documents = documents.size();
  const auto workers = std::max<std::size_t>(1, options.parallelism);
  const auto annotated = annotate_all(documents, adapter, options.annotate, workers);
  for (const auto& d : annotated) r.annotation_warnings += d.warnings.size();

  std::vector<CandidateAccumulator> parts(std::min(workers, std::max<std::size_t>(1, annotated.size())),
                                          CandidateAccumulator(options.context_limit));
  std::vector<std::size_t> counts(parts.size(), 0);
  std::vector<std::exception_ptr> errors(parts.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < parts.size(); ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < annotated.size(); i += parts.size()) {
            const auto occ = make_occurrences(annotated[i], extract_candidates(annotated[i], references));
            counts[w] += occ.size();
            parts[w].add_all(occ);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  CandidateAccumulator total(options.context_limit);
  for (std::size_t w = 0; w < parts.size(); ++w) {
    total.merge(parts[w]);
    r.occurrences += counts[w];
  }
  r.candidate_forms = total.size();

  const auto clusters = consolidate_orthographic_variants(total, annotated);
  r.clusters = clusters.size();
  r.groups = group_by_lemma(clusters, adapter, options.lemma_mode, &r.grouping_warnings, options.context_limit);
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation datasets

namespace {

std::vector<json> read_records(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<json> records;
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
      for (const auto& j : json::parse(text)) records.push_back(j);
    } else {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        if (!trim(line).empty()) records.push_back(json::parse(line));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": malformed dataset: " + e.what());
  }
  return records;
}

std::vector<std::string> strings(const json& j) {
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::string word_of(const json& j) {
  return j.contains("neologism") ? j["neologism"].get<std::string>() : j.at("base_form").get<std::string>();
}

}  // namespace

std::vector<GroupingItem> load_grouping_dataset(const std::filesystem::path& path) {
  std::vector<GroupingItem> out;
  try {
    for (const auto& j : read_records(path)) {
      GroupingItem item;
      item.base_form = j.at("base_form").get<std::string>();
      item.forms = strings(j.at("forms"));
      if (j.contains("examples")) item.examples = strings(j["examples"]);
      out.push_back(std::move(item));
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": malformed record: " + e.what());
  }
  return out;
}

std::vector<LemmaGroup> lemmatize_grouping_items(const std::vector<GroupingItem>& items, AnalyzerAdapter& adapter,
                                                 LemmaMode mode) {
  std::vector<LemmaGroup> out;
  for (const auto& item : items) {
    LemmaGroup g;
    g.gold_base_form = item.base_form;
    for (const auto& form : item.forms) {
      std::optional<std::string_view> sentence;
      if (mode == LemmaMode::in_context && !item.examples.empty()) {
        const auto needle = to_lower(form);
        sentence = item.examples.front();
        for (const auto& ex : item.examples) {
          if (to_lower(ex).find(needle) != std::string::npos) {
            sentence = ex;
            break;
          }
        }
      }
      std::string lemma = form;
      try {
        if (auto l = adapter.analyze(form, sentence).lemma) lemma = *l;
      } catch (const AnalyzerError&) {
      }
      g.forms.push_back({form, lemma});
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<CategoryEvalItem> load_category_dataset(const std::filesystem::path& path) {
  std::vector<CategoryEvalItem> out;
  const auto records = read_records(path);
  try {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& j = records[i];
      CategoryEvalItem item;
      item.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                                 : std::to_string(i + 1);
      item.neologism = word_of(j);
      if (j.contains("definition")) item.definition = j["definition"].get<std::string>();
      item.contexts = strings(j.contains("examples") ? j["examples"] : j.at("contexts"));
      item.sentiment = parse_sentiment(j.at("sentiment").get<std::string>());
      item.domain = parse_domain(j.at("domain").get<std::string>());
      out.push_back(std::move(item));
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": malformed record: " + e.what());
  }
  return out;
}

CategoryEvalReport run_category_evaluation(const std::vector<CategoryEvalItem>& items, LlmClient& client,
                                           CategorySetup setup, const LlmOptions& options) {
  CategoryEvalReport r;
  r.setup = setup;
  std::vector<Sentiment> ps, gs;
  std::vector<Domain> pd, gd;
  for (const auto& item : items) {
    std::optional<Definition> def;
    if (!item.definition.empty()) {
      def = Definition{item.neologism, item.definition, 0, {}, "reference", {}};
    }
    try {
      const auto s = categorize_sentiment(item.neologism, setup, item.contexts, def, client, options);
      const auto d = categorize_domain(item.neologism, setup, item.contexts, def, client, options);
      ps.push_back(s.value);
      gs.push_back(item.sentiment);
      pd.push_back(d.value);
      gd.push_back(item.domain);
    } catch (const Error& e) {
      r.errors.push_back({item.id, 0, e.what()});
    }
  }
  r.sentiment = compute_categorization(ps, gs);
  r.domain = compute_categorization(pd, gd);
  return r;
}

std::string to_json(const CategoryEvalReport& r) {
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"item", e.item_id}, {"message", e.message}});
  return json{{"setup", to_string(r.setup)},
              {"sentiment", json::parse(to_json(r.sentiment))},
              {"domain", json::parse(to_json(r.domain))},
              {"errors", errors}}
      .dump();
}

}  // namespace neolex
