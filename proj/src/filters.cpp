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

#include "neolex/filters.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace neolex {

using json = nlohmann::json;

void FilterConfig::validate() const {
  if (min_len < 1) throw ConfigError("min_len must be at least 1");
  if (max_len < min_len) throw ConfigError("max_len must be at least min_len");
  if (!(min_norm_edit_distance >= 0.0 && min_norm_edit_distance <= 1.0)) {
    throw ConfigError("min_norm_edit_distance must be in [0, 1]");
  }
  std::set<std::string> seen;
  for (const auto& r : enabled_references) {
    if (r.empty()) throw ConfigError("empty reference name");
    if (!seen.insert(r).second) throw ConfigError("duplicate reference: " + r);
  }
}

const std::vector<std::string>& known_filter_ids() {
  static const std::vector<std::string> ids = {
      std::string(filter_id::length),        std::string(filter_id::min_length),
      std::string(filter_id::max_length),    std::string(filter_id::digits),
      std::string(filter_id::invalid_chars), std::string(filter_id::doc_freq),
      std::string(filter_id::lowercase),     std::string(filter_id::non_ne),
      std::string(filter_id::edit_distance), std::string(filter_id::spelling),
      std::string(filter_id::english),       std::string(filter_id::reference),
      std::string(filter_id::unique_domains), std::string(filter_id::compound),
      std::string(filter_id::llm)};
  return ids;
}

bool is_known_filter_id(std::string_view id) {
  if (id.starts_with(filter_id::reference_prefix)) return id.size() > filter_id::reference_prefix.size();
  const auto& ids = known_filter_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string stage_label(std::string_view id, const FilterConfig& c) {
  const auto n = [](std::size_t v) { return std::to_string(v); };
  if (id == filter_id::length) return "+ Token Len " + n(c.min_len) + "-" + n(c.max_len);
  if (id == filter_id::min_length) return "+ Min Token Len";
  if (id == filter_id::max_length) return "+ Max Token Len";
  if (id == filter_id::digits) return "+ No Digits";
  if (id == filter_id::invalid_chars) return "+ Valid Characters";
  if (id == filter_id::doc_freq) return "+ Freq ≥ " + n(c.min_doc_freq);
  if (id == filter_id::lowercase) return "+ Non-Uppercase Freq ≥ " + n(c.min_lowercase);
  if (id == filter_id::non_ne) return "+ Non-NE Freq ≥ " + n(c.min_non_ne);
  if (id == filter_id::edit_distance) return "+ Min Edit Distance";
  if (id == filter_id::spelling) return "+ Spelling";
  if (id == filter_id::english) return "+ Non-Eng Freq ≥ " + n(c.min_polish_contexts);
  if (id == filter_id::reference) return "+ Not in Reference Corpora";
  if (id.starts_with(filter_id::reference_prefix)) {
    return "+ Not in " + std::string(id.substr(filter_id::reference_prefix.size()));
  }
  if (id == filter_id::unique_domains) return "+ Unique Domains ≥ " + n(c.min_unique_domains);
  if (id == filter_id::compound) return "+ Compound Words";
  if (id == filter_id::llm) return "+ LLM filtering";
  return "+ " + std::string(id);
}

std::vector<std::string> default_chain(const FilterConfig& config) {
  std::vector<std::string> order = {
      std::string(filter_id::min_length), std::string(filter_id::max_length),    std::string(filter_id::digits),
      std::string(filter_id::doc_freq),   std::string(filter_id::lowercase),     std::string(filter_id::non_ne),
      std::string(filter_id::edit_distance), std::string(filter_id::spelling), std::string(filter_id::english)};
  for (const auto& r : config.enabled_references) order.push_back(std::string(filter_id::reference_prefix) + r);
  if (config.llm_filter_enabled) order.push_back(std::string(filter_id::llm));
  return order;
}

bool has_triple_repeat(std::string_view word) {
  const auto cps = utf8_to_u32(word);
  for (std::size_t i = 2; i < cps.size(); ++i) {
    if (cps[i] == cps[i - 1] && cps[i] == cps[i - 2]) return true;
  }
  return false;
}

std::optional<std::pair<std::string, std::string>> compound_split(const ReferenceLexicon& dictionary,
                                                                  std::string_view word) {
  const auto cps = utf8_to_u32(normalize_form(word));
  for (std::size_t cut = 3; cut + 3 <= cps.size(); ++cut) {
    auto left = std::u32string_view(cps).substr(0, cut);
    auto right = std::u32string_view(cps).substr(cut);
    if (!right.empty() && is_hyphen(right.front())) right.remove_prefix(1);
    if (!left.empty() && is_hyphen(left.back())) left.remove_suffix(1);
    if (left.size() < 3 || right.size() < 3) continue;
    const auto l = u32_to_utf8(left), r = u32_to_utf8(right);
    if (dictionary.contains_normalized(l) && dictionary.contains_normalized(r)) return std::make_pair(l, r);
  }
  return std::nullopt;
}

namespace {

FilterDecision pass(std::string_view id, std::optional<std::string> evidence = std::nullopt) {
  return {std::string(id), true, false, {}, std::move(evidence)};
}

FilterDecision fail(std::string_view id, std::string reason, std::optional<std::string> evidence = std::nullopt) {
  return {std::string(id), false, false, std::move(reason), std::move(evidence)};
}

FilterDecision at_least(std::string_view id, std::uint64_t value, std::size_t threshold, const char* what) {
  const auto ev = std::to_string(value);
  if (value >= threshold) return pass(id, ev);
  return fail(id, std::string(what) + " " + ev + " is below " + std::to_string(threshold), ev);
}

template <typename T>
const T& need(const T* p, std::string_view id, const char* what) {
  if (!p) throw PreconditionError("filter " + std::string(id) + " needs " + what);
  return *p;
}

std::string code_point_text(char32_t cp) {
  std::string s;
  append_utf8(s, cp);
  return s;
}

FilterDecision reference_check(std::string_view id, const std::string& form, const ReferenceLexicon& lex) {
  if (lex.contains_normalized(form)) return fail(id, "present in " + lex.name(), lex.name());
  return pass(id);
}

}  // namespace

FilterDecision apply_filter(const CandidateGroup& group, std::string_view id, const FilterConfig& config,
                            const FilterLexicons& lexicons) {
  const std::string form = normalize_form(group.base_form);
  const auto& s = group.aggregate;
  const std::size_t len = utf8_length(form);

  if (id == filter_id::length || id == filter_id::min_length || id == filter_id::max_length) {
    const auto ev = std::to_string(len);
    if (id != filter_id::max_length && len < config.min_len) {
      return fail(id, "shorter than " + std::to_string(config.min_len) + " characters", ev);
    }
    if (id != filter_id::min_length && len > config.max_len) {
      return fail(id, "longer than " + std::to_string(config.max_len) + " characters", ev);
    }
    return pass(id, ev);
  }
  if (id == filter_id::digits) {
    for (char32_t cp : utf8_to_u32(form)) {
      if (is_decimal_digit(cp)) return fail(id, "contains a digit", code_point_text(cp));
    }
    return pass(id);
  }
  if (id == filter_id::invalid_chars) {
    for (char32_t cp : utf8_to_u32(form)) {
      if (!is_letter(cp) && !is_hyphen(cp) && !is_apostrophe(cp)) {
        return fail(id, "contains a character other than a letter, hyphen or apostrophe", code_point_text(cp));
      }
    }
    return pass(id);
  }
  if (id == filter_id::doc_freq) return at_least(id, s.doc_freq(), config.min_doc_freq, "document frequency");
  if (id == filter_id::lowercase) return at_least(id, s.lowercase_count, config.min_lowercase, "lowercase count");
  if (id == filter_id::non_ne) return at_least(id, s.non_ne_count, config.min_non_ne, "non-proper-noun count");
  if (id == filter_id::unique_domains) {
    return at_least(id, s.unique_domains(), config.min_unique_domains, "unique domain count");
  }
  if (id == filter_id::edit_distance) {
    const auto& index = need(lexicons.edit_index, id, "an edit-distance index");
    if (auto near = index.nearest_within(form, config.min_norm_edit_distance)) {
      return fail(id, "normalized edit distance " + std::to_string(near->distance) + " to '" + near->form +
                          "' does not exceed " + std::to_string(config.min_norm_edit_distance),
                  near->form);
    }
    return pass(id);
  }
  if (id == filter_id::spelling) {
    const auto& dict = need(lexicons.dictionary, id, "a dictionary");
    if (has_triple_repeat(form)) return fail(id, "triple repeated letter", form);
    if (is_diacritic_variant(dict, lexicons.fold, form)) return fail(id, "diacritic variant of a dictionary word");
    if (is_adjacent_swap_variant(dict, form)) return fail(id, "adjacent-letter swap of a dictionary word");
    return pass(id);
  }
  if (id == filter_id::english) {
    const auto& en = need(lexicons.english, id, "an English dictionary");
    if (!en.contains_normalized(form)) return pass(id);
    return at_least(id, s.polish_context_count, config.min_polish_contexts, "English word with Polish context count");
  }
  if (id == filter_id::reference) {
    for (const auto& name : config.enabled_references) {
      auto it = lexicons.references.find(name);
      if (it == lexicons.references.end() || !it->second) {
        throw PreconditionError("filter " + std::string(id) + " needs reference lexicon " + name);
      }
      auto d = reference_check(id, form, *it->second);
      if (!d.passed) return d;
    }
    return pass(id);
  }
  if (id.starts_with(filter_id::reference_prefix) && id.size() > filter_id::reference_prefix.size()) {
    const std::string name(id.substr(filter_id::reference_prefix.size()));
    auto it = lexicons.references.find(name);
    if (it == lexicons.references.end() || !it->second) {
      throw PreconditionError("filter " + std::string(id) + " needs reference lexicon " + name);
    }
    return reference_check(id, form, *it->second);
  }
  if (id == filter_id::compound) {
    const auto& dict = need(lexicons.dictionary, id, "a dictionary");
    if (auto split = compound_split(dict, form)) {
      const auto ev = split->first + "+" + split->second;
      if (config.reject_compounds) return fail(id, "compound of two dictionary words", ev);
      auto d = pass(id, ev);
      d.reason = "compound of two dictionary words";
      return d;
    }
    return pass(id);
  }
  if (id == filter_id::llm) throw PreconditionError("the llm filter needs a client; use llm_filter");
  throw PreconditionError("unknown filter id: " + std::string(id));
}

// ---------------------------------------------------------------------------
// LLM filter

void LlmExemplars::validate() const {
  if (positive.size() != 3 || negative.size() != 3) {
    throw ConfigError("LLM exemplars need exactly 3 positive and 3 negative words, got " +
                      std::to_string(positive.size()) + " and " + std::to_string(negative.size()));
  }
  for (const auto* side : {&positive, &negative}) {
    for (const auto& e : *side) {
      if (trim(e.word).empty() || e.examples.empty()) throw ConfigError("LLM exemplar needs a word and examples");
    }
  }
}

LlmExemplars parse_llm_exemplars(std::string_view text) {
  LlmExemplars out;
  try {
    const auto j = json::parse(text);
    for (const auto& [key, side] : {std::pair{"positive", &out.positive}, std::pair{"negative", &out.negative}}) {
      for (const auto& e : j.at(key)) {
        LlmExemplar x;
        x.word = e.at("word").get<std::string>();
        for (const auto& ex : e.at("examples")) x.examples.push_back(ex.get<std::string>());
        side->push_back(std::move(x));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed LLM exemplars: ") + e.what());
  }
  out.validate();
  return out;
}

LlmExemplars load_llm_exemplars(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open LLM exemplars: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_llm_exemplars(ss.str());
}

namespace {

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string llm_filter_prompt(const CandidateGroup& group, const LlmExemplars& exemplars, std::size_t max_contexts,
                              const PromptTemplates& templates) {
  exemplars.validate();
  if (group.aggregate.contexts.empty()) throw PreconditionError("group " + group.id + " has no context");
  TemplateValues v;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto n = std::to_string(i + 1);
    v.scalars["pos_word_" + n] = exemplars.positive[i].word;
    v.scalars["pos_examples_" + n] = join(exemplars.positive[i].examples, "\n");
    v.scalars["neg_word_" + n] = exemplars.negative[i].word;
    v.scalars["neg_examples_" + n] = join(exemplars.negative[i].examples, "\n");
  }
  std::set<std::string> forms;
  for (const auto& m : group.members) {
    for (const auto& [surface, _] : m.surface_variants) forms.insert(normalize_form(surface));
  }
  if (forms.empty()) forms.insert(group.base_form);
  std::vector<std::string> examples;
  for (const auto& c : group.aggregate.contexts) {
    if (examples.size() >= max_contexts) break;
    examples.push_back(c.sentence);
  }
  v.scalars["word"] = group.base_form;
  v.scalars["forms"] = join({forms.begin(), forms.end()}, ", ");
  v.scalars["examples"] = join(examples, "\n");
  return render_template(templates.filter, v);
}

FilterDecision llm_filter(const CandidateGroup& group, const LlmExemplars& exemplars, LlmClient& client,
                          std::size_t max_contexts, const PromptTemplates& templates) {
  const auto prompt = llm_filter_prompt(group, exemplars, max_contexts, templates);
  const auto id = filter_id::llm;
  try {
    const bool verdict = complete_parsed(client, prompt, [](const std::string& r) {
      auto v = parse_filter_verdict(r);
      if (!v) throw LlmParseError("no 'Neologizm: tak|nie' marker in response", r);
      return *v;
    });
    if (verdict) return pass(id, "tak");
    return fail(id, "LLM judged it not a neologism", "nie");
  } catch (const LlmParseError& e) {
    FilterDecision d = pass(id);
    d.undetermined = true;
    d.reason = std::string("undetermined: ") + e.what();
    d.evidence = e.raw();
    return d;
  } catch (const LlmError& e) {
    FilterDecision d = pass(id);
    d.undetermined = true;
    d.reason = std::string("undetermined: ") + e.what();
    return d;
  }
}

// ---------------------------------------------------------------------------
// Chain

GoldSet GoldSet::from_words(const std::vector<std::string>& words, bool exhaustive) {
  GoldSet g;
  g.exhaustive = exhaustive;
  for (const auto& w : words) {
    const auto f = normalize_form(w);
    if (!f.empty()) g.forms.insert(f);
  }
  return g;
}

std::optional<std::string> gold_match(const CandidateGroup& group, const GoldSet& gold) {
  const auto base = normalize_form(group.base_form);
  if (gold.forms.count(base)) return base;
  for (const auto& m : group.members) {
    if (gold.forms.count(m.key)) return m.key;
  }
  return std::nullopt;
}

StageReport evaluate_stage(std::string label, std::string id, const std::vector<CandidateGroup>& survivors,
                           const std::optional<GoldSet>& gold) {
  StageReport r;
  r.stage_label = std::move(label);
  r.filter_id = std::move(id);
  r.remaining = survivors.size();
  if (!gold) return r;
  std::set<std::string> predicted;
  for (const auto& g : survivors) {
    auto m = gold_match(g, *gold);
    predicted.insert(m ? *m : "\x1f" + g.id);  // non-gold ids cannot collide with gold forms
  }
  const auto prf = compute_prf(predicted, gold->forms);
  r.gold_matches = prf.tp;
  r.precision = prf.precision;
  if (gold->exhaustive) {
    r.recall = prf.recall;
    r.f1 = prf.f1;
  }
  return r;
}

namespace {

template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

ChainResult run_chain(const std::vector<CandidateGroup>& groups, const std::vector<std::string>& order,
                      const FilterConfig& config, const FilterLexicons& lexicons, const ChainOptions& options) {
  config.validate();
  for (const auto& id : order) {
    if (!is_known_filter_id(id)) throw PreconditionError("unknown filter id: " + id);
    if (id == filter_id::llm) {
      if (!options.llm || !options.llm->client) throw PreconditionError("the llm filter needs a configured client");
      options.llm->exemplars.validate();
    }
  }
  const std::size_t workers =
      options.parallelism ? options.parallelism : std::max(1u, std::thread::hardware_concurrency());

  ChainResult result;
  result.survivors = groups;
  result.stages.push_back(evaluate_stage("No filter", "", result.survivors, options.gold));

  for (const auto& id : order) {
    std::vector<FilterDecision> decisions(result.survivors.size());
    if (id == filter_id::llm) {
      const auto& setup = *options.llm;
      const auto& templates = setup.templates ? *setup.templates : PromptTemplates::defaults();
      parallel_for(result.survivors.size(), setup.parallelism, [&](std::size_t i) {
        decisions[i] = llm_filter(result.survivors[i], setup.exemplars, *setup.client, setup.max_contexts, templates);
      });
    } else {
      parallel_for(result.survivors.size(), workers, [&](std::size_t i) {
        decisions[i] = apply_filter(result.survivors[i], id, config, lexicons);
      });
    }
    std::vector<CandidateGroup> kept;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      auto& g = result.survivors[i];
      auto& d = decisions[i];
      result.audit[g.id].push_back(d);
      if (d.passed) {
        if (d.undetermined || (id == filter_id::compound && d.evidence)) result.flags[g.id] = d;
        kept.push_back(std::move(g));
      } else {
        result.rejected.push_back({std::move(g), std::move(d)});
      }
    }
    result.survivors = std::move(kept);
    result.stages.push_back(evaluate_stage(stage_label(id, config), id, result.survivors, options.gold));
  }

  const bool compound_in_chain = std::find(order.begin(), order.end(), filter_id::compound) != order.end();
  if (lexicons.dictionary && !compound_in_chain) {
    for (const auto& g : result.survivors) {
      auto d = apply_filter(g, filter_id::compound, FilterConfig{}, lexicons);
      if (d.evidence && !result.flags.count(g.id)) result.flags[g.id] = d;
    }
  }
  return result;
}

std::string to_json(const FilterDecision& d) {
  return json{{"filter_id", d.filter_id},
              {"passed", d.passed},
              {"undetermined", d.undetermined},
              {"reason", d.reason},
              {"evidence", d.evidence ? json(*d.evidence) : json(nullptr)}}
      .dump();
}

}  // namespace neolex
