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

#include "neolex/candidates.hpp"

#include <algorithm>
#include <numeric>

#include "json_codec.hpp"

namespace neolex {

std::strong_ordering Context::operator<=>(const Context& o) const {
  if (auto c = timestamp <=> o.timestamp; c != 0) return c;
  if (auto c = doc_id <=> o.doc_id; c != 0) return c;
  if (auto c = sentence_index <=> o.sentence_index; c != 0) return c;
  return sentence <=> o.sentence;
}

void merge_contexts(std::vector<Context>& into, const std::vector<Context>& from, std::size_t limit) {
  std::vector<Context> all;
  all.reserve(into.size() + from.size());
  all.insert(all.end(), into.begin(), into.end());
  all.insert(all.end(), from.begin(), from.end());
  std::sort(all.begin(), all.end());
  std::set<std::string_view> seen;
  std::vector<Context> out;
  for (auto& c : all) {
    if (out.size() >= limit) break;
    if (!seen.insert(c.sentence).second) continue;
    out.push_back(c);
  }
  into = std::move(out);
}

std::string CandidateStats::dominant_surface() const {
  std::string best;
  std::uint64_t best_count = 0;
  for (const auto& [surface, count] : surface_variants) {
    if (count > best_count) {
      best = surface;
      best_count = count;
    }
  }
  return best.empty() ? key : best;
}

void CandidateStats::merge(const CandidateStats& other, std::size_t context_limit) {
  for (const auto& [s, c] : other.surface_variants) surface_variants[s] += c;
  doc_ids.insert(other.doc_ids.begin(), other.doc_ids.end());
  term_freq += other.term_freq;
  lowercase_count += other.lowercase_count;
  non_ne_count += other.non_ne_count;
  polish_context_count += other.polish_context_count;
  for (const auto& [d, c] : other.domain_counts) domain_counts[d] += c;
  for (const auto& [d, c] : other.daily_counts) daily_counts[d] += c;
  merge_contexts(contexts, other.contexts, context_limit);
  if (other.first_seen && (!first_seen || *other.first_seen < *first_seen)) first_seen = other.first_seen;
  if (other.last_seen && (!last_seen || *other.last_seen > *last_seen)) last_seen = other.last_seen;
}

CandidateStats merge_all(std::string key, const std::vector<CandidateStats>& parts, std::size_t context_limit) {
  CandidateStats out;
  out.key = std::move(key);
  for (const auto& p : parts) out.merge(p, context_limit);
  return out;
}

// ---------------------------------------------------------------------------
// Extraction and accumulation

std::vector<CandidateToken> extract_candidates(const AnnotatedDocument& doc,
                                               const std::vector<const ReferenceLexicon*>& references) {
  if (references.empty()) throw PreconditionError("candidate extraction needs at least one reference lexicon");
  std::vector<CandidateToken> out;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto& tok = doc.tokens[i];
    const auto cps = utf8_to_u32(tok.surface);
    if (std::none_of(cps.begin(), cps.end(), [](char32_t c) { return is_letter(c); })) continue;
    const std::string key = normalize_form(tok.surface);
    const bool known = std::any_of(references.begin(), references.end(),
                                   [&](const ReferenceLexicon* r) { return r->contains_normalized(key); });
    if (!known) out.push_back({i, key});
  }
  return out;
}

std::vector<Occurrence> make_occurrences(const AnnotatedDocument& doc, const std::vector<CandidateToken>& candidates) {
  std::vector<Occurrence> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto& tok = doc.tokens.at(c.token_index);
    Occurrence o;
    o.key = c.key;
    o.surface = tok.surface;
    o.cap = tok.cap;
    o.proper_noun = tok.is_proper_noun.value_or(heuristic_proper_noun(tok));
    o.doc_id = doc.document.id;
    o.host_domain = doc.document.host_domain;
    o.timestamp = doc.document.fetched_at;
    o.sentence_index = tok.sentence_index;
    o.sentence = doc.sentences.at(tok.sentence_index).text;
    o.polish_context = context_language(doc, tok.sentence_index) == "pl";
    out.push_back(std::move(o));
  }
  return out;
}

CandidateStats stats_of(const Occurrence& o, std::size_t context_limit) {
  CandidateStats s;
  s.key = o.key;
  s.surface_variants[o.surface] = 1;
  s.doc_ids.insert(o.doc_id);
  s.term_freq = 1;
  s.lowercase_count = o.cap == CapClass::lower ? 1 : 0;
  s.non_ne_count = o.proper_noun ? 0 : 1;
  s.polish_context_count = o.polish_context ? 1 : 0;
  s.domain_counts[o.host_domain] = 1;
  s.daily_counts[start_of_day(o.timestamp)] = 1;
  if (context_limit > 0) s.contexts.push_back({o.sentence, o.doc_id, o.timestamp, o.sentence_index});
  s.first_seen = o.timestamp;
  s.last_seen = o.timestamp;
  return s;
}

void CandidateAccumulator::add(const Occurrence& occurrence) {
  auto [it, inserted] = stats_.try_emplace(occurrence.key);
  if (inserted) it->second.key = occurrence.key;
  it->second.merge(stats_of(occurrence, context_limit_), context_limit_);
}

void CandidateAccumulator::add_all(const std::vector<Occurrence>& occurrences) {
  for (const auto& o : occurrences) add(o);
}

void CandidateAccumulator::merge(const CandidateAccumulator& other) {
  for (const auto& [key, s] : other.stats_) {
    auto [it, inserted] = stats_.try_emplace(key);
    if (inserted) it->second.key = key;
    it->second.merge(s, context_limit_);
  }
}

const CandidateStats* CandidateAccumulator::find(std::string_view key) const {
  const auto it = stats_.find(std::string(key));
  return it == stats_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Consolidation

std::string consolidation_key(std::string_view form) {
  std::u32string out;
  for (char32_t cp : utf8_to_u32(normalize_form(form))) {
    if (is_hyphen(cp) || is_space(cp)) continue;
    out.push_back(cp);
  }
  return u32_to_utf8(out);
}

std::vector<VariantCluster> consolidate_orthographic_variants(const CandidateAccumulator& stats,
                                                              const std::vector<AnnotatedDocument>& bigram_source) {
  const std::size_t limit = stats.context_limit();
  std::map<std::string, std::vector<CandidateStats>> by_key;
  for (const auto& [form, s] : stats.stats()) by_key[consolidation_key(form)].push_back(s);

  // Spaced variants: adjacent tokens in one sentence whose concatenation is a known key.
  CandidateAccumulator spaced(limit);
  for (const auto& doc : bigram_source) {
    for (std::size_t i = 0; i + 1 < doc.tokens.size(); ++i) {
      const auto& a = doc.tokens[i];
      const auto& b = doc.tokens[i + 1];
      if (a.sentence_index != b.sentence_index) continue;
      const std::string joined = consolidation_key(a.surface + b.surface);
      if (!by_key.count(joined)) continue;
      Occurrence o;
      o.surface = a.surface + " " + b.surface;
      o.key = normalize_form(o.surface);
      if (stats.find(o.key)) continue;  // already a single-token form
      o.cap = cap_class(o.surface);
      o.proper_noun = a.is_proper_noun.value_or(heuristic_proper_noun(a)) ||
                      b.is_proper_noun.value_or(heuristic_proper_noun(b));
      o.doc_id = doc.document.id;
      o.host_domain = doc.document.host_domain;
      o.timestamp = doc.document.fetched_at;
      o.sentence_index = a.sentence_index;
      o.sentence = doc.sentences.at(a.sentence_index).text;
      o.polish_context = context_language(doc, a.sentence_index) == "pl";
      spaced.add(o);
    }
  }
  for (const auto& [form, s] : spaced.stats()) by_key[consolidation_key(form)].push_back(s);

  std::vector<VariantCluster> out;
  out.reserve(by_key.size());
  for (auto& [key, members] : by_key) {
    std::sort(members.begin(), members.end(),
              [](const CandidateStats& x, const CandidateStats& y) { return x.key < y.key; });
    VariantCluster c;
    c.key = key;
    c.aggregate = merge_all(key, members, limit);
    c.members = std::move(members);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grouping

std::string to_string(LemmaMode m) { return m == LemmaMode::context_free ? "isolated" : "context"; }

LemmaMode parse_lemma_mode(std::string_view s) {
  const auto k = to_lower(trim(s));
  if (k == "isolated" || k == "context-free" || k == "context_free") return LemmaMode::context_free;
  if (k == "context" || k == "in-context" || k == "in_context") return LemmaMode::in_context;
  throw ParseError("unknown lemmatization mode: " + std::string(s));
}

std::vector<std::string> CandidateGroup::member_keys() const {
  std::vector<std::string> out;
  for (const auto& m : members) out.push_back(m.key);
  return out;
}

CandidateStats CandidateGroup::recompute_aggregate(std::size_t context_limit) const {
  return merge_all(base_form, members, context_limit);
}

namespace {

std::string lemma_for(const CandidateStats& form, AnalyzerAdapter& adapter, LemmaMode mode,
                      std::vector<GroupingWarning>* warnings) {
  const std::string surface = form.dominant_surface();
  auto call = [&](std::optional<std::string_view> sentence) -> std::optional<std::string> {
    try {
      auto lemma = adapter.analyze(surface, sentence).lemma;
      if (lemma && !trim(*lemma).empty()) return normalize_form(*lemma);
      return std::nullopt;
    } catch (const std::exception& e) {
      if (warnings) warnings->push_back({form.key, e.what()});
      return std::nullopt;
    }
  };
  if (!adapter.capabilities().lemma) return form.key;
  if (mode == LemmaMode::context_free || form.contexts.empty()) return call(std::nullopt).value_or(form.key);

  std::map<std::string, std::size_t> votes;
  for (const auto& ctx : form.contexts) ++votes[call(ctx.sentence).value_or(form.key)];
  std::string best;
  std::size_t best_votes = 0;
  for (const auto& [lemma, n] : votes) {
    if (n > best_votes) {
      best = lemma;
      best_votes = n;
    }
  }
  return best;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<CandidateGroup> group_by_lemma(const std::vector<VariantCluster>& clusters, AnalyzerAdapter& adapter,
                                           LemmaMode mode, std::vector<GroupingWarning>* warnings,
                                           std::size_t context_limit) {
  std::vector<std::map<std::string, std::string>> lemmas(clusters.size());
  std::map<std::string, std::size_t> first_cluster_of_lemma;
  DisjointSets sets(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (const auto& member : clusters[i].members) {
      const auto lemma = lemma_for(member, adapter, mode, warnings);
      lemmas[i][member.key] = lemma;
      const auto [it, inserted] = first_cluster_of_lemma.try_emplace(lemma, i);
      if (!inserted) sets.unite(it->second, i);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < clusters.size(); ++i) components[sets.find(i)].push_back(i);

  std::vector<CandidateGroup> out;
  out.reserve(components.size());
  for (const auto& [_, indices] : components) {
    CandidateGroup g;
    std::map<std::string, std::uint64_t> lemma_weight;
    for (std::size_t i : indices) {
      for (const auto& member : clusters[i].members) {
        const auto& lemma = lemmas[i].at(member.key);
        lemma_weight[lemma] += member.term_freq;
        g.lemmas[member.key] = lemma;
        g.members.push_back(member);
      }
    }
    std::uint64_t best = 0;
    for (const auto& [lemma, w] : lemma_weight) {
      if (g.base_form.empty() || w > best) {
        g.base_form = lemma;
        best = w;
      }
    }
    std::sort(g.members.begin(), g.members.end(),
              [](const CandidateStats& x, const CandidateStats& y) { return x.key < y.key; });
    g.id = g.base_form;
    g.aggregate = g.recompute_aggregate(context_limit);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const CandidateGroup& a, const CandidateGroup& b) { return a.base_form < b.base_form; });
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace codec {

json to_json(const Document& d) { return json::parse(document_to_json(d)); }
Document document_from(const json& j) { return document_from_json(j.dump()); }

json to_json(const Context& c) {
  return {{"sentence", c.sentence},
          {"doc_id", c.doc_id},
          {"timestamp", format_timestamp(c.timestamp)},
          {"sentence_index", c.sentence_index}};
}

Context context_from(const json& j) {
  return {j.at("sentence").get<std::string>(), j.at("doc_id").get<std::string>(),
          parse_timestamp(j.at("timestamp").get<std::string>()), j.at("sentence_index").get<std::size_t>()};
}

json to_json(const CandidateStats& s) {
  json daily = json::object();
  for (const auto& [d, c] : s.daily_counts) daily[format_date(d)] = c;
  json contexts = json::array();
  for (const auto& c : s.contexts) contexts.push_back(to_json(c));
  json j = {{"key", s.key},
            {"surface_variants", s.surface_variants},
            {"doc_ids", s.doc_ids},
            {"doc_freq", s.doc_freq()},
            {"term_freq", s.term_freq},
            {"lowercase_count", s.lowercase_count},
            {"non_ne_count", s.non_ne_count},
            {"polish_context_count", s.polish_context_count},
            {"unique_domains", s.unique_domains()},
            {"domain_counts", s.domain_counts},
            {"daily_counts", daily},
            {"contexts", contexts},
            {"first_seen", s.first_seen ? json(format_timestamp(*s.first_seen)) : json(nullptr)},
            {"last_seen", s.last_seen ? json(format_timestamp(*s.last_seen)) : json(nullptr)}};
  return j;
}

CandidateStats stats_from(const json& j) {
  CandidateStats s;
  s.key = j.at("key").get<std::string>();
  s.surface_variants = j.at("surface_variants").get<std::map<std::string, std::uint64_t>>();
  s.doc_ids = j.at("doc_ids").get<std::set<std::string>>();
  s.term_freq = j.at("term_freq").get<std::uint64_t>();
  s.lowercase_count = j.at("lowercase_count").get<std::uint64_t>();
  s.non_ne_count = j.at("non_ne_count").get<std::uint64_t>();
  s.polish_context_count = j.at("polish_context_count").get<std::uint64_t>();
  s.domain_counts = j.at("domain_counts").get<std::map<std::string, std::uint64_t>>();
  for (const auto& [d, c] : j.at("daily_counts").items()) s.daily_counts[parse_timestamp(d)] = c.get<std::uint64_t>();
  for (const auto& c : j.at("contexts")) s.contexts.push_back(context_from(c));
  if (!j.at("first_seen").is_null()) s.first_seen = parse_timestamp(j.at("first_seen").get<std::string>());
  if (!j.at("last_seen").is_null()) s.last_seen = parse_timestamp(j.at("last_seen").get<std::string>());
  return s;
}

json to_json(const Definition& d) {
  return {{"neologism", d.neologism},         {"text", d.text},
          {"shots", d.shots},                 {"examples_used", d.examples_used},
          {"model_name", d.model_name},       {"created_at", format_timestamp(d.created_at)}};
}

Definition definition_from(const json& j) {
  Definition d;
  d.neologism = j.at("neologism").get<std::string>();
  d.text = j.at("text").get<std::string>();
  d.shots = j.at("shots").get<int>();
  d.examples_used = j.at("examples_used").get<std::vector<std::string>>();
  d.model_name = j.at("model_name").get<std::string>();
  d.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  return d;
}

json to_json(const CandidateGroup& g) {
  json members = json::array();
  for (const auto& m : g.members) members.push_back(to_json(m));
  json j = {{"id", g.id},
            {"base_form", g.base_form},
            {"members", members},
            {"lemmas", g.lemmas},
            {"aggregate", to_json(g.aggregate)},
            {"review_status", to_string(g.review_status)},
            {"definition", g.definition ? to_json(*g.definition) : json(nullptr)},
            {"sentiment", g.sentiment ? json{{"value", to_string(g.sentiment->value)},
                                             {"setup", to_string(g.sentiment->setup)}}
                                      : json(nullptr)},
            {"domain", g.domain ? json{{"value", to_string(g.domain->value)}, {"setup", to_string(g.domain->setup)}}
                                : json(nullptr)}};
  return j;
}

CandidateGroup group_from(const json& j) {
  CandidateGroup g;
  g.id = j.at("id").get<std::string>();
  g.base_form = j.at("base_form").get<std::string>();
  for (const auto& m : j.at("members")) g.members.push_back(stats_from(m));
  g.lemmas = j.at("lemmas").get<std::map<std::string, std::string>>();
  g.aggregate = stats_from(j.at("aggregate"));
  g.review_status = parse_review_status(j.at("review_status").get<std::string>());
  if (!j.at("definition").is_null()) g.definition = definition_from(j.at("definition"));
  if (!j.at("sentiment").is_null()) {
    g.sentiment = SentimentLabel{parse_sentiment(j["sentiment"].at("value").get<std::string>()),
                                 parse_category_setup(j["sentiment"].at("setup").get<std::string>())};
  }
  if (!j.at("domain").is_null()) {
    g.domain = DomainLabel{parse_domain(j["domain"].at("value").get<std::string>()),
                           parse_category_setup(j["domain"].at("setup").get<std::string>())};
  }
  return g;
}

}  // namespace codec

std::string stats_to_json(const CandidateStats& stats) { return codec::to_json(stats).dump(); }

CandidateStats stats_from_json(std::string_view s) {
  return codec::guarded("malformed candidate record", [&] { return codec::stats_from(codec::json::parse(s)); });
}

std::string group_to_json(const CandidateGroup& group) { return codec::to_json(group).dump(); }

CandidateGroup group_from_json(std::string_view s) {
  return codec::guarded("malformed group record", [&] { return codec::group_from(codec::json::parse(s)); });
}

}  // namespace neolex
