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

#include "neolex/analyze.hpp"

#include <atomic>
#include <thread>

#include <unicode/uchar.h>
#include <json.hpp>

#include "http_util.hpp"

namespace neolex {

using json = nlohmann::json;

std::string to_string(CapClass c) {
  switch (c) {
    case CapClass::lower: return "lower";
    case CapClass::initial_upper: return "initial-upper";
    case CapClass::all_upper: return "all-upper";
    case CapClass::mixed: return "mixed";
  }
  return "lower";
}

CapClass parse_cap_class(std::string_view s) {
  if (s == "lower") return CapClass::lower;
  if (s == "initial-upper") return CapClass::initial_upper;
  if (s == "all-upper") return CapClass::all_upper;
  if (s == "mixed") return CapClass::mixed;
  throw ParseError("unknown capitalization class: " + std::string(s));
}

CapClass cap_class(std::string_view surface) {
  std::size_t cased = 0, upper = 0;
  bool first_cased_upper = false, rest_has_upper = false;
  for (char32_t cp : utf8_to_u32(surface)) {
    const bool up = is_upper(cp);
    if (!up && !is_lower(cp)) continue;
    if (cased == 0) {
      first_cased_upper = up;
    } else if (up) {
      rest_has_upper = true;
    }
    ++cased;
    if (up) ++upper;
  }
  if (upper == 0) return CapClass::lower;
  if (upper == cased) return cased == 1 ? CapClass::initial_upper : CapClass::all_upper;
  if (first_cased_upper && !rest_has_upper) return CapClass::initial_upper;
  return CapClass::mixed;
}

std::set<std::string, std::less<>> TokenizerOptions::default_abbreviations() {
  return {"np", "tzn", "tj", "itd", "itp", "ok", "godz", "ul", "al", "pl", "dr", "prof", "mgr", "inż",
          "hab", "tys", "mln", "mld", "zł", "gr", "r", "w", "ws", "wg", "nr", "str", "s", "ds", "im",
          "św", "płk", "gen", "ks", "por", "red", "tel", "ang", "łac", "niem", "franc", "ur", "zm",
          "jw", "m.in", "e.g", "i.e", "mr", "mrs", "ms", "st", "vs", "etc", "no", "cf"};
}

namespace {

bool is_mark(char32_t cp) {
  const auto t = u_charType(static_cast<UChar32>(cp));
  return t == U_NON_SPACING_MARK || t == U_COMBINING_SPACING_MARK || t == U_ENCLOSING_MARK;
}

bool is_word_char(char32_t cp) { return is_letter(cp) || is_decimal_digit(cp) || is_mark(cp); }

bool is_terminal(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'…'; }

bool is_closing_punct(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U')' || cp == U']' || cp == U'»' || cp == U'”' || cp == U'’' ||
         is_terminal(cp);
}

bool is_opening_punct(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U'(' || cp == U'[' || cp == U'«' || cp == U'„' || cp == U'“' ||
         cp == U'‘' || is_hyphen(cp) || cp == U'–' || cp == U'—';
}

bool is_line_break(char32_t cp) { return cp == U'\n' || cp == U'\r' || cp == 0x2028 || cp == 0x2029; }

// Word ending just before position i (exclusive), lower-cased; includes
// internal periods so "m.in" is recognized.
std::string word_before(const std::u32string& t, std::size_t i) {
  std::size_t b = i;
  while (b > 0 && (is_word_char(t[b - 1]) || (t[b - 1] == U'.' && b >= 2 && is_word_char(t[b - 2])))) --b;
  return to_lower(u32_to_utf8(t.substr(b, i - b)));
}

}  // namespace

Segmentation segment(std::string_view text, const TokenizerOptions& options) {
  const std::u32string t = utf8_to_u32(text);
  const std::size_t n = t.size();

  // Sentence break positions: a sentence ends before index e.
  std::vector<std::size_t> breaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_line_break(t[i])) {
      breaks.push_back(i);
      continue;
    }
    if (!is_terminal(t[i])) continue;
    std::size_t j = i + 1;
    while (j < n && is_closing_punct(t[j])) ++j;
    std::size_t k = j;
    while (k < n && is_space(t[k]) && !is_line_break(t[k])) ++k;
    if (k == j || k >= n) continue;  // needs whitespace, then more text
    std::size_t m = k;
    while (m < n && is_opening_punct(t[m])) ++m;
    if (m >= n || !is_upper(t[m])) continue;
    if (t[i] == U'.') {
      const auto prev = word_before(t, i);
      if (options.abbreviations.count(prev)) continue;
      if (utf8_length(prev) == 1 && i > 0 && is_upper(t[i - 1])) continue;  // initials
    }
    breaks.push_back(j);
    i = j - 1;
  }
  breaks.push_back(n);

  Segmentation out;
  std::size_t sent_start = 0;
  for (std::size_t e : breaks) {
    std::size_t b = sent_start;
    std::size_t end = std::min(e, n);
    while (b < end && is_space(t[b])) ++b;
    std::size_t last = end;
    while (last > b && is_space(t[last - 1])) --last;
    sent_start = e;
    if (b >= last) continue;

    const std::size_t sentence_index = out.sentences.size();
    Sentence s;
    s.start = b;
    s.end = last;
    s.text = u32_to_utf8(t.substr(b, last - b));

    std::size_t position = 0;
    std::size_t i = b;
    while (i < last) {
      if (!is_word_char(t[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < last) {
        if (is_word_char(t[j])) {
          ++j;
        } else if ((is_hyphen(t[j]) || is_apostrophe(t[j])) && j + 1 < last && is_word_char(t[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      Token tok;
      tok.surface = u32_to_utf8(t.substr(i, j - i));
      tok.start = i;
      tok.end = j;
      tok.sentence_index = sentence_index;
      tok.position_in_sentence = position++;
      tok.cap = cap_class(tok.surface);
      out.tokens.push_back(std::move(tok));
      i = j;
    }
    out.sentences.push_back(std::move(s));
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text, const TokenizerOptions& options) {
  return segment(text, options).tokens;
}

bool heuristic_proper_noun(const Token& token) {
  return token.cap == CapClass::initial_upper && token.position_in_sentence > 0;
}

// ---------------------------------------------------------------------------
// Wire format

std::string analysis_request_json(std::string_view surface, std::optional<std::string_view> sentence) {
  json j = {{"surface", std::string(surface)}};
  if (sentence) j["sentence"] = std::string(*sentence);
  return j.dump();
}

Analysis parse_analysis_json(std::string_view s) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::exception& e) {
    throw AnalyzerError(std::string("malformed analyzer response: ") + e.what());
  }
  if (!j.is_object()) throw AnalyzerError("analyzer response is not an object");
  if (j.contains("error")) throw AnalyzerError("analyzer error: " + j["error"].dump());
  Analysis a;
  if (j.contains("lemma") && !j["lemma"].is_null()) {
    if (!j["lemma"].is_string()) throw AnalyzerError("analyzer lemma is not a string");
    a.lemma = j["lemma"].get<std::string>();
  }
  if (j.contains("proper_noun") && !j["proper_noun"].is_null()) {
    if (!j["proper_noun"].is_boolean()) throw AnalyzerError("analyzer proper_noun is not a boolean");
    a.proper_noun = j["proper_noun"].get<bool>();
  }
  return a;
}

// ---------------------------------------------------------------------------
// Adapters

MapAdapter::MapAdapter(std::unordered_map<std::string, Analysis> table, std::string name, AdapterCapabilities caps)
    : table_(std::move(table)), name_(std::move(name)), caps_(caps) {}

Analysis MapAdapter::analyze(std::string_view surface, std::optional<std::string_view>) {
  if (failing_.count(surface)) throw AnalyzerError("analyzer refused: " + std::string(surface));
  auto it = table_.find(std::string(surface));
  if (it == table_.end()) it = table_.find(normalize_form(surface));
  if (it == table_.end()) return {};
  return it->second;
}

HttpAdapter::HttpAdapter(std::string url, std::chrono::seconds timeout, AdapterCapabilities caps)
    : url_(std::move(url)), timeout_(timeout), caps_(caps) {}

Analysis HttpAdapter::analyze(std::string_view surface, std::optional<std::string_view> sentence) {
  http::Result r;
  try {
    r = http::post(url_, analysis_request_json(surface, sentence), "application/json", timeout_);
  } catch (const Error& e) {
    throw AnalyzerError(e.what());
  }
  if (r.status < 200 || r.status >= 300) throw AnalyzerError("analyzer HTTP status " + std::to_string(r.status));
  return parse_analysis_json(r.body);
}

// ---------------------------------------------------------------------------
// Annotation

AnnotatedDocument annotate(const Document& document, AnalyzerAdapter& adapter, const AnnotateOptions& options) {
  AnnotatedDocument out;
  out.document = document;
  auto seg = segment(document.text, options.tokenizer);
  out.sentences = std::move(seg.sentences);
  out.tokens = std::move(seg.tokens);
  for (auto& s : out.sentences) s.language = detect_language(s.text);

  const bool use_adapter = document.language.code == options.adapter_language;
  out.analyzer_name = use_adapter ? adapter.name() : "fallback";
  const auto caps = adapter.capabilities();

  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    auto& tok = out.tokens[i];
    Analysis a;
    if (use_adapter && (caps.lemma || caps.proper_noun)) {
      try {
        std::optional<std::string_view> sentence;
        if (options.in_context) sentence = out.sentences[tok.sentence_index].text;
        a = adapter.analyze(tok.surface, sentence);
      } catch (const std::exception& e) {
        out.warnings.push_back({i, tok.surface, e.what()});
        a = {};
      }
    }
    tok.lemma = (caps.lemma && a.lemma && !a.lemma->empty()) ? to_nfc(*a.lemma) : normalize_form(tok.surface);
    tok.is_proper_noun = (caps.proper_noun && a.proper_noun) ? *a.proper_noun : heuristic_proper_noun(tok);
  }
  return out;
}

namespace {

// Serializes calls to an adapter that does not tolerate concurrency.
class LockedAdapter : public AnalyzerAdapter {
 public:
  explicit LockedAdapter(AnalyzerAdapter& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  AdapterCapabilities capabilities() const override { return inner_.capabilities(); }
  bool concurrent_safe() const override { return true; }
  Analysis analyze(std::string_view surface, std::optional<std::string_view> sentence) override {
    std::lock_guard lock(mu_);
    return inner_.analyze(surface, sentence);
  }

 private:
  AnalyzerAdapter& inner_;
  std::mutex mu_;
};

}  // namespace

std::vector<AnnotatedDocument> annotate_all(const std::vector<Document>& documents, AnalyzerAdapter& adapter,
                                            const AnnotateOptions& options, std::size_t parallelism) {
  std::vector<AnnotatedDocument> out(documents.size());
  if (documents.empty()) return out;
  LockedAdapter locked(adapter);
  AnalyzerAdapter& target = adapter.concurrent_safe() ? adapter : static_cast<AnalyzerAdapter&>(locked);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < documents.size(); i = next++) out[i] = annotate(documents[i], target, options);
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, documents.size());
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

const std::string& context_language(const AnnotatedDocument& doc, std::size_t sentence_index) {
  if (sentence_index < doc.sentences.size() && doc.sentences[sentence_index].language.code != "und")
    return doc.sentences[sentence_index].language.code;
  return doc.document.language.code;
}

}  // namespace neolex
