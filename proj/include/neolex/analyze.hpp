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

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "neolex/ingest.hpp"
#include "neolex/text.hpp"

namespace neolex {

class AnalyzerError : public Error {
 public:
  using Error::Error;
};

enum class CapClass { lower, initial_upper, all_upper, mixed };

std::string to_string(CapClass c);
CapClass parse_cap_class(std::string_view s);

/// Capitalization class of a surface form. Only cased letters are inspected;
/// a surface with no upper-case letter is `lower`.
CapClass cap_class(std::string_view surface);

struct Token {
  std::string surface;
  std::size_t start = 0;  // code point offsets into the text, [start, end)
  std::size_t end = 0;
  std::size_t sentence_index = 0;
  std::size_t position_in_sentence = 0;
  CapClass cap = CapClass::lower;
  std::optional<std::string> lemma;
  std::optional<bool> is_proper_noun;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t start = 0;  // code point offsets
  std::size_t end = 0;
  std::string text;
  LanguageGuess language;  // per-sentence guess; "und" for short sentences

  bool operator==(const Sentence&) const = default;
};

struct TokenizerOptions {
  /// Lower-case abbreviations (without the period) that do not end a sentence.
  std::set<std::string, std::less<>> abbreviations = default_abbreviations();

  static std::set<std::string, std::less<>> default_abbreviations();
};

struct Segmentation {
  std::vector<Sentence> sentences;
  std::vector<Token> tokens;
};

/// Splits NFC text into sentences and word tokens. Hyphens and apostrophes
/// between two word characters stay inside the token. A sentence ends at
/// '.', '!' or '?' followed by whitespace and an upper-case letter (unless
/// the word before a '.' is a listed abbreviation or a single letter) and at
/// every line break. Sentence languages are left undetermined.
Segmentation segment(std::string_view text, const TokenizerOptions& options = {});

/// Tokens only.
std::vector<Token> tokenize(std::string_view text, const TokenizerOptions& options = {});

/// True iff the token is initial-upper and not sentence-initial.
bool heuristic_proper_noun(const Token& token);

// ---------------------------------------------------------------------------
// Analyzer adapters
// ---------------------------------------------------------------------------

struct Analysis {
  std::optional<std::string> lemma;
  std::optional<bool> proper_noun;

  bool operator==(const Analysis&) const = default;
};

struct AdapterCapabilities {
  bool lemma = false;
  bool proper_noun = false;
};

class AnalyzerAdapter {
 public:
  virtual ~AnalyzerAdapter() = default;
  virtual std::string name() const = 0;
  virtual AdapterCapabilities capabilities() const = 0;
  /// Whether analyze() may be called from several threads at once.
  virtual bool concurrent_safe() const { return false; }
  /// Analyzes one surface form, optionally inside its sentence. Throws
  /// AnalyzerError on failure.
  virtual Analysis analyze(std::string_view surface, std::optional<std::string_view> sentence) = 0;

  std::optional<std::string> lemmatize(std::string_view surface) { return analyze(surface, std::nullopt).lemma; }
  std::optional<std::string> lemmatize_in_context(std::string_view surface, std::string_view sentence) {
    return analyze(surface, sentence).lemma;
  }
};

/// No capabilities; every token receives fallback annotations.
class IdentityAdapter : public AnalyzerAdapter {
 public:
  std::string name() const override { return "identity"; }
  AdapterCapabilities capabilities() const override { return {}; }
  bool concurrent_safe() const override { return true; }
  Analysis analyze(std::string_view, std::optional<std::string_view>) override { return {}; }
};

/// Table-driven adapter. Lookup is by exact surface first, then by the
/// normalized (lower-cased) form. Surfaces listed in `failing` throw.
class MapAdapter : public AnalyzerAdapter {
 public:
  explicit MapAdapter(std::unordered_map<std::string, Analysis> table, std::string name = "map",
                      AdapterCapabilities caps = {true, true});

  void fail_on(std::string surface) { failing_.insert(std::move(surface)); }

  std::string name() const override { return name_; }
  AdapterCapabilities capabilities() const override { return caps_; }
  bool concurrent_safe() const override { return true; }
  Analysis analyze(std::string_view surface, std::optional<std::string_view> sentence) override;

 private:
  std::unordered_map<std::string, Analysis> table_;
  std::set<std::string, std::less<>> failing_;
  std::string name_;
  AdapterCapabilities caps_;
};

/// Talks to a long-running child process over line-delimited JSON:
/// request {"surface": ..., "sentence": ...}, response {"lemma": ..., "proper_noun": ...}.
/// Calls are serialized. The process is restarted after a failure.
class SubprocessAdapter : public AnalyzerAdapter {
 public:
  SubprocessAdapter(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(10),
                    AdapterCapabilities caps = {true, true});
  ~SubprocessAdapter() override;
  SubprocessAdapter(const SubprocessAdapter&) = delete;
  SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

  std::string name() const override { return "subprocess:" + command_; }
  AdapterCapabilities capabilities() const override { return caps_; }
  Analysis analyze(std::string_view surface, std::optional<std::string_view> sentence) override;

 private:
  void start();
  void stop();

  std::string command_;
  std::chrono::milliseconds timeout_;
  AdapterCapabilities caps_;
  std::mutex mu_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// POSTs the same JSON request to an HTTP endpoint.
class HttpAdapter : public AnalyzerAdapter {
 public:
  HttpAdapter(std::string url, std::chrono::seconds timeout = std::chrono::seconds(10),
              AdapterCapabilities caps = {true, true});

  std::string name() const override { return "http:" + url_; }
  AdapterCapabilities capabilities() const override { return caps_; }
  bool concurrent_safe() const override { return true; }
  Analysis analyze(std::string_view surface, std::optional<std::string_view> sentence) override;

 private:
  std::string url_;
  std::chrono::seconds timeout_;
  AdapterCapabilities caps_;
};

/// Encodes/decodes the adapter wire format.
std::string analysis_request_json(std::string_view surface, std::optional<std::string_view> sentence);
Analysis parse_analysis_json(std::string_view json);

// ---------------------------------------------------------------------------
// Annotation
// ---------------------------------------------------------------------------

struct AnnotationWarning {
  std::size_t token_index = 0;
  std::string surface;
  std::string message;
};

struct AnnotatedDocument {
  Document document;
  std::vector<Sentence> sentences;
  std::vector<Token> tokens;
  std::string analyzer_name;
  std::vector<AnnotationWarning> warnings;
};

struct AnnotateOptions {
  TokenizerOptions tokenizer;
  /// Pass each token's sentence to the adapter.
  bool in_context = true;
  /// Document language that is sent through the adapter; others get fallback values.
  std::string adapter_language = "pl";
};

/// Segments the document, labels sentence languages and attaches lemma and
/// proper-noun values to every token. Fallbacks: lemma = lower-cased
/// surface, proper noun = heuristic_proper_noun. Adapter failures affect
/// only the failing token and are recorded as warnings.
AnnotatedDocument annotate(const Document& document, AnalyzerAdapter& adapter, const AnnotateOptions& options = {});

/// Annotates documents in parallel, preserving input order. Adapters that
/// are not concurrent-safe are called under a lock.
std::vector<AnnotatedDocument> annotate_all(const std::vector<Document>& documents, AnalyzerAdapter& adapter,
                                            const AnnotateOptions& options = {}, std::size_t parallelism = 4);

/// Language label of a sentence: its own guess when determined, otherwise
/// the document's.
const std::string& context_language(const AnnotatedDocument& doc, std::size_t sentence_index);

}  // namespace neolex
