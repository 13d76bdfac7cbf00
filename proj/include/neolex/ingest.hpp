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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neolex/text.hpp"

namespace neolex {

class IngestError : public Error {
 public:
  using Error::Error;
};

class FeedParseError : public IngestError {
 public:
  using IngestError::IngestError;
};

// ---------------------------------------------------------------------------
// Language detection
// ---------------------------------------------------------------------------

struct LanguageGuess {
  std::string code = "und";  // ISO-639-1, or "und" when undetermined
  double confidence = 0.0;   // posterior probability of `code`, in [0, 1]

  bool operator==(const LanguageGuess&) const = default;
};

/// Minimum number of characters (code points, whitespace trimmed) required
/// before a language is assigned.
inline constexpr std::size_t kMinLanguageDetectionChars = 20;

/// Character-trigram naive Bayes classifier over built-in profiles
/// (pl, en, de). Deterministic; texts shorter than the minimum yield "und".
LanguageGuess detect_language(std::string_view text);

/// Languages known to detect_language().
std::vector<std::string> supported_languages();

// ---------------------------------------------------------------------------
// Main-content extraction
// ---------------------------------------------------------------------------

/// Returns the text of the densest contiguous content region of an HTML page.
/// Script, style, navigation and similar boilerplate elements never
/// contribute text. Paragraph boundaries become '\n'. Output is NFC.
/// Throws EncodingError if the input is not valid UTF-8.
std::string extract_main_content(std::string_view html);

// ---------------------------------------------------------------------------
// URLs
// ---------------------------------------------------------------------------

struct Url {
  std::string scheme;
  std::string host;
  int port = 0;  // 0 = scheme default
  std::string path = "/";
  std::string query;
  std::string fragment;
};

/// Parses an absolute http(s) URL; returns nullopt when it is not one.
std::optional<Url> parse_url(std::string_view url);
/// Lower-cases scheme and host, drops the fragment and default port.
std::string canonicalize_url(std::string_view url);
/// Registrable domain approximation: the last two host labels, or three
/// when the second-level label is a common generic one (com.pl, co.uk, ...).
std::string registrable_domain(std::string_view host);

// ---------------------------------------------------------------------------
// Documents and feeds
// ---------------------------------------------------------------------------

struct FeedSource {
  std::string url;
  std::chrono::seconds poll_interval{3600};
  bool enabled = true;

  /// Throws IngestError when the URL is not absolute http(s) or the interval is below 60 s.
  void validate() const;
};

/// One feed URL per line; blank lines and '#' comments are skipped.
std::vector<FeedSource> load_feed_list(const std::filesystem::path& path);

struct Document {
  std::string id;
  std::string url;
  std::string host_domain;
  Timestamp fetched_at{};
  LanguageGuess language;
  std::string text;

  bool operator==(const Document&) const = default;
};

/// Stable content hash over (canonical URL, text).
std::string document_id(std::string_view url, std::string_view text);

/// Builds a Document from already extracted text (language detected here).
Document make_document(std::string_view url, std::string text, Timestamp fetched_at);

std::string document_to_json(const Document& doc);
Document document_from_json(std::string_view json);

struct FeedItem {
  std::string title;
  std::string link;
  std::string description;  // may contain HTML
  std::string published;
};

/// Parses RSS 2.0, RSS 1.0 (RDF) and Atom feeds.
std::vector<FeedItem> parse_feed(std::string_view xml);

// ---------------------------------------------------------------------------
// Storage and fetching
// ---------------------------------------------------------------------------

class DocumentStore {
 public:
  virtual ~DocumentStore() = default;
  /// Inserts unless the id is already stored. Returns true if inserted.
  virtual bool insert(const Document& doc) = 0;
  virtual bool contains(std::string_view id) const = 0;
  virtual std::optional<Document> get(std::string_view id) const = 0;
  /// All documents in insertion order.
  virtual std::vector<Document> all() const = 0;
  virtual std::size_t size() const = 0;
};

class MemoryDocumentStore : public DocumentStore {
 public:
  bool insert(const Document& doc) override;
  bool contains(std::string_view id) const override;
  std::optional<Document> get(std::string_view id) const override;
  std::vector<Document> all() const override;
  std::size_t size() const override;

 private:
  mutable std::mutex mu_;
  std::vector<Document> docs_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Append-only JSON-lines file; one Document object per line.
class JsonlDocumentStore : public DocumentStore {
 public:
  explicit JsonlDocumentStore(std::filesystem::path path);

  bool insert(const Document& doc) override;
  bool contains(std::string_view id) const override;
  std::optional<Document> get(std::string_view id) const override;
  std::vector<Document> all() const override;
  std::size_t size() const override;

 private:
  std::filesystem::path path_;
  MemoryDocumentStore cache_;
};

struct FetchResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  /// Throws IngestError on transport failure.
  virtual FetchResponse get(const std::string& url) = 0;
};

/// HTTP(S) fetcher backed by cpp-httplib; follows redirects.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(std::chrono::seconds timeout = std::chrono::seconds(20),
                       std::string user_agent = "neolex/0.1");
  FetchResponse get(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

struct SourceError {
  std::string source;  // feed URL
  std::string item;    // item URL, empty for feed-level failures
  std::string message;
};

struct DroppedDocument {
  std::string url;
  std::string reason;
};

struct PollReport {
  std::vector<Document> documents;  // newly stored
  std::vector<SourceError> errors;
  std::vector<DroppedDocument> dropped;
  std::size_t skipped_duplicates = 0;
};

struct PollOptions {
  std::size_t max_parallel_sources = 4;
  std::function<Timestamp()> clock;  // defaults to system clock
};

/// Fetches every enabled feed, then each item page, extracts the main
/// content and stores new documents. Failures are recorded per source and
/// never abort the batch. Throws PreconditionError when no source is enabled.
PollReport poll_feeds(const std::vector<FeedSource>& sources, Fetcher& fetcher, DocumentStore& store,
                      const PollOptions& options = {});

}  // namespace neolex
