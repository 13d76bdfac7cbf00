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

#include "neolex/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "http_util.hpp"
#include "markup.hpp"

namespace neolex {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// URLs

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::optional<Url> parse_url(std::string_view url) {
  url = trim(url);
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  Url u;
  u.scheme = lower_ascii(url.substr(0, sep));
  if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
  std::string_view rest = url.substr(sep + 3);

  const auto frag = rest.find('#');
  if (frag != std::string_view::npos) {
    u.fragment = std::string(rest.substr(frag + 1));
    rest = rest.substr(0, frag);
  }
  const auto query = rest.find('?');
  if (query != std::string_view::npos) {
    u.query = std::string(rest.substr(query + 1));
    rest = rest.substr(0, query);
  }
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  u.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));

  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    const auto port_str = authority.substr(colon + 1);
    if (port_str.empty() || port_str.size() > 5 ||
        !std::all_of(port_str.begin(), port_str.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    u.port = std::stoi(std::string(port_str));
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  for (char c : authority) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' ||
          static_cast<unsigned char>(c) >= 0x80))
      return std::nullopt;
  }
  u.host = lower_ascii(authority);
  if ((u.scheme == "http" && u.port == 80) || (u.scheme == "https" && u.port == 443)) u.port = 0;
  return u;
}

std::string canonicalize_url(std::string_view url) {
  const auto u = parse_url(url);
  if (!u) return std::string(trim(url));
  std::string out = u->scheme + "://" + u->host;
  if (u->port != 0) out += ":" + std::to_string(u->port);
  out += u->path;
  if (!u->query.empty()) out += "?" + u->query;
  return out;
}

std::string registrable_domain(std::string_view host) {
  std::string h = lower_ascii(trim(host));
  while (!h.empty() && h.back() == '.') h.pop_back();
  const auto labels = split(h, '.');
  if (labels.size() <= 2) return h;
  static const std::set<std::string, std::less<>> generic_second_level = {
      "com", "net", "org", "edu", "gov", "co", "ac", "info", "biz", "waw", "krakow", "gda", "wroc", "poznan"};
  const auto& second = labels[labels.size() - 2];
  const std::size_t keep = generic_second_level.count(second) ? 3 : 2;
  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out += labels[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feeds and documents

void FeedSource::validate() const {
  if (!parse_url(url)) throw IngestError("feed URL is not an absolute http(s) URL: " + url);
  if (poll_interval < std::chrono::seconds(60)) throw IngestError("poll interval below 60 s for " + url);
}

std::vector<FeedSource> load_feed_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot read feed list: " + path.string());
  std::vector<FeedSource> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    FeedSource src;
    src.url = std::string(t);
    try {
      src.validate();
    } catch (const IngestError& e) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(src));
  }
  return out;
}

std::string document_id(std::string_view url, std::string_view text) {
  std::string payload = canonicalize_url(url);
  payload.push_back('\n');
  payload.append(text);
  return sha256_hex(payload);
}

Document make_document(std::string_view url, std::string text, Timestamp fetched_at) {
  Document doc;
  doc.url = canonicalize_url(url);
  const auto parsed = parse_url(doc.url);
  if (!parsed) throw IngestError("document URL is not absolute: " + std::string(url));
  doc.host_domain = registrable_domain(parsed->host);
  doc.text = to_nfc(text);
  doc.id = document_id(doc.url, doc.text);
  doc.fetched_at = fetched_at;
  doc.language = detect_language(doc.text);
  return doc;
}

std::string document_to_json(const Document& doc) {
  json j = {{"id", doc.id},
            {"url", doc.url},
            {"host_domain", doc.host_domain},
            {"fetched_at", format_timestamp(doc.fetched_at)},
            {"language", {{"code", doc.language.code}, {"confidence", doc.language.confidence}}},
            {"text", doc.text}};
  return j.dump();
}

Document document_from_json(std::string_view s) {
  try {
    const json j = json::parse(s);
    Document doc;
    doc.id = j.at("id").get<std::string>();
    doc.url = j.at("url").get<std::string>();
    doc.host_domain = j.at("host_domain").get<std::string>();
    doc.fetched_at = parse_timestamp(j.at("fetched_at").get<std::string>());
    doc.language.code = j.at("language").at("code").get<std::string>();
    doc.language.confidence = j.at("language").at("confidence").get<double>();
    doc.text = j.at("text").get<std::string>();
    return doc;
  } catch (const json::exception& e) {
    throw IngestError(std::string("malformed document record: ") + e.what());
  }
}

std::vector<FeedItem> parse_feed(std::string_view xml) {
  if (!is_valid_utf8(xml)) throw FeedParseError("feed is not valid UTF-8");
  const auto tokens = markup::tokenize(xml, /*html_mode=*/false);
  using K = markup::Token::Kind;

  bool has_root = false;
  for (const auto& t : tokens) {
    if (t.kind == K::open && (t.name == "rss" || t.name == "rdf:rdf" || t.name == "feed")) {
      has_root = true;
      break;
    }
  }
  if (!has_root) throw FeedParseError("no rss, rdf or feed root element");

  std::vector<FeedItem> items;
  std::optional<FeedItem> current;
  std::string field;        // element whose text is being collected
  std::string buffer;
  int nested = 0;
  for (const auto& t : tokens) {
    if (!current) {
      if (t.kind == K::open && !t.self_closing && (t.name == "item" || t.name == "entry")) current.emplace();
      continue;
    }
    if (!field.empty()) {
      if (t.kind == K::close && t.name == field && nested == 0) {
        const std::string value(trim(buffer));
        if (field == "title") {
          current->title = value;
        } else if (field == "link") {
          if (current->link.empty()) current->link = value;
        } else if (field == "pubdate" || field == "published" || field == "updated" || field == "dc:date") {
          if (current->published.empty()) current->published = value;
        } else if (current->description.empty() || field == "content:encoded" || field == "content") {
          current->description = value;
        }
        field.clear();
        buffer.clear();
      } else if (t.kind == K::text) {
        buffer += t.cdata ? t.text : markup::decode_entities(t.text);
      } else if (t.kind == K::open && t.name == field && !t.self_closing) {
        ++nested;
      } else if (t.kind == K::close && t.name == field) {
        --nested;
      }
      continue;
    }
    if (t.kind == K::close && (t.name == "item" || t.name == "entry")) {
      items.push_back(std::move(*current));
      current.reset();
      continue;
    }
    if (t.kind != K::open) continue;
    if (t.name == "link") {
      const auto href = t.attr("href");
      const auto rel = t.attr("rel");
      if (!href.empty() && (rel.empty() || rel == "alternate")) {
        current->link = href;
      }
      if (!t.self_closing) field = "link";
      continue;
    }
    static const std::set<std::string, std::less<>> fields = {
        "title", "description", "summary", "content", "content:encoded", "pubdate", "published", "updated", "dc:date"};
    if (fields.count(t.name) && !t.self_closing) {
      field = t.name;
      nested = 0;
      buffer.clear();
    }
  }
  return items;
}

// ---------------------------------------------------------------------------
// Stores

bool MemoryDocumentStore::insert(const Document& doc) {
  std::lock_guard lock(mu_);
  if (index_.count(doc.id)) return false;
  index_.emplace(doc.id, docs_.size());
  docs_.push_back(doc);
  return true;
}

bool MemoryDocumentStore::contains(std::string_view id) const {
  std::lock_guard lock(mu_);
  return index_.find(id) != index_.end();
}

std::optional<Document> MemoryDocumentStore::get(std::string_view id) const {
  std::lock_guard lock(mu_);
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return docs_[it->second];
}

std::vector<Document> MemoryDocumentStore::all() const {
  std::lock_guard lock(mu_);
  return docs_;
}

std::size_t MemoryDocumentStore::size() const {
  std::lock_guard lock(mu_);
  return docs_.size();
}

JsonlDocumentStore::JsonlDocumentStore(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      cache_.insert(document_from_json(line));
    } catch (const IngestError& e) {
      throw IngestError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

bool JsonlDocumentStore::insert(const Document& doc) {
  if (!cache_.insert(doc)) return false;
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw IngestError("cannot append to document store: " + path_.string());
  out << document_to_json(doc) << '\n';
  return true;
}

bool JsonlDocumentStore::contains(std::string_view id) const { return cache_.contains(id); }
std::optional<Document> JsonlDocumentStore::get(std::string_view id) const { return cache_.get(id); }
std::vector<Document> JsonlDocumentStore::all() const { return cache_.all(); }
std::size_t JsonlDocumentStore::size() const { return cache_.size(); }

// ---------------------------------------------------------------------------
// Fetching and polling

HttpFetcher::HttpFetcher(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

FetchResponse HttpFetcher::get(const std::string& url) {
  try {
    auto r = http::get(url, timeout_, user_agent_);
    return {r.status, std::move(r.body), std::move(r.content_type)};
  } catch (const IngestError&) {
    throw;
  } catch (const Error& e) {
    throw IngestError(e.what());
  }
}

namespace {

struct SourceOutcome {
  std::vector<Document> documents;
  std::vector<SourceError> errors;
  std::vector<DroppedDocument> dropped;
  std::size_t duplicates = 0;
};

std::optional<FetchResponse> fetch_ok(Fetcher& fetcher, const std::string& url, std::string& error) {
  try {
    auto r = fetcher.get(url);
    if (r.status < 200 || r.status >= 300) {
      error = "HTTP status " + std::to_string(r.status);
      return std::nullopt;
    }
    return r;
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
}

SourceOutcome poll_one(const FeedSource& source, Fetcher& fetcher, DocumentStore& store,
                       const std::function<Timestamp()>& clock) {
  SourceOutcome out;
  std::string error;
  const auto feed = fetch_ok(fetcher, source.url, error);
  if (!feed) {
    out.errors.push_back({source.url, {}, error});
    return out;
  }
  std::vector<FeedItem> items;
  try {
    items = parse_feed(feed->body);
  } catch (const FeedParseError& e) {
    out.errors.push_back({source.url, {}, e.what()});
    return out;
  }

  for (const auto& item : items) {
    const std::string link(trim(item.link));
    std::string html;
    if (!link.empty() && parse_url(link)) {
      const auto page = fetch_ok(fetcher, link, error);
      if (page) {
        html = page->body;
      } else {
        out.errors.push_back({source.url, link, error});
        if (item.description.empty()) continue;
        html = item.description;
      }
    } else {
      out.dropped.push_back({link, "item has no absolute link"});
      continue;
    }

    std::string text;
    try {
      text = extract_main_content(html);
    } catch (const EncodingError& e) {
      out.errors.push_back({source.url, link, e.what()});
      continue;
    }
    if (text.empty() && !item.description.empty() && html != item.description) {
      try {
        text = extract_main_content(item.description);
      } catch (const EncodingError&) {
      }
    }
    if (text.empty()) {
      out.dropped.push_back({link, "no main content"});
      continue;
    }
    Document doc = make_document(link, std::move(text), clock());
    if (store.insert(doc)) {
      out.documents.push_back(std::move(doc));
    } else {
      ++out.duplicates;
    }
  }
  return out;
}

}  // namespace

PollReport poll_feeds(const std::vector<FeedSource>& sources, Fetcher& fetcher, DocumentStore& store,
                      const PollOptions& options) {
  std::vector<const FeedSource*> enabled;
  for (const auto& s : sources) {
    if (s.enabled) enabled.push_back(&s);
  }
  if (enabled.empty()) throw PreconditionError("no enabled feed sources");

  auto clock = options.clock;
  if (!clock) clock = [] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); };

  std::vector<SourceOutcome> outcomes(enabled.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < enabled.size(); i = next++) {
      outcomes[i] = poll_one(*enabled[i], fetcher, store, clock);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.max_parallel_sources, 1, enabled.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  PollReport report;
  for (auto& o : outcomes) {
    for (auto& d : o.documents) report.documents.push_back(std::move(d));
    for (auto& e : o.errors) report.errors.push_back(std::move(e));
    for (auto& d : o.dropped) report.dropped.push_back(std::move(d));
    report.skipped_duplicates += o.duplicates;
  }
  return report;
}

}  // namespace neolex
