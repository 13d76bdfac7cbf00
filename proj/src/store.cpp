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

#include "neolex/store.hpp"

#include <sqlite3.h>

#include "json_codec.hpp"

namespace neolex {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON

namespace {

json decision_json(const FilterDecision& d) { return json::parse(to_json(d)); }

FilterDecision decision_from(const json& j) {
  FilterDecision d;
  d.filter_id = j.at("filter_id").get<std::string>();
  d.passed = j.at("passed").get<bool>();
  d.undetermined = j.value("undetermined", false);
  d.reason = j.at("reason").get<std::string>();
  if (j.contains("evidence") && !j["evidence"].is_null()) d.evidence = j["evidence"].get<std::string>();
  return d;
}

json config_json(const FilterConfig& c) {
  return {{"min_len", c.min_len},
          {"max_len", c.max_len},
          {"min_doc_freq", c.min_doc_freq},
          {"min_lowercase", c.min_lowercase},
          {"min_non_ne", c.min_non_ne},
          {"min_polish_contexts", c.min_polish_contexts},
          {"min_norm_edit_distance", c.min_norm_edit_distance},
          {"min_unique_domains", c.min_unique_domains},
          {"enabled_references", c.enabled_references},
          {"llm_filter_enabled", c.llm_filter_enabled},
          {"reject_compounds", c.reject_compounds}};
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("invalid value for ") + key);
  }
}

void read_count(const json& j, const char* key, std::size_t& out) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  out = j.get<std::size_t>();
}

FilterConfig config_from(const json& j, FilterConfig c) {
  if (!j.is_object()) throw ConfigError("filter config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "min_len") read_count(v, k, c.min_len);
    else if (key == "max_len") read_count(v, k, c.max_len);
    else if (key == "min_doc_freq") read_count(v, k, c.min_doc_freq);
    else if (key == "min_lowercase") read_count(v, k, c.min_lowercase);
    else if (key == "min_non_ne") read_count(v, k, c.min_non_ne);
    else if (key == "min_polish_contexts") read_count(v, k, c.min_polish_contexts);
    else if (key == "min_unique_domains") read_count(v, k, c.min_unique_domains);
    else if (key == "min_norm_edit_distance") {
      if (!v.is_number()) throw ConfigError("min_norm_edit_distance must be a number");
      c.min_norm_edit_distance = v.get<double>();
    } else if (key == "enabled_references") read_field(v, k, c.enabled_references);
    else if (key == "llm_filter_enabled") read_field(v, k, c.llm_filter_enabled);
    else if (key == "reject_compounds") read_field(v, k, c.reject_compounds);
    else throw ConfigError("unknown filter setting: " + key);
  }
  return c;
}

json run_json(const StoredRun& r) {
  json rej = json::object(), flags = json::object();
  for (const auto& [id, d] : r.rejections) rej[id] = decision_json(d);
  for (const auto& [id, d] : r.flags) flags[id] = decision_json(d);
  return {{"id", r.id},
          {"created_at", format_timestamp(r.created_at)},
          {"config", config_json(r.config)},
          {"chain", r.chain},
          {"stages", json::parse(to_json(r.stages))},
          {"survivors", r.survivors},
          {"rejections", rej},
          {"flags", flags}};
}

StoredRun run_from(const json& j) {
  StoredRun r;
  r.id = j.at("id").get<std::int64_t>();
  r.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  r.config = config_from(j.at("config"), {});
  r.chain = j.at("chain").get<std::vector<std::string>>();
  r.stages = stage_reports_from_json(j.at("stages").dump());
  r.survivors = j.at("survivors").get<std::set<std::string>>();
  for (const auto& [id, d] : j.at("rejections").items()) r.rejections[id] = decision_from(d);
  for (const auto& [id, d] : j.at("flags").items()) r.flags[id] = decision_from(d);
  return r;
}

json categories_json(const CategoryArtifact& c) {
  return {{"sentiment", to_string(c.sentiment.value)},
          {"domain", to_string(c.domain.value)},
          {"setup", to_string(c.sentiment.setup)},
          {"model_name", c.model_name},
          {"created_at", format_timestamp(c.created_at)}};
}

CategoryArtifact categories_from(const json& j) {
  CategoryArtifact c;
  const auto setup = parse_category_setup(j.at("setup").get<std::string>());
  c.sentiment = {parse_sentiment(j.at("sentiment").get<std::string>()), setup};
  c.domain = {parse_domain(j.at("domain").get<std::string>()), setup};
  c.model_name = j.at("model_name").get<std::string>();
  c.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  return c;
}

}  // namespace

std::string filter_config_to_json(const FilterConfig& c) { return config_json(c).dump(); }

FilterConfig filter_config_from_json(std::string_view text, const FilterConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed filter config: ") + e.what());
  }
  return config_from(j, base);
}

std::string to_json(const ReviewDecision& d) {
  return json{{"group_id", d.group_id},
              {"status", to_string(d.status)},
              {"reviewer", d.reviewer},
              {"decided_at", format_timestamp(d.decided_at)},
              {"version", d.version}}
      .dump();
}

std::string run_to_json(const StoredRun& r) { return run_json(r).dump(); }

StoredRun run_from_json(std::string_view text) {
  return codec::guarded("malformed run record", [&] { return run_from(json::parse(text)); });
}

// ---------------------------------------------------------------------------
// SQLite plumbing

namespace {

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &s_, nullptr) != SQLITE_OK) {
      throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db) + " in " + sql);
    }
  }
  ~Stmt() { sqlite3_finalize(s_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, std::string_view v) {
    check(sqlite3_bind_text(s_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(s_, i, v));
    return *this;
  }
  /// True while a row is available.
  bool step() {
    const int rc = sqlite3_step(s_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw StoreError(std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
  }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(s_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(s_, col))) : std::string();
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(s_, col); }
  void reset() {
    sqlite3_reset(s_);
    sqlite3_clear_bindings(s_);
  }

 private:
  void check(int rc) const {
    if (rc != SQLITE_OK) throw StoreError(std::string("sqlite bind failed: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* s_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError("sqlite exec failed: " + msg);
  }
}

class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { exec(db_, "BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3* db_;
  bool done_ = false;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS documents(seq INTEGER PRIMARY KEY AUTOINCREMENT, id TEXT UNIQUE NOT NULL, body TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS groups(id TEXT PRIMARY KEY, body TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS decisions(group_id TEXT NOT NULL, version INTEGER NOT NULL, status TEXT NOT NULL,
  reviewer TEXT NOT NULL, decided_at TEXT NOT NULL, PRIMARY KEY(group_id, version));
CREATE TABLE IF NOT EXISTS runs(id INTEGER PRIMARY KEY AUTOINCREMENT, body TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS llm_cache(prompt_hash TEXT PRIMARY KEY, model TEXT NOT NULL, response TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS definitions(group_id TEXT NOT NULL, shots INTEGER NOT NULL, body TEXT NOT NULL,
  PRIMARY KEY(group_id, shots));
CREATE TABLE IF NOT EXISTS categories(group_id TEXT NOT NULL, setup TEXT NOT NULL, body TEXT NOT NULL,
  PRIMARY KEY(group_id, setup));
)sql";

}  // namespace

struct SqliteStore::Db {
  sqlite3* h = nullptr;
  ~Db() {
    if (h) sqlite3_close(h);
  }
};

SqliteStore::SqliteStore(const std::filesystem::path& path) : db_(std::make_unique<Db>()) {
  if (sqlite3_open_v2(path.string().c_str(), &db_->h,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX, nullptr) != SQLITE_OK) {
    const std::string msg = db_->h ? sqlite3_errmsg(db_->h) : "out of memory";
    throw StoreError("cannot open database " + path.string() + ": " + msg);
  }
  sqlite3_busy_timeout(db_->h, 5000);
  if (path != ":memory:") exec(db_->h, "PRAGMA journal_mode=WAL");
  exec(db_->h, kSchema);
}

SqliteStore::~SqliteStore() = default;

bool SqliteStore::insert(const Document& doc) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "INSERT OR IGNORE INTO documents(id, body) VALUES(?, ?)");
  s.bind(1, doc.id).bind(2, document_to_json(doc)).step();
  return sqlite3_changes(db_->h) > 0;
}

bool SqliteStore::contains(std::string_view id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT 1 FROM documents WHERE id = ?");
  s.bind(1, id);
  return s.step();
}

std::optional<Document> SqliteStore::get(std::string_view id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM documents WHERE id = ?");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return document_from_json(s.text(0));
}

std::vector<Document> SqliteStore::all() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM documents ORDER BY seq");
  std::vector<Document> out;
  while (s.step()) out.push_back(document_from_json(s.text(0)));
  return out;
}

std::size_t SqliteStore::size() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT COUNT(*) FROM documents");
  s.step();
  return static_cast<std::size_t>(s.integer(0));
}

std::optional<std::string> SqliteStore::get(const std::string& prompt_hash) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT response FROM llm_cache WHERE prompt_hash = ?");
  s.bind(1, prompt_hash);
  if (!s.step()) return std::nullopt;
  return s.text(0);
}

void SqliteStore::put(const std::string& prompt_hash, const std::string& model, const std::string& response) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "INSERT OR REPLACE INTO llm_cache(prompt_hash, model, response) VALUES(?, ?, ?)");
  s.bind(1, prompt_hash).bind(2, model).bind(3, response).step();
}

std::size_t SqliteStore::cache_size() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT COUNT(*) FROM llm_cache");
  s.step();
  return static_cast<std::size_t>(s.integer(0));
}

void SqliteStore::replace_groups(const std::vector<CandidateGroup>& groups) {
  std::lock_guard lock(mu_);
  Transaction tx(db_->h);
  exec(db_->h, "DELETE FROM groups");
  Stmt s(db_->h, "INSERT INTO groups(id, body) VALUES(?, ?)");
  for (const auto& g : groups) {
    s.bind(1, g.id).bind(2, group_to_json(g)).step();
    s.reset();
  }
  tx.commit();
}

void SqliteStore::put_group(const CandidateGroup& group) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "INSERT OR REPLACE INTO groups(id, body) VALUES(?, ?)");
  s.bind(1, group.id).bind(2, group_to_json(group)).step();
}

std::optional<CandidateGroup> SqliteStore::group(const std::string& id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM groups WHERE id = ?");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return group_from_json(s.text(0));
}

std::vector<CandidateGroup> SqliteStore::groups() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM groups ORDER BY id");
  std::vector<CandidateGroup> out;
  while (s.step()) out.push_back(group_from_json(s.text(0)));
  return out;
}

std::size_t SqliteStore::group_count() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT COUNT(*) FROM groups");
  s.step();
  return static_cast<std::size_t>(s.integer(0));
}

ReviewDecision SqliteStore::append_decision(const std::string& group_id, ReviewStatus status,
                                            const std::string& reviewer, Timestamp decided_at) {
  std::lock_guard lock(mu_);
  Transaction tx(db_->h);
  std::optional<CandidateGroup> g;
  {
    Stmt s(db_->h, "SELECT body FROM groups WHERE id = ?");
    s.bind(1, group_id);
    if (s.step()) g = group_from_json(s.text(0));
  }
  if (!g) throw NotFoundError("unknown group: " + group_id);
  ReviewDecision d{group_id, status, reviewer, decided_at, 1};
  {
    Stmt s(db_->h, "SELECT COALESCE(MAX(version), 0) FROM decisions WHERE group_id = ?");
    s.bind(1, group_id);
    s.step();
    d.version = s.integer(0) + 1;
  }
  Stmt ins(db_->h, "INSERT INTO decisions(group_id, version, status, reviewer, decided_at) VALUES(?, ?, ?, ?, ?)");
  ins.bind(1, group_id).bind(2, d.version).bind(3, to_string(status)).bind(4, reviewer);
  ins.bind(5, format_timestamp(decided_at)).step();
  g->review_status = status;
  Stmt up(db_->h, "UPDATE groups SET body = ? WHERE id = ?");
  up.bind(1, group_to_json(*g)).bind(2, group_id).step();
  tx.commit();
  return d;
}

std::vector<ReviewDecision> SqliteStore::decisions(const std::string& group_id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT version, status, reviewer, decided_at FROM decisions WHERE group_id = ? ORDER BY version");
  s.bind(1, group_id);
  std::vector<ReviewDecision> out;
  while (s.step()) {
    out.push_back({group_id, parse_review_status(s.text(1)), s.text(2), parse_timestamp(s.text(3)), s.integer(0)});
  }
  return out;
}

std::int64_t SqliteStore::save_run(const StoredRun& run) {
  std::lock_guard lock(mu_);
  Transaction tx(db_->h);
  {
    Stmt s(db_->h, "INSERT INTO runs(body) VALUES('{}')");
    s.step();
  }
  StoredRun copy = run;
  copy.id = sqlite3_last_insert_rowid(db_->h);
  Stmt up(db_->h, "UPDATE runs SET body = ? WHERE id = ?");
  up.bind(1, run_to_json(copy)).bind(2, copy.id).step();
  Stmt meta(db_->h, "INSERT OR REPLACE INTO meta(key, value) VALUES('filter_config', ?)");
  meta.bind(1, filter_config_to_json(run.config)).step();
  tx.commit();
  return copy.id;
}

std::optional<StoredRun> SqliteStore::latest_run() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM runs ORDER BY id DESC LIMIT 1");
  if (!s.step()) return std::nullopt;
  return run_from_json(s.text(0));
}

void SqliteStore::save_gold(const std::optional<GoldSet>& gold) {
  std::lock_guard lock(mu_);
  if (!gold) {
    exec(db_->h, "DELETE FROM meta WHERE key = 'gold'");
    return;
  }
  const json j{{"forms", gold->forms}, {"exhaustive", gold->exhaustive}};
  Stmt s(db_->h, "INSERT OR REPLACE INTO meta(key, value) VALUES('gold', ?)");
  s.bind(1, j.dump()).step();
}

std::optional<GoldSet> SqliteStore::load_gold() const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT value FROM meta WHERE key = 'gold'");
  if (!s.step()) return std::nullopt;
  return codec::guarded("malformed gold record", [&] {
    const auto j = json::parse(s.text(0));
    GoldSet g;
    g.forms = j.at("forms").get<std::set<std::string>>();
    g.exhaustive = j.at("exhaustive").get<bool>();
    return g;
  });
}

void SqliteStore::save_definition(const std::string& group_id, const Definition& d) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "INSERT OR REPLACE INTO definitions(group_id, shots, body) VALUES(?, ?, ?)");
  s.bind(1, group_id).bind(2, static_cast<std::int64_t>(d.shots)).bind(3, codec::to_json(d).dump()).step();
}

std::optional<Definition> SqliteStore::definition(const std::string& group_id, int shots) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM definitions WHERE group_id = ? AND shots = ?");
  s.bind(1, group_id).bind(2, static_cast<std::int64_t>(shots));
  if (!s.step()) return std::nullopt;
  return codec::guarded("malformed definition record", [&] { return codec::definition_from(json::parse(s.text(0))); });
}

void SqliteStore::save_categories(const std::string& group_id, const CategoryArtifact& c) {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "INSERT OR REPLACE INTO categories(group_id, setup, body) VALUES(?, ?, ?)");
  s.bind(1, group_id).bind(2, to_string(c.sentiment.setup)).bind(3, categories_json(c).dump()).step();
}

std::optional<CategoryArtifact> SqliteStore::categories(const std::string& group_id, CategorySetup setup) const {
  std::lock_guard lock(mu_);
  Stmt s(db_->h, "SELECT body FROM categories WHERE group_id = ? AND setup = ?");
  s.bind(1, group_id).bind(2, to_string(setup));
  if (!s.step()) return std::nullopt;
  return codec::guarded("malformed category record", [&] { return categories_from(json::parse(s.text(0))); });
}

}  // namespace neolex
