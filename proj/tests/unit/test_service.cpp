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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "neolex/service.hpp"

using namespace neolex;

namespace {

CandidateGroup make_group(const std::string& base, std::size_t docs, std::size_t contexts = 3) {
  CandidateGroup g;
  g.id = g.base_form = base;
  CandidateStats st;
  st.key = base;
  st.surface_variants[base] = docs;
  for (std::size_t i = 0; i < docs; ++i) st.doc_ids.insert(base + "-doc" + std::to_string(i));
  st.term_freq = docs;
  st.lowercase_count = st.non_ne_count = st.polish_context_count = docs;
  st.domain_counts["a.pl"] = docs;
  const auto day = parse_timestamp("2025-03-01");
  st.daily_counts[day] = docs;
  st.first_seen = st.last_seen = day;
  for (std::size_t i = 0; i < contexts; ++i) {
    st.contexts.push_back({"Zdanie " + std::to_string(i) + " ze słowem " + base + ".", "d" + std::to_string(i), day, i});
  }
  g.members.push_back(st);
  g.lemmas[base] = base;
  g.aggregate = st;
  return g;
}

FilterConfig loose_config() {
  FilterConfig c;
  c.min_doc_freq = c.min_lowercase = c.min_non_ne = c.min_polish_contexts = 1;
  c.llm_filter_enabled = false;
  return c;
}

WorkbenchOptions pure_options() {
  WorkbenchOptions o;
  o.chain = {std::string(filter_id::min_length), std::string(filter_id::max_length), std::string(filter_id::digits),
             std::string(filter_id::doc_freq)};
  o.clock = [] { return parse_timestamp("2025-06-01T12:00:00Z"); };
  return o;
}

}  // namespace

TEST_CASE("csv quoting and parsing") {
  CHECK(csv_field("abc") == "abc");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
  const auto text = write_csv({{"a", "b,c"}, {"żółć", "\"q\""}});
  CHECK(text == "a,\"b,c\"\r\nżółć,\"\"\"q\"\"\"\r\n");
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c"});
  CHECK(rows[1] == std::vector<std::string>{"żółć", "\"q\""});
  CHECK(parse_csv("x,\r\n") == std::vector<std::vector<std::string>>{{"x", ""}});
  CHECK_THROWS_AS(parse_csv("\"open"), ParseError);
  CHECK_THROWS_AS(parse_csv("a\"b"), ParseError);
}

TEST_CASE("store persists groups, decisions and runs") {
  const auto path = std::filesystem::temp_directory_path() / "neolex_store_test.db";
  std::filesystem::remove(path);
  {
    SqliteStore store(path);
    store.replace_groups({make_group("hejt", 6), make_group("foliarz", 7)});
    CHECK(store.group_count() == 2);
    const auto d1 = store.append_decision("hejt", ReviewStatus::accepted, "ann", parse_timestamp("2025-01-01"));
    CHECK(d1.version == 1);
    store.put("hash", "m", "resp");
    StoredRun run;
    run.config = loose_config();
    run.chain = {"doc-freq"};
    run.survivors = {"hejt"};
    run.stages = {{"No filter", "", 2, std::nullopt, std::nullopt, std::nullopt, std::nullopt}};
    store.save_run(run);
  }
  SqliteStore store(path);
  CHECK(store.group("hejt")->review_status == ReviewStatus::accepted);
  CHECK(store.group("foliarz")->aggregate == make_group("foliarz", 7).aggregate);
  CHECK(store.decisions("hejt").size() == 1);
  CHECK(*store.get(std::string("hash")) == "resp");
  const auto run = store.latest_run();
  REQUIRE(run);
  CHECK(run->config == loose_config());
  CHECK(run->survivors == std::set<std::string>{"hejt"});
  CHECK_THROWS_AS(store.append_decision("nope", ReviewStatus::accepted, "ann", {}), NotFoundError);
  std::filesystem::remove(path);
}

TEST_CASE("filter config json") {
  FilterConfig c = loose_config();
  c.enabled_references = {"NKJP"};
  CHECK(filter_config_from_json(filter_config_to_json(c)) == c);
  CHECK(filter_config_from_json(R"({"min_doc_freq": 50})").min_doc_freq == 50);
  try {
    filter_config_from_json(R"({"min_doc_frek": 50})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("min_doc_frek") != std::string::npos);
  }
}

TEST_CASE("list_candidates pages, filters and sorts") {
  SqliteStore store(":memory:");
  Workbench wb(store, pure_options(), loose_config());
  wb.replace_groups({make_group("gamma", 3), make_group("alfa", 5), make_group("beta", 4)});
  wb.rerun();

  ListQuery q;
  q.page_size = 2;
  const auto p0 = wb.list_candidates(q);
  q.page = 1;
  const auto p1 = wb.list_candidates(q);
  CHECK(p0.total == 3);
  REQUIRE(p0.items.size() == 2);
  REQUIRE(p1.items.size() == 1);
  CHECK(p0.items[0].base_form == "alfa");
  CHECK(p0.items[1].base_form == "beta");
  CHECK(p1.items[0].base_form == "gamma");

  q = {};
  q.sort_key = "-doc_freq";
  const auto by_freq = wb.list_candidates(q);
  CHECK(by_freq.items[0].base_form == "alfa");
  CHECK(by_freq.items[2].base_form == "gamma");
  CHECK(by_freq.stages.size() == 5);

  wb.set_review_status("beta", ReviewStatus::accepted, "ann");
  q = {};
  q.selection.status = ReviewStatus::accepted;
  const auto accepted = wb.list_candidates(q);
  REQUIRE(accepted.items.size() == 1);
  CHECK(accepted.items[0].id == "beta");

  q = {};
  q.sort_key = "popularity";
  CHECK_THROWS_AS(wb.list_candidates(q), PreconditionError);
  q = {};
  q.page_size = kMaxPageSize + 1;
  CHECK_THROWS_AS(wb.list_candidates(q), PreconditionError);
  q = {};
  q.selection.stage = "no-such-filter";
  CHECK_THROWS_AS(wb.list_candidates(q), PreconditionError);
}

TEST_CASE("stage selection follows the latest run") {
  SqliteStore store(":memory:");
  auto cfg = loose_config();
  cfg.min_doc_freq = 4;
  Workbench wb(store, pure_options(), cfg);
  wb.replace_groups({make_group("gamma", 3), make_group("alfa", 5), make_group("ab", 9)});
  wb.rerun();
  ListQuery q;
  q.selection.stage = "survivors";
  CHECK(wb.list_candidates(q).total == 1);
  q.selection.stage = "rejected";
  CHECK(wb.list_candidates(q).total == 2);
  q.selection.stage = filter_id::doc_freq;
  const auto by_freq = wb.list_candidates(q);
  REQUIRE(by_freq.total == 1);
  CHECK(by_freq.items[0].id == "gamma");
  CHECK(by_freq.items[0].rejected_by->filter_id == filter_id::doc_freq);
  CHECK_FALSE(by_freq.items[0].survived);
}

TEST_CASE("review decisions are versioned") {
  SqliteStore store(":memory:");
  Workbench wb(store, pure_options(), loose_config());
  wb.replace_groups({make_group("hejt", 6)});
  CHECK(wb.candidate("hejt").summary.review_status == ReviewStatus::pending);
  const auto d1 = wb.set_review_status("hejt", ReviewStatus::accepted, "ann");
  CHECK(d1.version == 1);
  CHECK(wb.candidate("hejt").summary.review_status == ReviewStatus::accepted);
  const auto d2 = wb.set_review_status("hejt", ReviewStatus::rejected, "bob");
  CHECK(d2.version == 2);
  const auto detail = wb.candidate("hejt");
  CHECK(detail.summary.review_status == ReviewStatus::rejected);
  REQUIRE(detail.decisions.size() == 2);
  CHECK(detail.decisions[1].reviewer == "bob");
  CHECK_THROWS_AS(wb.set_review_status("nope", ReviewStatus::accepted, "ann"), NotFoundError);
  CHECK_THROWS_AS(wb.candidate("nope"), NotFoundError);

  // review state survives a rebuild of the groups
  wb.replace_groups({make_group("hejt", 8)});
  CHECK(wb.candidate("hejt").summary.review_status == ReviewStatus::rejected);
}

TEST_CASE("frequency trend buckets by day") {
  SqliteStore store(":memory:");
  Workbench wb(store, pure_options(), loose_config());
  auto g = make_group("hejt", 4);
  g.aggregate.daily_counts.clear();
  g.aggregate.daily_counts[parse_timestamp("2025-03-01")] = 3;
  g.aggregate.daily_counts[parse_timestamp("2025-03-05")] = 1;
  wb.replace_groups({g});

  const auto t = wb.frequency_trend("hejt");
  std::vector<std::uint64_t> counts;
  for (const auto& [day, n] : t.buckets) counts.push_back(n);
  CHECK(counts == std::vector<std::uint64_t>{3, 0, 0, 0, 1});
  for (std::size_t i = 1; i < t.buckets.size(); ++i) CHECK(t.buckets[i - 1].first < t.buckets[i].first);

  const auto wide = wb.frequency_trend("hejt", parse_timestamp("2025-02-20"), parse_timestamp("2025-03-20"));
  std::uint64_t sum = 0;
  for (const auto& b : wide.buckets) sum += b.second;
  CHECK(sum == g.aggregate.term_freq);
  CHECK(wide.buckets.size() == 29);

  const auto empty = wb.frequency_trend("hejt", parse_timestamp("2025-04-01"), parse_timestamp("2025-04-03"));
  REQUIRE(empty.buckets.size() == 3);
  for (const auto& b : empty.buckets) CHECK(b.second == 0);

  CHECK_THROWS_AS(wb.frequency_trend("hejt", parse_timestamp("2025-04-03"), parse_timestamp("2025-04-01")),
                  PreconditionError);
  CHECK_THROWS_AS(wb.frequency_trend("nope"), NotFoundError);
  CHECK(to_json(t).find("\"2025-03-05\"") != std::string::npos);
}

TEST_CASE("csv export") {
  SqliteStore store(":memory:");
  Workbench wb(store, pure_options(), loose_config());
  auto g = make_group("ściema", 6);
  g.aggregate.contexts.front().sentence = "To, co \"mówi\", to ściema.";
  wb.replace_groups({g, make_group("alfa", 5)});
  wb.rerun();
  wb.set_review_status("ściema", ReviewStatus::accepted, "ann");

  Selection accepted;
  accepted.status = ReviewStatus::accepted;
  const auto csv = wb.export_csv(accepted);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == csv_header());
  CHECK(rows[1] == csv_row(*store.group("ściema")));
  CHECK(rows[1][7] == "accepted");
  CHECK(rows[1][11] == "To, co \"mówi\", to ściema.");
  CHECK(csv.find("\"To, co \"\"mówi\"\", to ściema.\"") != std::string::npos);
  CHECK(write_csv(rows) == csv);
  CHECK(csv.rfind("base_form,variants,doc_freq,term_freq,unique_domains,first_seen,last_seen,review_status,"
                  "definition,sentiment,domain,sample_context\r\n",
                  0) == 0);

  Selection none;
  none.status = ReviewStatus::rejected;
  CHECK(parse_csv(wb.export_csv(none)).size() == 1);

  const auto all = parse_csv(wb.export_csv());
  REQUIRE(all.size() == 3);
  CHECK(all[1][0] == "alfa");
  CHECK(all[2][0] == "ściema");
}

TEST_CASE("config update reruns atomically") {
  SqliteStore store(":memory:");
  Workbench wb(store, pure_options(), loose_config());
  std::vector<CandidateGroup> groups;
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) groups.push_back(make_group("slowo" + std::string(1, char('a' + i % 26)) +
                                                               std::string(1, char('a' + i / 26)),
                                                           1 + rng() % 80));
  wb.replace_groups(groups);
  auto cfg = loose_config();
  cfg.min_doc_freq = 5;
  const auto r5 = wb.update_filter_config_and_rerun(cfg);
  const auto json5 = to_json(r5);
  CHECK(to_json(wb.update_filter_config_and_rerun(cfg)) == json5);
  CHECK(to_json(wb.stage_reports()) == json5);
  for (std::size_t i = 1; i < r5.size(); ++i) CHECK(r5[i].remaining <= r5[i - 1].remaining);

  cfg.min_doc_freq = 50;
  const auto r50 = wb.update_filter_config_and_rerun(cfg);
  CHECK(r50.back().remaining <= r5.back().remaining);
  CHECK(wb.filter_config().min_doc_freq == 50);

  auto bad = cfg;
  bad.min_len = 0;
  const auto run_before = wb.latest_run();
  CHECK_THROWS_AS(wb.update_filter_config_and_rerun(bad), ConfigError);
  CHECK(wb.filter_config() == cfg);
  CHECK(wb.latest_run() == run_before);

  auto missing = cfg;
  missing.enabled_references = {"NKJP"};
  WorkbenchOptions o = pure_options();
  SqliteStore store2(":memory:");
  Workbench wb2(store2, o, cfg);
  wb2.replace_groups(groups);
  wb2.rerun();
  const auto before2 = wb2.latest_run();
  o.chain.clear();
  Workbench wb3(store2, o, cfg);
  CHECK_THROWS(wb3.update_filter_config_and_rerun(missing));
  CHECK(wb3.filter_config() == cfg);
  CHECK(wb3.latest_run() == before2);

  // a restarted workbench resumes the stored config
  Workbench again(store, pure_options(), loose_config());
  CHECK(again.filter_config().min_doc_freq == 50);
}

TEST_CASE("definitions and categories on demand") {
  SqliteStore store(":memory:");
  MockClient mock;
  mock.set_default("Osoba, która hejtuje.");
  mock.add_rule("TECHNOLOGIA I NAUKA", "TECHNOLOGIA I NAUKA");
  mock.add_rule("[Kategoria]", "pozytywny");
  auto o = pure_options();
  o.llm = &mock;
  Workbench wb(store, o, loose_config());
  wb.replace_groups({make_group("hejter", 6, 6), make_group("ziom", 6, 2)});

  const auto d = wb.request_definition("hejter", 5);
  CHECK(d.text == "Osoba, która hejtuje.");
  CHECK(d.shots == 5);
  REQUIRE(d.examples_used.size() == 5);
  CHECK(d.examples_used.front() == store.group("hejter")->aggregate.contexts[0].sentence);
  CHECK(d.examples_used.back() == store.group("hejter")->aggregate.contexts[4].sentence);
  const auto calls = mock.calls();
  CHECK(wb.request_definition("hejter", 5) == d);
  CHECK(mock.calls() == calls);
  CHECK(store.group("hejter")->definition == d);
  CHECK(wb.candidate("hejter").summary.definition == d.text);

  CHECK_THROWS_AS(wb.request_definition("ziom", 5), PreconditionError);
  CHECK_THROWS_AS(wb.request_definition("hejter", 4), PreconditionError);
  CHECK_THROWS_AS(wb.request_definition("nope", 0), NotFoundError);
  CHECK_THROWS_AS(wb.request_categories("ziom", CategorySetup::definition), PreconditionError);
  CHECK_THROWS_AS(wb.request_categories("ziom", CategorySetup::examples), PreconditionError);

  const auto c = wb.request_categories("hejter", CategorySetup::both);
  CHECK(c.sentiment.setup == CategorySetup::both);
  const auto calls2 = mock.calls();
  CHECK(wb.request_categories("hejter", CategorySetup::both) == c);
  CHECK(mock.calls() == calls2);
  CHECK(store.group("hejter")->sentiment == c.sentiment);

  FunctionClient failing([](const std::string&) -> std::string { throw LlmError("upstream 503"); }, "down", 0);
  auto fo = pure_options();
  fo.llm = &failing;
  SqliteStore store2(":memory:");
  Workbench wb2(store2, fo, loose_config());
  wb2.replace_groups({make_group("hejter", 6, 6)});
  try {
    wb2.request_definition("hejter", 0);
    FAIL("expected LlmError");
  } catch (const LlmError& e) {
    CHECK(std::string(e.what()).find("retried") != std::string::npos);
  }
  CHECK_FALSE(store2.definition("hejter", 0));
}

TEST_CASE("llm stage reuses cached verdicts across reruns") {
  SqliteStore store(":memory:");
  MockClient mock;
  mock.set_default("Neologizm: tak");
  auto o = pure_options();
  o.chain.emplace_back(filter_id::llm);
  o.llm = &mock;
  LlmExemplars ex;
  for (int i = 0; i < 3; ++i) {
    ex.positive.push_back({"p" + std::to_string(i), {"p"}});
    ex.negative.push_back({"n" + std::to_string(i), {"n"}});
  }
  o.exemplars = ex;
  auto cfg = loose_config();
  cfg.llm_filter_enabled = true;
  Workbench wb(store, o, cfg);
  wb.replace_groups({make_group("hejter", 6), make_group("ziomal", 9)});
  wb.rerun();
  const auto first = mock.calls();
  CHECK(first == 2);
  cfg.min_doc_freq = 2;
  wb.update_filter_config_and_rerun(cfg);
  CHECK(mock.calls() == first);
  CHECK(store.cache_size() == 2);

  // without a client the llm stage is left out of the chain
  SqliteStore store2(":memory:");
  auto no_llm = pure_options();
  no_llm.chain.emplace_back(filter_id::llm);
  Workbench wb2(store2, no_llm, cfg);
  const auto chain2 = wb2.chain();
  CHECK(std::find(chain2.begin(), chain2.end(), filter_id::llm) == chain2.end());
}
