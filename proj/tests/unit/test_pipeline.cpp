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

#include <filesystem>
#include <fstream>

#include "neolex/app.hpp"
#include "neolex/pipeline.hpp"

using namespace neolex;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("config file parsing") {
  const auto c = parse_app_config(R"(
# comment
database = data/neolex.db
lexicon.dictionary = /abs/dict.txt
lexicon.reference.NKJP = lists/nkjp.tsv
extract.references = dictionary, NKJP
filter.min_doc_freq = 7
filter.min_norm_edit_distance = 0.25
filter.references = NKJP
filter.llm = false
filter.chain = min-length, doc-freq
analyzer.mode = isolated
contexts.limit = 12
llm.mock = mock.json
llm.retries = 1
judge.endpoint = http://localhost:9/v1/chat/completions
judge.temperature = 0.2
)",
                                  "/etc/neolex");
  CHECK(c.database == std::filesystem::path("/etc/neolex/data/neolex.db"));
  CHECK(c.dictionary == std::filesystem::path("/abs/dict.txt"));
  CHECK(c.references.at("NKJP") == std::filesystem::path("/etc/neolex/lists/nkjp.tsv"));
  CHECK(c.extract_references == std::vector<std::string>{"dictionary", "NKJP"});
  CHECK(c.filter.min_doc_freq == 7);
  CHECK(c.filter.min_norm_edit_distance == doctest::Approx(0.25));
  CHECK(c.filter.enabled_references == std::vector<std::string>{"NKJP"});
  CHECK_FALSE(c.filter.llm_filter_enabled);
  CHECK(c.chain == std::vector<std::string>{"min-length", "doc-freq"});
  CHECK(c.lemma_mode == LemmaMode::context_free);
  CHECK(c.context_limit == 12);
  REQUIRE(c.llm);
  CHECK(c.llm->mock == std::filesystem::path("/etc/neolex/mock.json"));
  CHECK(c.llm->client.retries == 1);
  REQUIRE(c.judge);
  CHECK(c.judge->client.temperature == doctest::Approx(0.2));
  CHECK(parse_app_config("").filter == FilterConfig{});
}

TEST_CASE("config file errors name the line and key") {
  auto message = [](const std::string& text) {
    try {
      parse_app_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("\n\nfilter.min_dok_freq = 3") == "line 3: filter.min_dok_freq: unknown key");
  CHECK(message("filter.min_len = -1").find("non-negative integer") != std::string::npos);
  CHECK(message("filter.min_len = 0").find("min_len") != std::string::npos);
  CHECK(message("filter.llm = maybe").find("true or false") != std::string::npos);
  CHECK(message("filter.chain = min-length, nope").find("nope") != std::string::npos);
  CHECK(message("just text").find("key = value") != std::string::npos);
  CHECK(message("analyzer = command").find("analyzer.command") != std::string::npos);
  CHECK(message("llm.model = x").find("endpoint or mock") != std::string::npos);
  CHECK(message("llm.mock = m.json\nllm.top_p = 1.5").find("top_p") != std::string::npos);
  CHECK(app_config_keys().size() > 40);
}

TEST_CASE("resources and files") {
  const auto dir = temp_dir("neolex_pipeline_res");
  write(dir / "dict.txt", "kot\npies\n# comment\ndom\n");
  write(dir / "en.txt", "lockdown\n");
  write(dir / "nkjp.tsv", "smartfon\t120\n");
  write(dir / "gold.txt", "# gold\nhejter\n\nSmartfonik\n");
  write(dir / "app.conf",
        "lexicon.dictionary = dict.txt\nlexicon.english = en.txt\nlexicon.reference.NKJP = nkjp.tsv\n"
        "extract.references = dictionary, NKJP\n");
  const auto cfg = load_app_config(dir / "app.conf");
  Resources res(cfg);
  const auto lex = res.filter_lexicons();
  REQUIRE(lex.dictionary);
  CHECK(lex.dictionary->size() == 3);
  CHECK(lex.edit_index != nullptr);
  CHECK(lex.references.at("NKJP")->size() == 1);
  CHECK(res.extraction_references().size() == 2);

  Resources bad(std::nullopt, std::nullopt, {}, {"NKJP"});
  CHECK_THROWS_AS(bad.extraction_references(), ConfigError);

  const auto gold = load_gold_file(dir / "gold.txt");
  CHECK(gold.forms == std::set<std::string>{"hejter", "smartfonik"});
  CHECK_THROWS_AS(load_gold_file(dir / "missing.txt"), NotFoundError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("documents become candidate groups") {
  Resources res(ReferenceLexicon::from_words("dictionary", LexiconKind::dictionary,
                                             {"ala", "ma", "nowy", "i", "lubi", "go", "kupił", "wczoraj", "jan",
                                              "to", "jest", "świetny", "bardzo"}),
                std::nullopt, {});
  const auto t = parse_timestamp("2025-02-01T10:00:00Z");
  std::vector<Document> docs = {
      make_document("https://a.pl/1", "Ala ma nowy smartfonik i lubi go bardzo.", t),
      make_document("https://b.pl/2", "Jan kupił wczoraj smartfonik. To jest świetny smartfonik.",
                    t + std::chrono::days(1)),
      make_document("https://c.pl/3", "Ala ma smart-fonik i lubi go.", t + std::chrono::days(1)),
  };
  IdentityAdapter adapter;
  PipelineOptions po;
  po.parallelism = 2;
  const auto r = build_candidate_groups(docs, adapter, res.extraction_references(), po);
  CHECK(r.documents == 3);
  const auto it = std::find_if(r.groups.begin(), r.groups.end(),
                               [](const CandidateGroup& g) { return g.base_form == "smartfonik"; });
  REQUIRE(it != r.groups.end());
  CHECK(it->aggregate.term_freq == 4);
  CHECK(it->aggregate.doc_freq() == 3);
  CHECK(it->aggregate.unique_domains() == 3);
  CHECK(it->aggregate.daily_counts.size() == 2);

  po.parallelism = 1;
  const auto serial = build_candidate_groups(docs, adapter, res.extraction_references(), po);
  CHECK(serial.groups == r.groups);
  CHECK_THROWS_AS(build_candidate_groups(docs, adapter, {}, po), PreconditionError);
}

TEST_CASE("grouping evaluation items") {
  const auto dir = temp_dir("neolex_pipeline_grouping");
  write(dir / "g.jsonl",
        R"({"base_form": "hejter", "forms": ["hejterzy", "hejtera"], "examples": ["Hejterzy znowu piszą.", "Nie lubię hejtera."]})"
        "\n"
        R"({"base_form": "foliarz", "forms": ["foliarza"]})"
        "\n");
  const auto items = load_grouping_dataset(dir / "g.jsonl");
  REQUIRE(items.size() == 2);
  MapAdapter adapter({{"hejterzy", {"hejter", false}}, {"hejtera", {"hejter", false}}, {"foliarza", {"foliarz", false}}});
  const auto groups = lemmatize_grouping_items(items, adapter, LemmaMode::in_context);
  const auto report = compute_group_accuracy(groups);
  CHECK(report.groups == 2);
  CHECK(report.strict == 2);

  write(dir / "bad.jsonl", R"({"forms": []})");
  CHECK_THROWS_AS(load_grouping_dataset(dir / "bad.jsonl"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("category evaluation") {
  std::vector<CategoryEvalItem> items(2);
  for (auto& it : items) it.contexts.assign(5, "Zdanie.");
  items[0].id = "1";
  items[0].neologism = "hejter";
  items[0].sentiment = Sentiment::negative;
  items[0].domain = Domain::social_life_relationships;
  items[1].id = "2";
  items[1].neologism = "kryptowaluta";
  items[1].definition = "waluta cyfrowa";
  items[1].sentiment = Sentiment::neutral;
  items[1].domain = Domain::economy_business;

  FunctionClient client([](const std::string& p) -> std::string {
    const bool domain = p.find("TECHNOLOGIA I NAUKA") != std::string::npos;
    if (p.find("hejter") != std::string::npos) return domain ? "ŻYCIE SPOŁECZNE I RELACJE" : "negatywny";
    return domain ? "EKONOMIA I BIZNES" : "pozytywny";
  });
  const auto r = run_category_evaluation(items, client, CategorySetup::examples);
  CHECK(r.errors.empty());
  CHECK(r.sentiment.accuracy == doctest::Approx(0.5));
  CHECK(r.domain.accuracy == doctest::Approx(1.0));

  const auto with_def = run_category_evaluation(items, client, CategorySetup::definition);
  REQUIRE(with_def.errors.size() == 1);
  CHECK(with_def.errors[0].item_id == "1");
  CHECK(with_def.sentiment.items == 1);
  CHECK(to_json(with_def).find("\"setup\":\"definition\"") != std::string::npos);
}

TEST_CASE("application skips stages without their lexicon") {
  const auto dir = temp_dir("neolex_app_skip");
  write(dir / "dict.txt", "ala\nma\nnowy\ni\nlubi\ngo\n");
  write(dir / "app.conf", "database = store.db\nlexicon.dictionary = dict.txt\nfilter.min_doc_freq = 1\n"
                          "filter.min_lowercase = 1\nfilter.min_non_ne = 1\nfilter.min_polish_contexts = 1\n");
  {
    Application app(load_app_config(dir / "app.conf"));
    const auto chain = app.workbench().chain();
    CHECK(std::ranges::find(chain, std::string(filter_id::english)) == chain.end());
    CHECK(std::ranges::find(chain, std::string(filter_id::edit_distance)) != chain.end());
    CHECK(std::ranges::find(chain, std::string(filter_id::llm)) == chain.end());
    CHECK(app.notices().size() == 2);
    app.store().insert(make_document("https://a.pl/1", "Ala ma nowy smartfonik i lubi go bardzo mocno.",
                                     parse_timestamp("2025-02-01")));
    const auto r = app.run_pipeline();
    CHECK(r.groups.size() >= 1);
    CHECK(app.workbench().stage_reports().back().remaining >= 1);
  }
  write(dir / "chain.conf", "database = store2.db\nfilter.chain = min-length, english-dictionary\nfilter.llm = false\n");
  Application explicit_chain(load_app_config(dir / "chain.conf"));
  CHECK(explicit_chain.notices().empty());
  CHECK(explicit_chain.workbench().chain().size() == 2);
  std::filesystem::remove_all(dir);
}
