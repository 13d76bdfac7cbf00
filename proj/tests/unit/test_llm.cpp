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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "neolex/llm.hpp"

using namespace neolex;

namespace {

std::vector<std::string> numbered(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(stem + " " + std::to_string(i) + ".");
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Timestamp fixed_clock() { return parse_timestamp("2025-03-01T12:00:00Z"); }

/// Extracts the text following a "[label]\n" line up to the next blank line.
std::string section(const std::string& prompt, const std::string& label) {
  const auto at = prompt.find("[" + label + "]\n");
  if (at == std::string::npos) return {};
  const auto start = at + label.size() + 3;
  return prompt.substr(start, prompt.find('\n', start) - start);
}

}  // namespace

TEST_CASE("client config validation") {
  ClientConfig c;
  c.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  CHECK(c.temperature == 0.6);
  CHECK(c.top_p == 0.95);
  CHECK(c.retries == 2);
  CHECK_NOTHROW(c.validate());
  for (double bad : {0.0, -0.1, 1.5}) {
    auto t = c;
    t.temperature = bad;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    auto p = c;
    p.top_p = bad;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  auto r = c;
  r.retries = -1;
  CHECK_THROWS_AS(r.validate(), ConfigError);
  auto one = c;
  one.temperature = 1.0;
  one.top_p = 1.0;
  one.retries = 0;
  CHECK_NOTHROW(one.validate());
}

TEST_CASE("chat client wire format") {
  ClientConfig c;
  c.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  c.model = "m1";
  HttpChatClient client(c);
  const auto body = client.request_body("Słowo");
  CHECK(body.find("\"model\":\"m1\"") != std::string::npos);
  CHECK(body.find("\"role\":\"user\"") != std::string::npos);
  CHECK(body.find("\"content\":\"Słowo\"") != std::string::npos);
  CHECK(body.find("\"temperature\":0.6") != std::string::npos);
  CHECK(body.find("\"top_p\":0.95") != std::string::npos);
  CHECK(body.find("\"max_tokens\":512") != std::string::npos);
  CHECK(HttpChatClient::parse_response(R"({"choices":[{"message":{"role":"assistant","content":"WIN"}}]})") == "WIN");
  CHECK_THROWS_AS(HttpChatClient::parse_response(R"({"choices":[]})"), LlmError);
  CHECK_THROWS_AS(HttpChatClient::parse_response("not json"), LlmError);
  CHECK_THROWS_AS(client.complete("x"), LlmError);  // nothing listens on port 9
}

TEST_CASE("mock client lookup order") {
  auto m = MockClient::from_json(R"({"model":"mock-a","default":"D","rules":[{"contains":"kot","response":"R"}]})");
  m->set_response("exact kot", "H");
  CHECK(m->model_name() == "mock-a");
  CHECK(m->complete("exact kot") == "H");
  CHECK(m->complete("inny kot") == "R");
  CHECK(m->complete("pies") == "D");
  CHECK(m->calls() == 3);
  const std::string keyed = std::string(R"({"responses":{")") + sha256_hex("p") + R"(":"ok"}})";
  auto k = MockClient::from_json(keyed);
  CHECK(k->complete("p") == "ok");
  CHECK_THROWS_AS(k->complete("q"), LlmError);
  CHECK_THROWS_AS(MockClient::from_json("[1]"), ParseError);
  CHECK_THROWS_AS(MockClient::from_file("/nonexistent/mock.json"), NotFoundError);
}

TEST_CASE("template files match the built-in templates") {
  const std::filesystem::path dir = NEOLEX_SOURCE_DIR "/templates";
  const auto builtin = PromptTemplates::defaults();
  CHECK(read_file(dir / "definition.txt") == builtin.definition);
  CHECK(read_file(dir / "pointwise.txt") == builtin.pointwise);
  CHECK(read_file(dir / "pairwise.txt") == builtin.pairwise);
  CHECK(read_file(dir / "sentiment.txt") == builtin.sentiment);
  CHECK(read_file(dir / "domain.txt") == builtin.domain);
  CHECK(read_file(dir / "filter.txt") == builtin.filter);

  const auto tmp = std::filesystem::temp_directory_path() / "neolex_templates_override";
  std::filesystem::create_directories(tmp);
  std::ofstream(tmp / "sentiment.txt") << "S {neologism}";
  const auto loaded = PromptTemplates::load(tmp);
  CHECK(loaded.sentiment == "S {neologism}");
  CHECK(loaded.definition == builtin.definition);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("render_template") {
  TemplateValues v;
  v.scalars = {{"a", "x"}, {"empty", ""}};
  v.lists = {{"items", {"p", "q"}}, {"none", {}}};
  CHECK(render_template("<{a}>", v) == "<x>");
  CHECK(render_template("{#items}[{index}:{text}]{/items}", v) == "[1:p][2:q]");
  CHECK(render_template("{#none}[{text}]{/none}end", v) == "end");
  CHECK(render_template("{?a}yes {a}{/a}|{?empty}no{/empty}", v) == "yes x|");
  CHECK(render_template("Neologizm:<tak|nie> { } {a b}", v) == "Neologizm:<tak|nie> { } {a b}");
  CHECK_THROWS_AS(render_template("{missing}", v), ParseError);
  CHECK_THROWS_AS(render_template("{#items}open", v), ParseError);
  CHECK_THROWS_AS(render_template("{/items}", v), ParseError);
  CHECK_THROWS_AS(render_template("{#nolist}{/nolist}", v), ParseError);
}

TEST_CASE("definition prompt and generation") {
  const auto contexts = numbered("Zdanie", 7);
  const auto zero = definition_prompt("kidult", contexts, 0);
  CHECK(zero.find("[Przykład") == std::string::npos);
  CHECK(zero.find("[Słowo]\nkidult\n") != std::string::npos);
  CHECK(zero.find("wzorując się na 0 przykładach") != std::string::npos);
  CHECK(zero.ends_with("[Definicja]\n"));

  const auto five = definition_prompt("kidult", contexts, 5);
  std::size_t prev = 0;
  for (int i = 1; i <= 5; ++i) {
    const auto at = five.find("[Przykład " + std::to_string(i) + "]\nZdanie " + std::to_string(i) + ".\n");
    REQUIRE(at != std::string::npos);
    CHECK(at > prev);
    prev = at;
  }
  CHECK(five.find("[Przykład 6]") == std::string::npos);
  CHECK(five.find("Zdanie 6.") == std::string::npos);
  CHECK(definition_prompt("kidult", contexts, 5) == five);

  CHECK_THROWS_AS(definition_prompt("kidult", contexts, 4), PreconditionError);
  CHECK_THROWS_AS(definition_prompt("kidult", numbered("Z", 2), 3), PreconditionError);

  MockClient echo;
  echo.set_default("  Dorosły o dziecięcych zainteresowaniach.\n");
  LlmOptions opts;
  opts.clock = fixed_clock;
  const auto d = generate_definition("kidult", contexts, 3, echo, opts);
  CHECK(d.text == "Dorosły o dziecięcych zainteresowaniach.");
  CHECK(d.shots == 3);
  CHECK(d.examples_used == numbered("Zdanie", 3));
  CHECK(d.model_name == "mock");
  CHECK(d.created_at == fixed_clock());

  MockClient blank;
  blank.set_default("   ");
  CHECK_THROWS_AS(generate_definition("kidult", contexts, 0, blank), LlmParseError);
  CHECK(blank.calls() == 3);

  MockClient none;  // no default: every call fails
  none.set_retries(0);
  CHECK_THROWS_AS(generate_definition("kidult", contexts, 0, none), LlmError);
  CHECK(none.calls() == 1);
}

TEST_CASE("retries recover from a transient failure") {
  int calls = 0;
  FunctionClient flaky([&](const std::string&) -> std::string {
    if (++calls < 3) throw LlmError("timeout");
    return "definicja";
  });
  CHECK(generate_definition("x", {}, 0, flaky).text == "definicja");
  CHECK(flaky.calls() == 3);
}

TEST_CASE("sentiment and domain parsing") {
  CHECK(parse_sentiment_response("NEGATYWNY") == Sentiment::negative);
  CHECK(parse_sentiment_response("  pozytywny\n") == Sentiment::positive);
  CHECK(parse_sentiment_response("NEUTRALNE.") == Sentiment::neutral);
  CHECK(parse_sentiment_response("neutral") == Sentiment::neutral);
  CHECK(parse_sentiment_response("Nie jest to POZYTYWNY wyraz. Odpowiedź: NEGATYWNY") == Sentiment::negative);
  CHECK_THROWS_AS(parse_sentiment_response("zupełnie inne"), LlmParseError);
  CHECK_THROWS_AS(parse_sentiment_response("nienegatywnyx"), LlmParseError);
  try {
    parse_sentiment_response("RADOSNY");
    FAIL("expected a parse error");
  } catch (const LlmParseError& e) {
    CHECK(e.raw() == "RADOSNY");
  }

  CHECK(parse_domain_response("TECHNOLOGIA I NAUKA") == Domain::technology_science);
  CHECK(parse_domain_response("Życie społeczne i relacje") == Domain::social_life_relationships);
  CHECK(parse_domain_response("ŻYCIE SPOŁECZNE I RELACJE") == Domain::social_life_relationships);
  CHECK(parse_domain_response("Ecology and Environment") == Domain::ecology_environment);
  CHECK(parse_domain_response("Może KULTURA I ROZRYWKA, ale raczej POLITYKA I SPOŁECZEŃSTWO") ==
        Domain::politics_society);
  CHECK_THROWS_AS(parse_domain_response("Sport"), LlmParseError);
  for (auto d : kAllDomains) CHECK(parse_domain_response(to_string(d)) == d);
  for (auto s : kAllSentiments) CHECK(parse_sentiment_response(to_string(s)) == s);
}

TEST_CASE("categorization setups") {
  const auto contexts = numbered("Kontekst", 6);
  Definition def;
  def.text = "Opis znaczenia.";

  const auto ex = categorization_prompt("hejt", CategorySetup::examples, contexts, std::nullopt,
                                        CategoryDimension::sentiment);
  CHECK(ex.find("[Przykład 5]\nKontekst 5.") != std::string::npos);
  CHECK(ex.find("Kontekst 6.") == std::string::npos);
  CHECK(ex.find("[Definicja]") == std::string::npos);
  CHECK(ex.find("POZYTYWNY, NEUTRALNE, NEGATYWNY") != std::string::npos);
  CHECK(ex.ends_with("[Kategoria]\n"));

  const auto dn = categorization_prompt("hejt", CategorySetup::definition, {}, def, CategoryDimension::domain);
  CHECK(dn.find("[Definicja]\nOpis znaczenia.") != std::string::npos);
  CHECK(dn.find("[Przykład") == std::string::npos);
  CHECK(dn.find("TECHNOLOGIA I NAUKA") != std::string::npos);

  const auto both = categorization_prompt("hejt", CategorySetup::both, contexts, def, CategoryDimension::domain);
  CHECK(both.find("[Definicja]") < both.find("[Przykład 1]"));

  CHECK_THROWS_AS(categorization_prompt("hejt", CategorySetup::both, contexts, std::nullopt,
                                        CategoryDimension::sentiment),
                  PreconditionError);
  CHECK_THROWS_AS(categorization_prompt("hejt", CategorySetup::examples, numbered("K", 4), std::nullopt,
                                        CategoryDimension::sentiment),
                  PreconditionError);

  MockClient neg;
  neg.set_default("NEGATYWNY");
  const auto s = categorize_sentiment("hejt", CategorySetup::examples, contexts, std::nullopt, neg);
  CHECK(s.value == Sentiment::negative);
  CHECK(s.setup == CategorySetup::examples);

  MockClient off;
  off.set_default("Nie wiem");
  try {
    categorize_domain("hejt", CategorySetup::examples, contexts, std::nullopt, off);
    FAIL("expected a parse error");
  } catch (const LlmParseError& e) {
    CHECK(e.raw() == "Nie wiem");
  }
  CHECK(off.calls() == 3);
}

TEST_CASE("pointwise judge") {
  const auto contexts = numbered("Przykład", 5);
  MockClient yes, lower, maybe;
  yes.set_default("CORRECT");
  lower.set_default("incorrect.");
  maybe.set_default("MAYBE");
  CHECK(judge_pointwise("x", "ref", "cand", contexts, yes).value == PointwiseVerdict::correct);
  CHECK(judge_pointwise("x", "ref", "cand", contexts, lower).value == PointwiseVerdict::incorrect);
  CHECK(parse_pointwise_response("Analiza... INCORRECT? Nie, ostatecznie: CORRECT") == PointwiseVerdict::correct);
  CHECK_THROWS_AS(judge_pointwise("x", "ref", "cand", contexts, maybe), LlmParseError);
  CHECK(maybe.calls() == 3);
  CHECK_THROWS_AS(judge_pointwise("x", "", "cand", contexts, yes), PreconditionError);
  CHECK_THROWS_AS(judge_pointwise("x", "ref", "cand", numbered("P", 4), yes), PreconditionError);

  std::string seen;
  FunctionClient spy([&](const std::string& p) {
    seen = p;
    return "CORRECT";
  });
  judge_pointwise("x", "wzorzec", "kandydat", contexts, spy);
  CHECK(section(seen, "Definicja wzorcowa") == "wzorzec");
  CHECK(section(seen, "Definicja oceniana") == "kandydat");
  CHECK(seen.find("[Przykład 5]") != std::string::npos);
}

TEST_CASE("pairwise judge order and de-shuffling") {
  std::optional<std::uint64_t> ab, ba;
  for (std::uint64_t s = 0; s < 64 && !(ab && ba); ++s) {
    (pairwise_a_first(s) ? ab : ba) = s;
  }
  REQUIRE(ab);
  REQUIRE(ba);
  const auto contexts = numbered("Przykład", 5);

  std::string seen;
  FunctionClient win([&](const std::string& p) {
    seen = p;
    return "WIN";
  });
  auto v = judge_pairwise("x", "DEF_A", "DEF_B", contexts, win, *ab);
  CHECK(v.a_first);
  CHECK(section(seen, "Definicja 1") == "DEF_A");
  CHECK(v.value == PairwiseValue::win);
  CHECK(v.de_shuffled == PairwiseValue::win);

  v = judge_pairwise("x", "DEF_A", "DEF_B", contexts, win, *ba);
  CHECK_FALSE(v.a_first);
  CHECK(section(seen, "Definicja 1") == "DEF_B");
  CHECK(v.value == PairwiseValue::win);
  CHECK(v.de_shuffled == PairwiseValue::lose);

  MockClient draw;
  draw.set_default("DRAW");
  CHECK(judge_pairwise("x", "A", "B", contexts, draw, *ab).de_shuffled == PairwiseValue::draw);
  CHECK(judge_pairwise("x", "A", "B", contexts, draw, *ba).de_shuffled == PairwiseValue::draw);

  for (auto p : {PairwiseValue::win, PairwiseValue::draw, PairwiseValue::lose}) {
    CHECK(swap_sides(swap_sides(p)) == p);
  }
  CHECK(judge_pairwise("x", "A", "B", contexts, win, 7).raw == "WIN");
  CHECK_THROWS_AS(judge_pairwise("x", "", "B", contexts, win, 1), PreconditionError);

  // byte-reproducible prompts for a fixed seed
  judge_pairwise("x", "A", "B", contexts, win, 11);
  const auto first = seen;
  judge_pairwise("x", "A", "B", contexts, win, 11);
  CHECK(seen == first);
}

TEST_CASE("position-biased judge is neutralized by shuffling") {
  const auto contexts = numbered("Przykład", 5);
  FunctionClient first_wins([](const std::string&) { return "WIN"; });
  const int n = 1000;
  int wins = 0;
  for (int s = 0; s < n; ++s) {
    if (judge_pairwise("x", "A", "B", contexts, first_wins, static_cast<std::uint64_t>(s)).de_shuffled ==
        PairwiseValue::win) {
      ++wins;
    }
  }
  const double rate = static_cast<double>(wins) / n;
  CHECK(std::abs(rate - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("definition evaluation counts") {
  std::vector<DefinitionEvalItem> data;
  for (int i = 0; i < 81; ++i) {
    data.push_back({"i" + std::to_string(i), "slowo" + std::to_string(i), "wzorzec", numbered("Zdanie", 5)});
  }
  MockClient gen;
  gen.set_default("definicja");
  // the judge accepts the first 71 words
  FunctionClient judge([](const std::string& p) {
    const auto word = section(p, "Słowo");
    const int idx = std::stoi(word.substr(5));
    return idx < 71 ? std::string("CORRECT") : std::string("INCORRECT");
  });
  DefinitionEvalOptions opts;
  opts.pairwise = false;
  const auto r = run_definition_evaluation(data, gen, judge, {5}, opts);
  REQUIRE(r.shots.size() == 1);
  CHECK(r.shots[0].items == 81);
  CHECK(r.shots[0].correct == 71);
  CHECK(r.shots[0].incorrect == 10);
  CHECK(r.shots[0].accuracy == doctest::Approx(71.0 / 81.0));
  CHECK(std::abs(r.shots[0].accuracy - 0.877) < 5e-4);
  CHECK(r.errors.empty());

  const auto empty = run_definition_evaluation({}, gen, judge, {0, 3, 5});
  CHECK(empty.shots.empty());
  CHECK(empty.errors.empty());
  CHECK(format_definition_eval_table(empty).find("Shots") != std::string::npos);
}

TEST_CASE("definition evaluation win rate and errors") {
  std::vector<DefinitionEvalItem> data;
  for (int i = 0; i < 10; ++i) {
    data.push_back({"i" + std::to_string(i), "w" + std::to_string(i), "wzorzec", numbered("Zdanie", 5)});
  }
  MockClient gen;
  gen.set_default("gen");
  // WIN/LOSE alternates by item, always in the canonical orientation of the generated definition
  FunctionClient judge([](const std::string& p) {
    const int idx = std::stoi(section(p, "Słowo").substr(1));
    const bool gen_first = section(p, "Definicja 1") == "gen";
    const bool gen_better = idx % 2 == 0;
    return std::string(gen_better == gen_first ? "WIN" : "LOSE");
  });
  DefinitionEvalOptions opts;
  opts.pointwise = false;
  opts.seed = 42;
  const auto r = run_definition_evaluation(data, gen, judge, {0, 3}, opts);
  REQUIRE(r.shots.size() == 2);
  for (const auto& s : r.shots) {
    CHECK(s.win == 5);
    CHECK(s.lose == 5);
    CHECK(s.win_rate == 0.5);
  }
  opts.parallelism = 1;
  CHECK(to_json(run_definition_evaluation(data, gen, judge, {0, 3}, opts)) == to_json(r));

  FunctionClient broken([](const std::string& p) -> std::string {
    if (section(p, "Słowo") == "w3") return "???";
    return "CORRECT";
  });
  DefinitionEvalOptions both;
  both.pairwise = false;
  const auto e = run_definition_evaluation(data, gen, broken, {0}, both);
  CHECK(e.shots[0].correct == 9);
  CHECK(e.shots[0].errors == 1);
  REQUIRE(e.errors.size() == 1);
  CHECK(e.errors[0].item_id == "i3");

  auto short_item = data;
  short_item[0].contexts.resize(4);
  CHECK_THROWS_AS(run_definition_evaluation(short_item, gen, judge, {0}), PreconditionError);
}

TEST_CASE("caching client reuses accepted responses") {
  MockClient inner;
  inner.set_default("POZYTYWNY");
  MemoryCompletionCache cache;
  CachingClient cached(inner, cache);
  const auto contexts = numbered("K", 5);
  categorize_sentiment("x", CategorySetup::examples, contexts, std::nullopt, cached);
  categorize_sentiment("x", CategorySetup::examples, contexts, std::nullopt, cached);
  CHECK(inner.calls() == 1);
  CHECK(cache.size() == 1);

  MockClient bad;
  bad.set_default("???");
  CachingClient cached_bad(bad, cache);
  CHECK_THROWS_AS(categorize_sentiment("y", CategorySetup::examples, contexts, std::nullopt, cached_bad),
                  LlmParseError);
  CHECK(cache.size() == 1);
}

TEST_CASE("definition dataset loading") {
  const auto tmp = std::filesystem::temp_directory_path() / "neolex_defs.jsonl";
  std::ofstream(tmp) << R"({"id":"a","neologism":"kidult","definition":"d","examples":["1","2","3","4","5"]})"
                     << "\n\n"
                     << R"({"base_form":"hejt","definition":"e","contexts":["x"]})" << "\n";
  const auto items = load_definition_dataset(tmp);
  REQUIRE(items.size() == 2);
  CHECK(items[0].id == "a");
  CHECK(items[0].contexts.size() == 5);
  CHECK(items[1].id == "2");
  CHECK(items[1].neologism == "hejt");
  std::ofstream(tmp) << R"([{"neologism":"a"}])";
  CHECK_THROWS_AS(load_definition_dataset(tmp), ParseError);
  std::filesystem::remove(tmp);
  CHECK_THROWS_AS(load_definition_dataset(tmp), NotFoundError);
}
