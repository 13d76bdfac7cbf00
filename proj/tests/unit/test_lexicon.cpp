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
#include <random>

#include "neolex/lexicon.hpp"
#include "support/oracles.hpp"

using namespace neolex;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("neolex_test_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

ReferenceLexicon dict(std::vector<std::string> words) {
  return ReferenceLexicon::from_words("test", LexiconKind::dictionary, words);
}

}  // namespace

TEST_CASE("load_lexicon: dictionary duplicates merge") {
  const auto lex = load_lexicon(write_temp("dup.txt", "kot\nkot\n"), LexiconKind::dictionary);
  CHECK(lex.size() == 1);
  CHECK(lex.contains("kot"));
  CHECK(lex.count("kot") == 2);
}

TEST_CASE("load_lexicon: frequency list") {
  const auto lex = load_lexicon(write_temp("freq.tsv", "dom\t150\npies\t3\n"), LexiconKind::frequency_list);
  CHECK(lex.size() == 2);
  CHECK(lex.count("dom") == 150);
  CHECK(lex.count("pies") == 3);
}

TEST_CASE("load_lexicon: case policy and comments") {
  const auto lex = load_lexicon(write_temp("case.txt", "# comment\nŻółw\n"), LexiconKind::dictionary);
  CHECK(lex.size() == 1);
  CHECK(lex.entries().count("żółw") == 1);
}

TEST_CASE("load_lexicon: errors") {
  CHECK_THROWS_AS(load_lexicon("/nonexistent/neolex.txt", LexiconKind::dictionary), LexiconError);
  CHECK_THROWS_AS(load_lexicon(write_temp("empty.txt", "# only comment\n\n"), LexiconKind::dictionary),
                  LexiconError);
  try {
    load_lexicon(write_temp("bad.tsv", "dom\t1\npies 3\n"), LexiconKind::frequency_list);
    FAIL("expected LexiconError");
  } catch (const LexiconError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_lexicon(write_temp("neg.tsv", "dom\t-1\n"), LexiconKind::frequency_list), LexiconError);
}

TEST_CASE("contains folds case") {
  const auto lex = dict({"kot"});
  CHECK(contains(lex, "kot"));
  CHECK(contains(lex, "KOT"));
  CHECK_FALSE(contains(lex, "kotek"));
}

TEST_CASE("min_normalized_edit_distance examples") {
  const auto lex = dict({"kot"});
  const EditDistanceIndex index(lex);
  const std::vector<std::u32string> oracle_dict{U"kot"};

  auto r = min_normalized_edit_distance(index, "kot");
  CHECK(r.distance == 0.0);
  CHECK(r.form == "kot");

  r = min_normalized_edit_distance(index, "xq");
  CHECK(r.distance == testing::naive_min_normalized(U"xq", oracle_dict));
  CHECK(r.distance == 1.0);

  r = min_normalized_edit_distance(index, "kotka");
  CHECK(r.distance == testing::naive_min_normalized(U"kotka", oracle_dict));
  CHECK(r.distance == 2.0 / 5.0);
  CHECK(r.form == "kot");
}

TEST_CASE("nearest_within only inspects buckets within the length gap") {
  std::vector<std::string> words;
  for (int len = 1; len <= 20; ++len) words.push_back(std::string(static_cast<std::size_t>(len), 'a'));
  words.push_back("bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb");
  const auto lex = dict(words);
  const EditDistanceIndex index(lex);
  const auto r = index.nearest_within("cccc", 0.5);
  CHECK_FALSE(r.has_value());
  // lengths 2..8 can reach 0.5 for a 4-letter query; never the 40-letter form
  CHECK(EditDistanceIndex::last_query_inspected() <= 7);
  const auto hit = index.nearest_within("aaab", 0.5);
  REQUIRE(hit.has_value());
  CHECK(hit->form == "aaa");  // ties with "aaaa"; smaller form wins
  CHECK(hit->distance == 0.25);
}

TEST_CASE("edit distance index matches the full-scan oracle on random instances") {
  std::mt19937 rng(7);
  const std::u32string alphabet = U"abcdeąęłóż";
  auto random_word = [&](std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_d(1, max_len);
    std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
    std::u32string w(len_d(rng), U'a');
    for (auto& c : w) c = alphabet[ch(rng)];
    return w;
  };
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> size_d(1, 200);
    std::vector<std::u32string> forms;
    std::vector<std::string> utf8;
    const int n = size_d(rng);
    for (int i = 0; i < n; ++i) {
      forms.push_back(random_word(12));
      utf8.push_back(u32_to_utf8(forms.back()));
    }
    const auto lex = dict(utf8);
    const EditDistanceIndex index(lex);
    for (int q = 0; q < 10; ++q) {
      const auto w = random_word(14);
      const auto got = index.nearest(u32_to_utf8(w));
      CHECK(got.distance == testing::naive_min_normalized(w, forms));
      CHECK((got.distance == 0.0) == lex.contains(u32_to_utf8(w)));
      const auto within = index.nearest_within(u32_to_utf8(w), 0.5);
      CHECK(within.has_value() == (got.distance <= 0.5));
    }
  }
}

TEST_CASE("diacritic folding") {
  const DiacriticFoldTable fold;
  CHECK(fold.fold(std::string_view("żółć")) == "zolc");
  const std::string once = fold.fold(std::string_view("Łódź źdźbło"));
  CHECK(fold.fold(std::string_view(once)) == once);

  const auto lex = dict({"żółw"});
  CHECK(is_diacritic_variant(lex, fold, "zolw"));
  CHECK_FALSE(is_diacritic_variant(lex, fold, "żółw"));
  CHECK_FALSE(is_diacritic_variant(lex, fold, "zelw"));
  CHECK(is_diacritic_variant(lex, fold, "ZOLW"));

  const DiacriticFoldTable custom(std::map<char32_t, char32_t>{{U'ł', U'l'}});
  CHECK(is_diacritic_variant(dict({"łata"}), custom, "lata"));
  CHECK_FALSE(is_diacritic_variant(dict({"żółw"}), custom, "zolw"));
}

TEST_CASE("adjacent swap variants") {
  const auto lex = dict({"okno"});
  CHECK(is_adjacent_swap_variant(lex, "onko"));
  CHECK_FALSE(is_adjacent_swap_variant(lex, "okno"));
  CHECK_FALSE(is_adjacent_swap_variant(lex, "nkoo"));
}

TEST_CASE("swap variants are within two edits") {
  std::mt19937 rng(11);
  const std::u32string alphabet = U"abcdoknż";
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> len_d(2, 8), ch(0, alphabet.size() - 1);
    std::u32string w(len_d(rng), U'a');
    for (auto& c : w) c = alphabet[ch(rng)];
    std::u32string entry = w;
    std::uniform_int_distribution<std::size_t> pos(0, w.size() - 2);
    const auto p = pos(rng);
    std::swap(entry[p], entry[p + 1]);
    const auto lex = dict({u32_to_utf8(entry)});
    const EditDistanceIndex index(lex);
    const std::string word = u32_to_utf8(w);
    if (is_adjacent_swap_variant(lex, word)) {
      CHECK(min_normalized_edit_distance(index, word).distance <= 2.0 / static_cast<double>(w.size()));
    }
  }
}
