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

// Seeded generator of a small Polish news-like corpus with planted
// neologisms and families of planted noise.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "neolex/ingest.hpp"
#include "neolex/text.hpp"

namespace neolex::testing {

struct SyntheticCorpus {
  std::vector<Document> documents;
  std::vector<std::string> dictionary;  // Polish word forms
  std::vector<std::string> english;     // English word forms
  std::vector<std::string> planted;     // gold neologisms
  std::map<std::string, std::vector<std::string>> noise;  // family -> forms as written
  /// Forms that pass every pure filter and are left to the LLM stage.
  std::set<std::string> llm_noise;
};

namespace synthetic_detail {

inline const std::vector<std::string>& polish_templates() {
  static const std::vector<std::string> t = {
      "Wczoraj w pracy wszyscy rozmawiali o tym, jak bardzo {W} zmienia nasze codzienne życie.",
      "Moja siostra twierdzi, że {W} to najciekawsze zjawisko ostatnich miesięcy w mieście.",
      "Dziennikarze coraz częściej piszą o tym, że {W} pojawia się w rozmowach młodych ludzi.",
      "Na spotkaniu z mieszkańcami radny powiedział, że {W} budzi wiele emocji i pytań.",
      "W nowym artykule autorka wyjaśnia, dlaczego {W} stało się tak popularne w sieci.",
      "Nauczyciele zauważyli, że uczniowie używają słowa {W} niemal na każdej przerwie.",
      "Podczas wieczornej audycji prowadzący zapytał słuchaczy, co sądzą o tym, czym jest {W} dzisiaj.",
      "Według ekspertów {W} będzie jednym z ważnych tematów w przyszłym roku.",
      "Mój sąsiad opowiadał długo o tym, że {W} przydarzyło się także jego rodzinie.",
      "Wielu czytelników napisało do redakcji, ponieważ {W} wywołało gorącą dyskusję.",
  };
  return t;
}

inline const std::vector<std::string>& polish_filler() {
  static const std::vector<std::string> t = {
      "Pogoda w weekend ma być słoneczna, chociaż rano mogą pojawić się mgły.",
      "Władze miasta zapowiedziały remont głównej ulicy na początku wiosny.",
      "W sobotę odbędzie się koncert muzyki klasycznej w starym kościele.",
      "Ceny żywności w sklepach wzrosły w ostatnim kwartale o kilka procent.",
      "Mieszkańcy osiedla skarżą się na hałas dochodzący z pobliskiej budowy.",
      "Biblioteka miejska przygotowała dla dzieci zajęcia w czasie ferii.",
      "Piłkarze lokalnego klubu wygrali wczoraj ważny mecz na wyjeździe.",
      "Nowa linia autobusowa połączy dworzec z dzielnicą przemysłową.",
  };
  return t;
}

inline const std::vector<std::string>& english_templates() {
  static const std::vector<std::string> t = {
      "The {W} was discussed again by the government during the long meeting last week.",
      "Many people think that the {W} will change the way we work in the city.",
      "Everyone at the office was talking about the {W} and what it means for us.",
  };
  return t;
}

/// Letters-only lower-cased words of a sentence.
inline std::vector<std::string> words_of(const std::string& sentence) {
  std::vector<std::string> out;
  std::string cur;
  bool in_slot = false;
  for (char32_t cp : utf8_to_u32(sentence)) {
    if (cp == U'{' || cp == U'}') {
      in_slot = cp == U'{';
      continue;
    }
    if (in_slot) continue;
    if (is_letter(cp)) {
      cur += u32_to_utf8(std::u32string(1, cp));
    } else if (!cur.empty()) {
      out.push_back(to_lower(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(to_lower(cur));
  return out;
}

inline std::string fill(const std::string& tpl, const std::string& word) {
  const auto pos = tpl.find("{W}");
  return tpl.substr(0, pos) + word + tpl.substr(pos + 3);
}

}  // namespace synthetic_detail

/// 200 documents over 12 hosts and 60 days by default.
inline SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, std::size_t documents = 200) {
  using namespace synthetic_detail;
  SyntheticCorpus c;
  std::mt19937_64 rng(seed);

  c.planted = {"hejtownik",  "zoomerka",    "fejkowiec", "smartfoniarz", "cringowy",    "memiarz",  "scrollowanie",
               "lajkownia",  "randkomat",   "plandemia", "szurostwo",    "foliarstwo",  "bekowy",   "kryptobro",
               "jutuberka",  "podkastowiec", "strimerka", "bombelek",    "ghostingowy", "dzbanizm"};
  c.noise["too short"] = {"xd", "zw", "kk"};
  c.noise["digits"] = {"covid19", "b2b", "4fun", "mp3"};
  c.noise["rare"] = {"blogaskowy", "wykopowicz", "pasztetowiec", "grzybiarstwo", "kotlecik"};
  c.noise["uppercase only"] = {"ZUS", "PKP", "NFZ", "UOKIK"};
  c.noise["proper names"] = {"Kowalczewski", "Zbąszynek", "Brzęczyszczykiewicz"};
  c.noise["diacritic variants"] = {"wiadomosc", "ksiazka", "zrodlo"};
  c.noise["adjacent swaps"] = {"telefno", "kompuetr", "samohcód"};
  c.noise["triple repeats"] = {"wowww", "jeeejku", "booosko"};
  c.noise["english"] = {"lockdown", "deadline", "cashback"};
  c.noise["plausible non-words"] = {"gwyrdol", "zmrokuch", "tralabuk", "pyrdzik", "skwarnol"};
  c.llm_noise = {"gwyrdol", "zmrokuch", "tralabuk", "pyrdzik", "skwarnol"};

  std::set<std::string> dict;
  for (const auto& s : polish_templates()) for (const auto& w : words_of(s)) dict.insert(w);
  for (const auto& s : polish_filler()) for (const auto& w : words_of(s)) dict.insert(w);
  for (const auto& w : {"wiadomość", "książka", "źródło", "telefon", "komputer", "samochód", "słowa"}) {
    dict.insert(w);
  }
  std::set<std::string> eng;
  for (const auto& s : english_templates()) for (const auto& w : words_of(s)) eng.insert(w);
  for (const auto& w : c.noise["english"]) eng.insert(w);
  c.dictionary.assign(dict.begin(), dict.end());
  c.english.assign(eng.begin(), eng.end());

  // word -> number of documents it is placed in
  std::vector<std::pair<std::string, std::size_t>> placements;
  for (const auto& w : c.planted) placements.emplace_back(w, 8);
  for (const auto& [family, forms] : c.noise) {
    for (const auto& w : forms) placements.emplace_back(w, family == "rare" ? 2 : 7);
  }

  std::vector<std::vector<std::string>> sentences(documents);
  std::vector<std::size_t> doc_index(documents);
  for (std::size_t i = 0; i < documents; ++i) doc_index[i] = i;
  for (const auto& [word, count] : placements) {
    std::shuffle(doc_index.begin(), doc_index.end(), rng);
    const bool is_english = std::find(c.noise["english"].begin(), c.noise["english"].end(), word) !=
                            c.noise["english"].end();
    auto tpls = is_english ? english_templates() : polish_templates();
    std::shuffle(tpls.begin(), tpls.end(), rng);
    for (std::size_t k = 0; k < count; ++k) {
      sentences[doc_index[k]].push_back(fill(tpls[k % tpls.size()], word));
    }
  }

  const std::vector<std::string> hosts = {"wiadomosci.example.pl", "portal.example.pl", "gazeta.example.pl",
                                          "radio.example.pl",      "tygodnik.example.pl", "miasto.example.pl",
                                          "news.example.com.pl",   "blog.example.pl",   "info.example.pl",
                                          "kurier.example.pl",     "echo.example.pl",   "glos.example.pl"};
  const auto start = parse_timestamp("2024-11-01T06:00:00Z");
  for (std::size_t i = 0; i < documents; ++i) {
    auto& ss = sentences[i];
    ss.push_back(polish_filler()[rng() % polish_filler().size()]);
    ss.push_back(polish_filler()[rng() % polish_filler().size()]);
    std::shuffle(ss.begin(), ss.end(), rng);
    std::string text;
    for (const auto& s : ss) text += (text.empty() ? "" : " ") + s;
    const auto url = "https://" + hosts[rng() % hosts.size()] + "/artykul/" + std::to_string(i);
    const auto t = start + std::chrono::days(rng() % 60) + std::chrono::hours(rng() % 12);
    c.documents.push_back(make_document(url, text, t));
  }
  return c;
}

}  // namespace neolex::testing
