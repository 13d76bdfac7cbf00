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

#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "neolex/ingest.hpp"

namespace neolex {

namespace {

// Training samples for the built-in trigram profiles. Plain running prose in
// each language; the classifier only needs character statistics.
constexpr std::string_view kPolishSample =
    "Wczoraj wieczorem poszliśmy całą rodziną na długi spacer po parku, a potem zjedliśmy kolację u "
    "babci. Pogoda była piękna, chociaż rano padał deszcz i wiał silny wiatr. W mieście coraz więcej "
    "ludzi jeździ rowerem do pracy, ponieważ korki na ulicach są bardzo duże. Rząd zapowiedział nowe "
    "przepisy dotyczące podatków, które mają wejść w życie od przyszłego roku. Eksperci twierdzą, że "
    "zmiany będą korzystne dla małych firm, ale przedsiębiorcy obawiają się dodatkowych obowiązków. "
    "Szkoła podstawowa w naszej dzielnicy otrzymała nowe komputery i tablice interaktywne. Dzieci "
    "uczą się programowania, matematyki i języka polskiego, a nauczyciele przygotowują ciekawe lekcje. "
    "W sobotę odbędzie się koncert muzyki klasycznej w filharmonii, na który zaprasza dyrektor "
    "instytucji. Bilety można kupić przez internet albo w kasie przed wydarzeniem. Lekarze przypominają, "
    "że zdrowe odżywianie i codzienna aktywność fizyczna chronią przed wieloma chorobami. Warto jeść "
    "warzywa, owoce oraz pełnoziarniste pieczywo, a także pić dużo wody. Na wsi rolnicy zbierają "
    "zboże i przygotowują pola do zimy. Ceny żywności w sklepach rosną, więc wiele rodzin szuka "
    "tańszych produktów i promocji. Piłkarze reprezentacji wygrali ważny mecz i awansowali do "
    "kolejnego etapu turnieju. Kibice świętowali zwycięstwo na ulicach do późnej nocy. Młodzi ludzie "
    "coraz częściej korzystają z mediów społecznościowych, gdzie dzielą się zdjęciami i opiniami. "
    "Naukowcy z polskiej uczelni opracowali nową metodę oczyszczania wody, która może pomóc "
    "mieszkańcom małych miejscowości. Samorząd planuje remont dróg i budowę ścieżek rowerowych. "
    "Jesienią liście żółkną i spadają z drzew, a dni stają się krótsze. Wieczorem czytam książki, "
    "słucham muzyki albo oglądam filmy z przyjaciółmi. Mój brat mieszka w Krakowie i pracuje jako "
    "inżynier w dużej firmie budowlanej. Często rozmawiamy przez telefon o tym, co dzieje się w kraju "
    "i na świecie. Ta sprawa jest dla nas bardzo ważna, dlatego musimy się nad nią zastanowić.";

constexpr std::string_view kEnglishSample =
    "Yesterday evening the whole family went for a long walk in the park, and afterwards we had "
    "dinner at my grandmother's house. The weather was lovely, although it rained in the morning and "
    "a strong wind was blowing. More and more people in the city ride their bikes to work because "
    "the traffic on the streets is very heavy. The government announced new rules on taxes that will "
    "take effect next year. Experts say the changes will benefit small businesses, but owners worry "
    "about additional paperwork. The primary school in our neighbourhood received new computers and "
    "interactive whiteboards. Children are learning programming, mathematics and reading, while the "
    "teachers prepare interesting lessons. On Saturday there will be a concert of classical music at "
    "the philharmonic hall, and the director invites everyone. Tickets can be bought online or at the "
    "box office before the event. Doctors remind us that healthy eating and daily physical activity "
    "protect against many diseases. It is worth eating vegetables, fruit and wholegrain bread, and "
    "drinking plenty of water. In the countryside farmers are harvesting grain and preparing the "
    "fields for winter. Food prices in the shops keep rising, so many families look for cheaper "
    "products and special offers. The national football team won an important match and moved on to "
    "the next stage of the tournament. Fans celebrated the victory in the streets until late at night. "
    "Young people increasingly use social media, where they share photos and opinions. Scientists at "
    "a university have developed a new method of cleaning water that could help residents of small "
    "towns. The council plans to repair roads and build new cycle paths. In autumn the leaves turn "
    "yellow and fall from the trees, and the days become shorter. In the evening I read books, listen "
    "to music or watch films with my friends. My brother lives in the north and works as an engineer "
    "for a large construction company. We often talk on the phone about what is happening in the "
    "country and around the world. This matter is very important to us, so we have to think it over.";

constexpr std::string_view kGermanSample =
    "Gestern Abend ist die ganze Familie lange im Park spazieren gegangen, und danach haben wir bei "
    "meiner Großmutter zu Abend gegessen. Das Wetter war schön, obwohl es am Morgen geregnet hat und "
    "ein starker Wind wehte. Immer mehr Menschen in der Stadt fahren mit dem Fahrrad zur Arbeit, weil "
    "der Verkehr auf den Straßen sehr dicht ist. Die Regierung hat neue Regeln für Steuern angekündigt, "
    "die im nächsten Jahr in Kraft treten sollen. Experten sagen, dass die Änderungen kleinen Firmen "
    "helfen werden, aber die Unternehmer fürchten zusätzliche Pflichten. Die Grundschule in unserem "
    "Viertel hat neue Computer und interaktive Tafeln bekommen. Die Kinder lernen Programmieren, "
    "Mathematik und Lesen, und die Lehrer bereiten spannende Stunden vor. Am Samstag findet in der "
    "Philharmonie ein Konzert mit klassischer Musik statt. Eintrittskarten kann man im Internet oder "
    "an der Kasse kaufen. Ärzte erinnern daran, dass gesunde Ernährung und tägliche Bewegung vor "
    "vielen Krankheiten schützen. Es lohnt sich, Gemüse, Obst und Vollkornbrot zu essen und viel "
    "Wasser zu trinken. Auf dem Land ernten die Bauern das Getreide und bereiten die Felder auf den "
    "Winter vor. Die Preise für Lebensmittel steigen, deshalb suchen viele Familien nach günstigeren "
    "Produkten. Die Nationalmannschaft hat ein wichtiges Spiel gewonnen und ist in die nächste Runde "
    "des Turniers eingezogen. Die Fans feierten den Sieg bis spät in die Nacht.";

struct Profile {
  std::string code;
  std::unordered_map<std::u32string, double> log_prob;
  double unseen_log_prob = 0.0;
};

std::vector<std::u32string> trigrams(std::string_view text) {
  std::u32string cleaned = U" ";
  for (char32_t cp : utf8_to_u32(to_lower(text))) {
    if (is_letter(cp)) {
      cleaned.push_back(cp);
    } else if (cleaned.back() != U' ') {
      cleaned.push_back(U' ');
    }
  }
  if (cleaned.back() != U' ') cleaned.push_back(U' ');
  std::vector<std::u32string> out;
  for (std::size_t i = 0; i + 3 <= cleaned.size(); ++i) {
    auto g = cleaned.substr(i, 3);
    if (g == U"   ") continue;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Profile> build_profiles() {
  const std::vector<std::pair<std::string, std::string_view>> samples = {
      {"pl", kPolishSample}, {"en", kEnglishSample}, {"de", kGermanSample}};

  std::vector<std::unordered_map<std::u32string, double>> counts(samples.size());
  std::unordered_map<std::u32string, int> vocabulary;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (auto& g : trigrams(samples[i].second)) {
      counts[i][g] += 1.0;
      vocabulary[g] = 1;
    }
  }
  constexpr double kAlpha = 0.5;
  // Reserve probability mass for trigrams outside the joint vocabulary.
  const double vocab = static_cast<double>(vocabulary.size()) * 2.0;
  std::vector<Profile> profiles;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double total = 0.0;
    for (const auto& [_, c] : counts[i]) total += c;
    Profile p;
    p.code = samples[i].first;
    const double denom = total + kAlpha * vocab;
    for (const auto& [g, c] : counts[i]) p.log_prob[g] = std::log((c + kAlpha) / denom);
    p.unseen_log_prob = std::log(kAlpha / denom);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

const std::vector<Profile>& profiles() {
  static const std::vector<Profile> p = build_profiles();
  return p;
}

}  // namespace

std::vector<std::string> supported_languages() {
  std::vector<std::string> out;
  for (const auto& p : profiles()) out.push_back(p.code);
  return out;
}

LanguageGuess detect_language(std::string_view text) {
  const auto t = trim(text);
  if (utf8_length(t) < kMinLanguageDetectionChars) return {};
  const auto grams = trigrams(t);
  if (grams.empty()) return {};

  const auto& ps = profiles();
  std::vector<double> scores(ps.size(), 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (const auto& g : grams) {
      const auto it = ps[i].log_prob.find(g);
      scores[i] += it == ps[i].log_prob.end() ? ps[i].unseen_log_prob : it->second;
    }
  }
  // Posterior under a uniform prior.
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  double z = 0.0;
  for (double s : scores) z += std::exp(s - scores[best]);
  return {ps[best].code, 1.0 / z};
}

}  // namespace neolex
