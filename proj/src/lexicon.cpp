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

#include "neolex/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace neolex {

std::string_view to_string(LexiconKind kind) noexcept {
  return kind == LexiconKind::dictionary ? "dictionary" : "frequency-list";
}

LexiconKind parse_lexicon_kind(std::string_view s) {
  if (s == "dictionary") return LexiconKind::dictionary;
  if (s == "frequency-list" || s == "frequency_list" || s == "freq") return LexiconKind::frequency_list;
  throw LexiconError("unknown lexicon kind: " + std::string(s));
}

// ---------------------------------------------------------------------------

DiacriticFoldTable::DiacriticFoldTable()
    : pairs_{{U'ą', U'a'}, {U'ć', U'c'}, {U'ę', U'e'}, {U'ł', U'l'}, {U'ń', U'n'}, {U'ó', U'o'},
             {U'ś', U's'}, {U'ź', U'z'}, {U'ż', U'z'}, {U'Ą', U'A'}, {U'Ć', U'C'}, {U'Ę', U'E'},
             {U'Ł', U'L'}, {U'Ń', U'N'}, {U'Ó', U'O'}, {U'Ś', U'S'}, {U'Ź', U'Z'}, {U'Ż', U'Z'}} {}

DiacriticFoldTable::DiacriticFoldTable(std::map<char32_t, char32_t> pairs) : pairs_(std::move(pairs)) {
  // Idempotence requires that no target is itself folded further.
  for (auto& [from, to] : pairs_) {
    char32_t t = to;
    for (std::size_t guard = 0; pairs_.count(t) && guard < pairs_.size(); ++guard) t = pairs_.at(t);
    to = t;
  }
}

char32_t DiacriticFoldTable::fold(char32_t cp) const noexcept {
  const auto it = pairs_.find(cp);
  return it == pairs_.end() ? cp : it->second;
}

std::u32string DiacriticFoldTable::fold(std::u32string_view word) const {
  std::u32string out(word);
  for (auto& cp : out) cp = fold(cp);
  return out;
}

std::string DiacriticFoldTable::fold(std::string_view word) const {
  return u32_to_utf8(fold(std::u32string_view(utf8_to_u32(word))));
}

// ---------------------------------------------------------------------------

ReferenceLexicon::ReferenceLexicon(std::string name, LexiconKind kind,
                                   std::unordered_map<std::string, std::uint64_t> entries)
    : name_(std::move(name)), kind_(kind) {
  if (entries.empty()) throw LexiconError("lexicon '" + name_ + "' has no entries");
  for (auto& [form, count] : entries) {
    entries_[normalize_form(form)] += count;
  }
  static const DiacriticFoldTable polish;
  folded_.reserve(entries_.size());
  for (const auto& [form, _] : entries_) folded_.insert(polish.fold(std::string_view(form)));
}

ReferenceLexicon ReferenceLexicon::from_words(std::string name, LexiconKind kind,
                                              const std::vector<std::string>& words) {
  std::unordered_map<std::string, std::uint64_t> entries;
  for (const auto& w : words) {
    const auto t = trim(w);
    if (!t.empty()) entries[std::string(t)] += 1;
  }
  return ReferenceLexicon(std::move(name), kind, std::move(entries));
}

bool ReferenceLexicon::contains(std::string_view word) const {
  return entries_.count(normalize_form(word)) != 0;
}

std::uint64_t ReferenceLexicon::count(std::string_view word) const {
  const auto it = entries_.find(normalize_form(word));
  return it == entries_.end() ? 0 : it->second;
}

ReferenceLexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError("cannot read lexicon file: " + path.string());
  if (name.empty()) name = path.stem().string();

  std::unordered_map<std::string, std::uint64_t> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!is_valid_utf8(t)) {
      throw LexiconError(path.string() + ":" + std::to_string(line_no) + ": invalid UTF-8");
    }
    if (kind == LexiconKind::dictionary) {
      entries[normalize_form(t)] += 1;
      continue;
    }
    const auto tab = t.find('\t');
    if (tab == std::string_view::npos) {
      throw LexiconError(path.string() + ":" + std::to_string(line_no) + ": expected form<TAB>count");
    }
    const auto form = trim(t.substr(0, tab));
    const auto count_str = trim(t.substr(tab + 1));
    if (form.empty() || count_str.empty() ||
        !std::all_of(count_str.begin(), count_str.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw LexiconError(path.string() + ":" + std::to_string(line_no) + ": malformed frequency entry");
    }
    std::uint64_t count = 0;
    try {
      count = std::stoull(std::string(count_str));
    } catch (const std::exception&) {
      throw LexiconError(path.string() + ":" + std::to_string(line_no) + ": count out of range");
    }
    entries[normalize_form(form)] += count;
  }
  if (entries.empty()) throw LexiconError("lexicon file has no entries: " + path.string());
  return ReferenceLexicon(std::move(name), kind, std::move(entries));
}

// ---------------------------------------------------------------------------

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t max_edits) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > max_edits) return max_edits + 1;
  thread_local std::vector<std::size_t> prev, cur;
  prev.resize(b.size() + 1);
  cur.resize(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > max_edits) return max_edits + 1;
    std::swap(prev, cur);
  }
  return std::min(prev[b.size()], max_edits + 1);
}

namespace {
thread_local std::size_t g_last_inspected = 0;
}

std::size_t EditDistanceIndex::last_query_inspected() noexcept { return g_last_inspected; }

EditDistanceIndex::EditDistanceIndex(const ReferenceLexicon& lexicon) : source_(lexicon.name()) {
  for (const auto& [form, _] : lexicon.entries()) {
    auto u = utf8_to_u32(form);
    buckets_[u.size()].push_back(std::move(u));
    ++total_;
  }
  for (auto& [_, forms] : buckets_) std::sort(forms.begin(), forms.end());
}

std::optional<NearestForm> EditDistanceIndex::search(const std::u32string& word, std::size_t ceil_num,
                                                     std::size_t ceil_den) const {
  g_last_inspected = 0;
  const std::size_t len = word.size();

  // Visit buckets in order of increasing length gap.
  std::vector<std::size_t> lengths;
  lengths.reserve(buckets_.size());
  for (const auto& [n, _] : buckets_) lengths.push_back(n);
  std::stable_sort(lengths.begin(), lengths.end(), [len](std::size_t x, std::size_t y) {
    const auto gx = x > len ? x - len : len - x;
    const auto gy = y > len ? y - len : len - y;
    return gx < gy;
  });

  // Running bound as the fraction best_num / best_den (inclusive).
  std::size_t best_num = ceil_num, best_den = ceil_den;
  bool found = false;
  const std::u32string* best_form = nullptr;

  for (std::size_t n : lengths) {
    const std::size_t gap = n > len ? n - len : len - n;
    const std::size_t m = std::max(n, len);
    // gap / m is a lower bound on the distance to every form in the bucket.
    if (m > 0 && gap * best_den > best_num * m) continue;
    const std::size_t max_edits = m == 0 ? 0 : (best_num * m) / best_den;
    for (const auto& form : buckets_.at(n)) {
      ++g_last_inspected;
      const std::size_t d = levenshtein_bounded(word, form, max_edits);
      if (d > max_edits) continue;
      const std::size_t lhs = d * best_den;
      const std::size_t rhs = best_num * m;
      const bool better = lhs < rhs || (lhs == rhs && (!found || form < *best_form));
      if (!better) continue;
      if (m == 0) {
        best_num = 0;
        best_den = 1;
      } else {
        best_num = d;
        best_den = m;
      }
      best_form = &form;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  NearestForm out;
  out.edits = best_num;
  out.max_length = best_den;
  out.distance = best_den == 0 ? 0.0 : static_cast<double>(best_num) / static_cast<double>(best_den);
  if (best_num == 0) out.max_length = std::max(len, best_form->size());
  out.form = u32_to_utf8(*best_form);
  return out;
}

NearestForm EditDistanceIndex::nearest(std::string_view word) const {
  if (empty()) throw LexiconError("edit-distance index is empty");
  auto r = search(utf8_to_u32(normalize_form(word)), 1, 1);
  // Every form is within distance 1, so the unbounded search always finds one.
  return *r;
}

std::optional<NearestForm> EditDistanceIndex::nearest_within(std::string_view word, double ceiling) const {
  if (empty()) throw LexiconError("edit-distance index is empty");
  if (ceiling < 0.0) return std::nullopt;
  if (ceiling >= 1.0) return nearest(word);
  // Represent the ceiling exactly enough for code-point lengths: scale to a
  // large denominator and round down.
  constexpr std::size_t kDen = 1'000'000;
  const auto num = static_cast<std::size_t>(std::floor(ceiling * kDen + 1e-9));
  return search(utf8_to_u32(normalize_form(word)), num, kDen);
}

// ---------------------------------------------------------------------------

bool contains(const ReferenceLexicon& lexicon, std::string_view word) { return lexicon.contains(word); }

NearestForm min_normalized_edit_distance(const EditDistanceIndex& index, std::string_view word) {
  return index.nearest(word);
}

bool is_diacritic_variant(const ReferenceLexicon& lexicon, const DiacriticFoldTable& fold, std::string_view word) {
  const std::string form = normalize_form(word);
  if (form.empty() || lexicon.contains_normalized(form)) return false;
  static const DiacriticFoldTable polish;
  const std::string folded = fold.fold(std::string_view(form));
  if (fold == polish) return lexicon.has_folded(folded);
  return std::any_of(lexicon.entries().begin(), lexicon.entries().end(), [&](const auto& e) {
    return fold.fold(std::string_view(e.first)) == folded;
  });
}

bool is_adjacent_swap_variant(const ReferenceLexicon& lexicon, std::string_view word) {
  const std::string form = normalize_form(word);
  if (lexicon.contains_normalized(form)) return false;
  std::u32string u = utf8_to_u32(form);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i] == u[i + 1]) continue;
    std::swap(u[i], u[i + 1]);
    const bool hit = lexicon.contains_normalized(u32_to_utf8(u));
    std::swap(u[i], u[i + 1]);
    if (hit) return true;
  }
  return false;
}

}  // namespace neolex
