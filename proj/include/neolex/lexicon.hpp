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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "neolex/text.hpp"

namespace neolex {

class LexiconError : public Error {
 public:
  using Error::Error;
};

enum class LexiconKind { dictionary, frequency_list };

std::string_view to_string(LexiconKind kind) noexcept;
LexiconKind parse_lexicon_kind(std::string_view s);

/// Maps diacritic characters to their base letter. Default: the Polish set.
class DiacriticFoldTable {
 public:
  DiacriticFoldTable();  // Polish: ą ć ę ł ń ó ś ź ż (and upper-case forms)
  explicit DiacriticFoldTable(std::map<char32_t, char32_t> pairs);

  char32_t fold(char32_t cp) const noexcept;
  std::u32string fold(std::u32string_view word) const;
  std::string fold(std::string_view word) const;

  const std::map<char32_t, char32_t>& pairs() const noexcept { return pairs_; }
  bool operator==(const DiacriticFoldTable&) const = default;

 private:
  std::map<char32_t, char32_t> pairs_;
};

/// Immutable store of normalized (NFC, lower-case) word forms with counts.
class ReferenceLexicon {
 public:
  ReferenceLexicon(std::string name, LexiconKind kind, std::unordered_map<std::string, std::uint64_t> entries);

  /// Builds a lexicon from raw forms; each form is normalized and counted once.
  static ReferenceLexicon from_words(std::string name, LexiconKind kind, const std::vector<std::string>& words);

  const std::string& name() const noexcept { return name_; }
  LexiconKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::unordered_map<std::string, std::uint64_t>& entries() const noexcept { return entries_; }

  bool contains(std::string_view word) const;
  /// Lookup of a form that is already normalized.
  bool contains_normalized(std::string_view form) const noexcept { return entries_.count(std::string(form)) != 0; }
  std::uint64_t count(std::string_view word) const;

  /// Whether some entry folds to the same string under the default Polish table.
  bool has_folded(std::string_view folded_form) const noexcept { return folded_.count(std::string(folded_form)) != 0; }

 private:
  std::string name_;
  LexiconKind kind_;
  std::unordered_map<std::string, std::uint64_t> entries_;
  std::unordered_set<std::string> folded_;
};

/// Reads a dictionary (one form per line, '#' comments) or a frequency list
/// (form<TAB>count). Duplicate forms merge by summing counts.
ReferenceLexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind, std::string name = {});

struct NearestForm {
  double distance = 1.0;       // edits / max(len(word), len(form))
  std::size_t edits = 0;
  std::size_t max_length = 0;  // denominator of `distance`
  std::string form;
};

/// Length-bucketed index answering exact minimum normalized Levenshtein queries.
class EditDistanceIndex {
 public:
  explicit EditDistanceIndex(const ReferenceLexicon& lexicon);

  const std::string& source() const noexcept { return source_; }
  bool empty() const noexcept { return total_ == 0; }
  std::size_t size() const noexcept { return total_; }
  const std::map<std::size_t, std::vector<std::u32string>>& buckets() const noexcept { return buckets_; }

  /// Exact minimum over all forms. Ties go to the lexicographically smallest form.
  NearestForm nearest(std::string_view word) const;

  /// Like nearest(), but only searches for forms with distance <= ceiling;
  /// returns nullopt when none exists. Buckets whose length gap alone exceeds
  /// the ceiling are never inspected.
  std::optional<NearestForm> nearest_within(std::string_view word, double ceiling) const;

  /// Number of forms whose distance was actually computed by the last query on
  /// this thread (bucket pruning diagnostics).
  static std::size_t last_query_inspected() noexcept;

 private:
  std::optional<NearestForm> search(const std::u32string& word, std::size_t ceil_num,
                                    std::size_t ceil_den) const;

  std::string source_;
  std::map<std::size_t, std::vector<std::u32string>> buckets_;
  std::size_t total_ = 0;
};

/// Plain Levenshtein distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Levenshtein distance, or max_edits + 1 as soon as it is known to exceed max_edits.
std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t max_edits);

bool contains(const ReferenceLexicon& lexicon, std::string_view word);
NearestForm min_normalized_edit_distance(const EditDistanceIndex& index, std::string_view word);
bool is_diacritic_variant(const ReferenceLexicon& lexicon, const DiacriticFoldTable& fold, std::string_view word);
bool is_adjacent_swap_variant(const ReferenceLexicon& lexicon, std::string_view word);

}  // namespace neolex
