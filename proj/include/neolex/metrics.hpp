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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "neolex/labels.hpp"

namespace neolex {

struct PrfReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const PrfReport&) const = default;
};

/// Set comparison; ratios with a zero denominator are 0.
PrfReport compute_prf(const std::set<std::string>& predicted, const std::set<std::string>& gold);

struct LemmatizedForm {
  std::string form;
  std::string predicted_lemma;
};

struct LemmaGroup {
  std::string gold_base_form;
  std::vector<LemmatizedForm> forms;
};

struct GroupAccuracyReport {
  std::size_t groups = 0;      // G
  std::size_t consistent = 0;  // S: all predicted lemmas identical
  std::size_t strict = 0;      // K: all predicted lemmas equal the gold base form
  double group_accuracy = 0.0;         // S / G
  double strict_group_accuracy = 0.0;  // K / G
  std::size_t forms = 0;
  std::size_t correct_forms = 0;
  double plain_accuracy = 0.0;  // correct_forms / forms

  bool operator==(const GroupAccuracyReport&) const = default;
};

/// Throws PreconditionError for an empty list or an empty group.
GroupAccuracyReport compute_group_accuracy(const std::vector<LemmaGroup>& groups);

struct CategorizationReport {
  std::size_t items = 0;
  double accuracy = 0.0;
  std::map<std::string, double> per_class_f1;  // every label of the set
  double macro_f1 = 0.0;

  bool operator==(const CategorizationReport&) const = default;
};

/// One-vs-rest F1 per label; macro F1 averages over the whole label set.
/// Throws PreconditionError on length mismatch or a label outside the set.
CategorizationReport compute_categorization(const std::vector<std::string>& predictions,
                                            const std::vector<std::string>& gold,
                                            const std::vector<std::string>& label_set);
CategorizationReport compute_categorization(const std::vector<Sentiment>& predictions,
                                            const std::vector<Sentiment>& gold);
CategorizationReport compute_categorization(const std::vector<Domain>& predictions, const std::vector<Domain>& gold);

/// One row of an incremental filtering run.
struct StageReport {
  std::string stage_label;
  std::string filter_id;  // empty for the unfiltered stage
  std::size_t remaining = 0;
  std::optional<std::size_t> gold_matches;
  std::optional<double> precision;
  std::optional<double> recall;  // absent when the gold set is not exhaustive
  std::optional<double> f1;

  bool operator==(const StageReport&) const = default;
};

std::string to_json(const PrfReport& r);
std::string to_json(const GroupAccuracyReport& r);
std::string to_json(const CategorizationReport& r);
std::string to_json(const std::vector<StageReport>& stages);
std::vector<StageReport> stage_reports_from_json(std::string_view json);

/// Aligned plain-text tables.
std::string format_stage_table(const std::vector<StageReport>& stages);
std::string format_group_accuracy_table(const std::vector<std::pair<std::string, GroupAccuracyReport>>& rows);
std::string format_categorization_table(const std::vector<std::pair<std::string, CategorizationReport>>& rows);

/// Fixed-point rendering used by the tables.
std::string fixed_decimal(double v, int digits = 3);

/// Renders rows of cells with columns padded to their widest cell (code points).
std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace neolex
