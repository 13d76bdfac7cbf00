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

#include "neolex/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace neolex {

using json = nlohmann::json;

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::string fixed(double v) { return fixed_decimal(v); }

}  // namespace

std::string fixed_decimal(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

PrfReport compute_prf(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  PrfReport r;
  for (const auto& p : predicted) {
    if (gold.count(p)) {
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  r.fn = gold.size() - r.tp;
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = harmonic(r.precision, r.recall);
  return r;
}

GroupAccuracyReport compute_group_accuracy(const std::vector<LemmaGroup>& groups) {
  if (groups.empty()) throw PreconditionError("group accuracy needs at least one group");
  GroupAccuracyReport r;
  for (const auto& g : groups) {
    if (g.forms.empty()) throw PreconditionError("empty lemma group: " + g.gold_base_form);
    const auto& first = g.forms.front().predicted_lemma;
    bool same = true, all_gold = true;
    for (const auto& f : g.forms) {
      same = same && f.predicted_lemma == first;
      const bool correct = f.predicted_lemma == g.gold_base_form;
      all_gold = all_gold && correct;
      ++r.forms;
      if (correct) ++r.correct_forms;
    }
    ++r.groups;
    if (same) ++r.consistent;
    if (all_gold) ++r.strict;
  }
  r.group_accuracy = ratio(r.consistent, r.groups);
  r.strict_group_accuracy = ratio(r.strict, r.groups);
  r.plain_accuracy = ratio(r.correct_forms, r.forms);
  return r;
}

CategorizationReport compute_categorization(const std::vector<std::string>& predictions,
                                            const std::vector<std::string>& gold,
                                            const std::vector<std::string>& label_set) {
  if (predictions.size() != gold.size()) {
    throw PreconditionError("prediction and gold lists differ in length (" + std::to_string(predictions.size()) +
                            " vs " + std::to_string(gold.size()) + ")");
  }
  const std::set<std::string> labels(label_set.begin(), label_set.end());
  if (labels.empty()) throw PreconditionError("empty label set");
  std::map<std::string, std::size_t> tp, fp, fn;
  CategorizationReport r;
  r.items = gold.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto* l : {&predictions[i], &gold[i]}) {
      if (!labels.count(*l)) throw PreconditionError("label outside the label set: " + *l);
    }
    if (predictions[i] == gold[i]) {
      ++hits;
      ++tp[gold[i]];
    } else {
      ++fp[predictions[i]];
      ++fn[gold[i]];
    }
  }
  r.accuracy = ratio(hits, r.items);
  double sum = 0.0;
  for (const auto& l : labels) {
    const double p = ratio(tp[l], tp[l] + fp[l]);
    const double rc = ratio(tp[l], tp[l] + fn[l]);
    const double f = harmonic(p, rc);
    r.per_class_f1[l] = f;
    sum += f;
  }
  r.macro_f1 = sum / static_cast<double>(labels.size());
  return r;
}

namespace {

template <typename E, std::size_t N>
CategorizationReport categorize_enum(const std::vector<E>& predictions, const std::vector<E>& gold,
                                     const std::array<E, N>& all) {
  std::vector<std::string> p, g, labels;
  for (auto v : predictions) p.push_back(to_string(v));
  for (auto v : gold) g.push_back(to_string(v));
  for (auto v : all) labels.push_back(to_string(v));
  return compute_categorization(p, g, labels);
}

}  // namespace

CategorizationReport compute_categorization(const std::vector<Sentiment>& predictions,
                                            const std::vector<Sentiment>& gold) {
  return categorize_enum(predictions, gold, kAllSentiments);
}

CategorizationReport compute_categorization(const std::vector<Domain>& predictions, const std::vector<Domain>& gold) {
  return categorize_enum(predictions, gold, kAllDomains);
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_json(const PrfReport& r) {
  return json{{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision}, {"recall", r.recall},
              {"f1", r.f1}}
      .dump();
}

std::string to_json(const GroupAccuracyReport& r) {
  return json{{"G", r.groups},
              {"S", r.consistent},
              {"K", r.strict},
              {"A_gr", r.group_accuracy},
              {"A_strict", r.strict_group_accuracy},
              {"forms", r.forms},
              {"correct_forms", r.correct_forms},
              {"plain_accuracy", r.plain_accuracy}}
      .dump();
}

std::string to_json(const CategorizationReport& r) {
  return json{{"items", r.items}, {"accuracy", r.accuracy}, {"per_class_f1", r.per_class_f1}, {"macro_f1", r.macro_f1}}
      .dump();
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_double(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

std::string to_json(const std::vector<StageReport>& stages) {
  json arr = json::array();
  for (const auto& s : stages) {
    arr.push_back({{"stage_label", s.stage_label},
                   {"filter_id", s.filter_id},
                   {"remaining", s.remaining},
                   {"gold_matches", s.gold_matches ? json(*s.gold_matches) : json(nullptr)},
                   {"precision", optional_json(s.precision)},
                   {"recall", optional_json(s.recall)},
                   {"f1", optional_json(s.f1)}});
  }
  return arr.dump();
}

std::vector<StageReport> stage_reports_from_json(std::string_view text) {
  try {
    std::vector<StageReport> out;
    for (const auto& j : json::parse(text)) {
      StageReport s;
      s.stage_label = j.at("stage_label").get<std::string>();
      s.filter_id = j.at("filter_id").get<std::string>();
      s.remaining = j.at("remaining").get<std::size_t>();
      if (!j.at("gold_matches").is_null()) s.gold_matches = j["gold_matches"].get<std::size_t>();
      s.precision = optional_double(j, "precision");
      s.recall = optional_double(j, "recall");
      s.f1 = optional_double(j, "f1");
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed stage reports: ") + e.what());
  }
}

std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], utf8_length(row[i]));
  };
  measure(header);
  for (const auto& r : rows) measure(r);

  auto render = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::size_t pad = width[i] - utf8_length(cell);
      if (i > 0) line += "  ";
      if (i == 0) {
        line += cell + std::string(pad, ' ');
      } else {
        line += std::string(pad, ' ') + cell;  // numbers right-aligned
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = render(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += render(r);
  return out;
}

std::string format_stage_table(const std::vector<StageReport>& stages) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : stages) {
    rows.push_back({s.stage_label, std::to_string(s.remaining),
                    s.gold_matches ? std::to_string(*s.gold_matches) : "-", s.precision ? fixed(*s.precision) : "-",
                    s.recall ? fixed(*s.recall) : "-", s.f1 ? fixed(*s.f1) : "-"});
  }
  return format_table({"Filter", "Remaining", "Gold", "P", "R", "F1"}, rows);
}

std::string format_group_accuracy_table(const std::vector<std::pair<std::string, GroupAccuracyReport>>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, r] : rows) {
    cells.push_back({name, std::to_string(r.groups), std::to_string(r.consistent), std::to_string(r.strict),
                     fixed(r.group_accuracy), fixed(r.strict_group_accuracy), fixed(r.plain_accuracy)});
  }
  return format_table({"Model", "G", "S", "K", "A_gr", "A_strict", "Accuracy"}, cells);
}

std::string format_categorization_table(const std::vector<std::pair<std::string, CategorizationReport>>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, r] : rows) {
    cells.push_back({name, std::to_string(r.items), fixed(r.accuracy), fixed(r.macro_f1)});
  }
  return format_table({"Setup", "Items", "Accuracy", "Macro-F1"}, cells);
}

}  // namespace neolex
