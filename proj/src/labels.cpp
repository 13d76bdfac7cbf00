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

#include "neolex/labels.hpp"

namespace neolex {

namespace {

std::string key(std::string_view s) { return to_lower(trim(s)); }

}  // namespace

std::string to_string(ReviewStatus s) {
  switch (s) {
    case ReviewStatus::pending: return "pending";
    case ReviewStatus::accepted: return "accepted";
    case ReviewStatus::rejected: return "rejected";
  }
  return "pending";
}

ReviewStatus parse_review_status(std::string_view s) {
  const auto k = key(s);
  if (k == "pending") return ReviewStatus::pending;
  if (k == "accepted") return ReviewStatus::accepted;
  if (k == "rejected") return ReviewStatus::rejected;
  throw ParseError("unknown review status: " + std::string(s));
}

std::string to_string(Sentiment s) {
  switch (s) {
    case Sentiment::positive: return "positive";
    case Sentiment::neutral: return "neutral";
    case Sentiment::negative: return "negative";
  }
  return "neutral";
}

Sentiment parse_sentiment(std::string_view s) {
  for (auto v : kAllSentiments) {
    if (key(s) == to_string(v)) return v;
  }
  throw ParseError("unknown sentiment: " + std::string(s));
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::technology_science: return "Technology and Science";
    case Domain::culture_entertainment: return "Culture and Entertainment";
    case Domain::social_life_relationships: return "Social Life and Relationships";
    case Domain::economy_business: return "Economy and Business";
    case Domain::ecology_environment: return "Ecology and Environment";
    case Domain::politics_society: return "Politics and Society";
  }
  return {};
}

Domain parse_domain(std::string_view s) {
  const auto k = collapse_whitespace(key(s));
  for (auto v : kAllDomains) {
    if (k == to_lower(to_string(v))) return v;
  }
  throw ParseError("unknown domain: " + std::string(s));
}

std::string to_string(CategorySetup s) {
  switch (s) {
    case CategorySetup::examples: return "examples";
    case CategorySetup::definition: return "definition";
    case CategorySetup::both: return "both";
  }
  return "examples";
}

CategorySetup parse_category_setup(std::string_view s) {
  const auto k = key(s);
  if (k == "examples") return CategorySetup::examples;
  if (k == "definition") return CategorySetup::definition;
  if (k == "both") return CategorySetup::both;
  throw ParseError("unknown categorization setup: " + std::string(s));
}

}  // namespace neolex
