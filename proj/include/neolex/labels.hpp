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

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "neolex/text.hpp"

namespace neolex {

enum class ReviewStatus { pending, accepted, rejected };

std::string to_string(ReviewStatus s);
/// Throws ParseError for anything but "pending", "accepted", "rejected".
ReviewStatus parse_review_status(std::string_view s);

enum class Sentiment { positive, neutral, negative };

inline constexpr std::array<Sentiment, 3> kAllSentiments = {Sentiment::positive, Sentiment::neutral,
                                                            Sentiment::negative};

std::string to_string(Sentiment s);  // "positive", "neutral", "negative"
Sentiment parse_sentiment(std::string_view s);

enum class Domain {
  technology_science,
  culture_entertainment,
  social_life_relationships,
  economy_business,
  ecology_environment,
  politics_society,
};

inline constexpr std::array<Domain, 6> kAllDomains = {
    Domain::technology_science, Domain::culture_entertainment, Domain::social_life_relationships,
    Domain::economy_business,   Domain::ecology_environment,   Domain::politics_society};

std::string to_string(Domain d);  // display name, e.g. "Technology and Science"
Domain parse_domain(std::string_view s);

enum class CategorySetup { examples, definition, both };

std::string to_string(CategorySetup s);
CategorySetup parse_category_setup(std::string_view s);

struct Definition {
  std::string neologism;
  std::string text;
  int shots = 0;
  std::vector<std::string> examples_used;
  std::string model_name;
  Timestamp created_at{};

  bool operator==(const Definition&) const = default;
};

struct SentimentLabel {
  Sentiment value = Sentiment::neutral;
  CategorySetup setup = CategorySetup::examples;

  bool operator==(const SentimentLabel&) const = default;
};

struct DomainLabel {
  Domain value = Domain::technology_science;
  CategorySetup setup = CategorySetup::examples;

  bool operator==(const DomainLabel&) const = default;
};

}  // namespace neolex
