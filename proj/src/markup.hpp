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

// Lenient HTML/XML tokenizer shared by main-content extraction and feed
// parsing. Never throws on malformed markup; stray '<' becomes text.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace neolex::markup {

struct Token {
  enum class Kind { text, open, close, comment };
  Kind kind = Kind::text;
  std::string name;  // lower-case tag name for open/close
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // raw text (entities not decoded) or CDATA content
  bool self_closing = false;
  bool cdata = false;

  std::string attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return v;
    }
    return {};
  }
};

/// Tokenizes markup. Contents of raw-text elements (script, style, textarea
/// in HTML mode) are returned as a single text token.
std::vector<Token> tokenize(std::string_view input, bool html_mode);

/// Decodes character references (&amp;, &#261;, &#x105;, common named ones).
std::string decode_entities(std::string_view s);

}  // namespace neolex::markup
