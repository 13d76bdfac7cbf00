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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "markup.hpp"
#include "neolex/ingest.hpp"

namespace neolex {

namespace {

const std::set<std::string, std::less<>>& boilerplate_elements() {
  static const std::set<std::string, std::less<>> s = {
      "script", "style",  "noscript", "template", "svg",    "head",   "nav",    "header", "footer",
      "aside",  "form",   "iframe",   "button",   "select", "textarea", "object", "canvas", "title",
      "menu",   "dialog"};
  return s;
}

const std::set<std::string, std::less<>>& block_elements() {
  static const std::set<std::string, std::less<>> s = {
      "p",  "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6", "article", "section",
      "main", "td", "th", "tr", "table", "blockquote", "pre", "dd", "dt", "dl", "figure", "figcaption",
      "hr", "body", "html", "address", "caption"};
  return s;
}

// Inline formatting does not count as markup noise.
const std::set<std::string, std::less<>>& free_inline_elements() {
  static const std::set<std::string, std::less<>> s = {"b",    "i",   "em",  "strong", "span", "u",
                                                       "small", "sub", "sup", "mark",   "abbr", "cite",
                                                       "q",     "time", "code", "s",    "wbr"};
  return s;
}

const std::set<std::string, std::less<>>& void_elements() {
  static const std::set<std::string, std::less<>> s = {"br",    "hr",  "img",   "meta",   "link",
                                                       "input", "area", "base", "col",    "embed",
                                                       "source", "track", "wbr", "param"};
  return s;
}

struct Unit {
  enum class Kind { text, tag, boundary } kind;
  double value = 0.0;
  std::string text;
};

std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : s) {
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

void strip_soft_hyphens(std::string& s) {
  const std::string shy = "\xC2\xAD";
  for (auto pos = s.find(shy); pos != std::string::npos; pos = s.find(shy, pos)) s.erase(pos, shy.size());
}

}  // namespace

std::string extract_main_content(std::string_view html) {
  if (!is_valid_utf8(html)) throw EncodingError("page is not valid UTF-8");

  const auto tokens = markup::tokenize(html, /*html_mode=*/true);

  std::vector<Unit> units;
  std::vector<std::string> skip_stack;
  int anchor_depth = 0;

  for (const auto& tok : tokens) {
    using K = markup::Token::Kind;
    if (tok.kind == K::comment) continue;
    if (tok.kind == K::text) {
      if (!skip_stack.empty()) continue;
      std::string text = tok.cdata ? tok.text : markup::decode_entities(tok.text);
      strip_soft_hyphens(text);
      const auto words = count_words(text);
      if (words == 0) {
        units.push_back({Unit::Kind::text, 0.0, " "});
        continue;
      }
      units.push_back({Unit::Kind::text, anchor_depth > 0 ? 0.0 : static_cast<double>(words), std::move(text)});
      continue;
    }

    const bool is_open = tok.kind == K::open;
    const bool is_void = void_elements().count(tok.name) != 0;
    const double cost = free_inline_elements().count(tok.name) ? 0.0 : -1.0;

    if (boilerplate_elements().count(tok.name)) {
      if (is_open && !tok.self_closing && !is_void) {
        skip_stack.push_back(tok.name);
      } else if (!is_open) {
        const auto it = std::find(skip_stack.rbegin(), skip_stack.rend(), tok.name);
        if (it != skip_stack.rend()) skip_stack.erase(std::next(it).base(), skip_stack.end());
      }
      units.push_back({Unit::Kind::tag, -1.0, {}});
      continue;
    }
    if (!skip_stack.empty()) {
      units.push_back({Unit::Kind::tag, -1.0, {}});
      continue;
    }
    if (tok.name == "a" && !tok.self_closing) anchor_depth = std::max(0, anchor_depth + (is_open ? 1 : -1));
    const bool block = block_elements().count(tok.name) != 0;
    units.push_back({block ? Unit::Kind::boundary : Unit::Kind::tag, cost, {}});
  }

  // Maximum-sum contiguous window: text scores its word count, markup costs one.
  double best = 0.0, run = 0.0;
  std::size_t best_begin = 0, best_end = 0, run_begin = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (run <= 0.0) {
      run = 0.0;
      run_begin = i;
    }
    run += units[i].value;
    if (run > best) {
      best = run;
      best_begin = run_begin;
      best_end = i + 1;
    }
  }
  if (best <= 0.0) return {};

  std::vector<std::string> paragraphs;
  std::string current;
  auto flush = [&] {
    auto collapsed = collapse_whitespace(current);
    if (!collapsed.empty()) paragraphs.push_back(std::move(collapsed));
    current.clear();
  };
  for (std::size_t i = best_begin; i < best_end; ++i) {
    const auto& u = units[i];
    if (u.kind == Unit::Kind::boundary) {
      flush();
    } else if (u.kind == Unit::Kind::text) {
      current += u.text;
    }
  }
  flush();

  std::string out;
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    if (i) out.push_back('\n');
    out += paragraphs[i];
  }
  return to_nfc(out);
}

}  // namespace neolex
