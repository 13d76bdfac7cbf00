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

#include "markup.hpp"

#include <cctype>
#include <cstdint>
#include <unordered_map>

#include "neolex/text.hpp"

namespace neolex::markup {

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_raw_text_element(std::string_view name) {
  return name == "script" || name == "style" || name == "textarea" || name == "xmp";
}

// Case-insensitive search for "</name" starting at pos.
std::size_t find_close_tag(std::string_view in, std::string_view name, std::size_t pos) {
  while (true) {
    pos = in.find("</", pos);
    if (pos == std::string_view::npos) return pos;
    if (pos + 2 + name.size() <= in.size() && lower_ascii(in.substr(pos + 2, name.size())) == name) {
      const std::size_t after = pos + 2 + name.size();
      if (after == in.size() || !is_name_char(in[after])) return pos;
    }
    pos += 2;
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view in, bool html_mode) {
  std::vector<Token> out;
  std::string pending_text;
  auto flush_text = [&] {
    if (!pending_text.empty()) {
      Token t;
      t.kind = Token::Kind::text;
      t.text = std::move(pending_text);
      out.push_back(std::move(t));
      pending_text.clear();
    }
  };

  std::size_t i = 0;
  while (i < in.size()) {
    const char c = in[i];
    if (c != '<') {
      pending_text.push_back(c);
      ++i;
      continue;
    }
    // Comments, CDATA, doctype, processing instructions.
    if (in.compare(i, 4, "<!--") == 0) {
      flush_text();
      const auto end = in.find("-->", i + 4);
      Token t;
      t.kind = Token::Kind::comment;
      t.text = std::string(in.substr(i + 4, end == std::string_view::npos ? std::string_view::npos : end - i - 4));
      out.push_back(std::move(t));
      i = end == std::string_view::npos ? in.size() : end + 3;
      continue;
    }
    if (in.compare(i, 9, "<![CDATA[") == 0) {
      flush_text();
      const auto end = in.find("]]>", i + 9);
      Token t;
      t.kind = Token::Kind::text;
      t.cdata = true;
      t.text = std::string(in.substr(i + 9, end == std::string_view::npos ? std::string_view::npos : end - i - 9));
      out.push_back(std::move(t));
      i = end == std::string_view::npos ? in.size() : end + 3;
      continue;
    }
    if (in.compare(i, 2, "<!") == 0 || in.compare(i, 2, "<?") == 0) {
      flush_text();
      const auto end = in.find('>', i + 2);
      i = end == std::string_view::npos ? in.size() : end + 1;
      continue;
    }

    const bool closing = i + 1 < in.size() && in[i + 1] == '/';
    std::size_t j = i + (closing ? 2 : 1);
    if (j >= in.size() || !std::isalpha(static_cast<unsigned char>(in[j]))) {
      pending_text.push_back(c);
      ++i;
      continue;
    }
    const std::size_t name_start = j;
    while (j < in.size() && is_name_char(in[j])) ++j;
    Token t;
    t.kind = closing ? Token::Kind::close : Token::Kind::open;
    t.name = lower_ascii(in.substr(name_start, j - name_start));

    // Attributes.
    while (j < in.size() && in[j] != '>') {
      if (std::isspace(static_cast<unsigned char>(in[j]))) {
        ++j;
        continue;
      }
      if (in[j] == '/') {
        t.self_closing = true;
        ++j;
        continue;
      }
      const std::size_t key_start = j;
      while (j < in.size() && in[j] != '=' && in[j] != '>' && in[j] != '/' &&
             !std::isspace(static_cast<unsigned char>(in[j])))
        ++j;
      std::string key = lower_ascii(in.substr(key_start, j - key_start));
      std::string value;
      while (j < in.size() && std::isspace(static_cast<unsigned char>(in[j]))) ++j;
      if (j < in.size() && in[j] == '=') {
        ++j;
        while (j < in.size() && std::isspace(static_cast<unsigned char>(in[j]))) ++j;
        if (j < in.size() && (in[j] == '"' || in[j] == '\'')) {
          const char q = in[j++];
          const auto end = in.find(q, j);
          value = std::string(in.substr(j, end == std::string_view::npos ? std::string_view::npos : end - j));
          j = end == std::string_view::npos ? in.size() : end + 1;
        } else {
          const std::size_t vs = j;
          while (j < in.size() && in[j] != '>' && !std::isspace(static_cast<unsigned char>(in[j]))) ++j;
          value = std::string(in.substr(vs, j - vs));
        }
      }
      if (key.empty()) {
        if (j < in.size() && in[j] != '>') ++j;
      } else {
        t.attrs.emplace_back(std::move(key), decode_entities(value));
      }
    }
    flush_text();
    i = j < in.size() ? j + 1 : in.size();

    const std::string name = t.name;
    const bool open = t.kind == Token::Kind::open && !t.self_closing;
    out.push_back(std::move(t));

    if (html_mode && open && is_raw_text_element(name)) {
      const auto end = find_close_tag(in, name, i);
      Token raw;
      raw.kind = Token::Kind::text;
      raw.text = std::string(in.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
      if (!raw.text.empty()) out.push_back(std::move(raw));
      if (end == std::string_view::npos) {
        i = in.size();
      } else {
        Token close;
        close.kind = Token::Kind::close;
        close.name = name;
        out.push_back(std::move(close));
        const auto gt = in.find('>', end);
        i = gt == std::string_view::npos ? in.size() : gt + 1;
      }
    }
  }
  flush_text();
  return out;
}

std::string decode_entities(std::string_view s) {
  static const std::unordered_map<std::string, char32_t> named = {
      {"amp", U'&'},     {"lt", U'<'},      {"gt", U'>'},      {"quot", U'"'},    {"apos", U'\''},
      {"nbsp", U' '},    {"oacute", U'ó'},  {"Oacute", U'Ó'},  {"hellip", U'…'},  {"ndash", U'–'},
      {"mdash", U'—'},   {"laquo", U'«'},   {"raquo", U'»'},   {"bdquo", U'„'},   {"ldquo", U'“'},
      {"rdquo", U'”'},   {"lsquo", U'‘'},   {"rsquo", U'’'},   {"copy", U'©'},    {"reg", U'®'},
      {"shy", U'\u00AD'}, {"euro", U'€'},   {"deg", U'°'},     {"middot", U'·'},  {"bull", U'•'},
      {"eacute", U'é'},  {"aacute", U'á'},  {"uuml", U'ü'},    {"ouml", U'ö'},    {"auml", U'ä'},
      {"szlig", U'ß'}};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view ref = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    bool ok = false;
    if (!ref.empty() && ref[0] == '#') {
      std::uint32_t v = 0;
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      ok = !digits.empty();
      for (char d : digits) {
        int dv;
        if (d >= '0' && d <= '9') {
          dv = d - '0';
        } else if (hex && d >= 'a' && d <= 'f') {
          dv = d - 'a' + 10;
        } else if (hex && d >= 'A' && d <= 'F') {
          dv = d - 'A' + 10;
        } else {
          ok = false;
          break;
        }
        v = v * (hex ? 16 : 10) + static_cast<std::uint32_t>(dv);
        if (v > 0x10FFFF) {
          ok = false;
          break;
        }
      }
      cp = static_cast<char32_t>(v);
      if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
    } else {
      const auto it = named.find(std::string(ref));
      if (it != named.end()) {
        cp = it->second;
        ok = true;
      }
    }
    if (!ok) {
      out.push_back(s[i++]);
      continue;
    }
    append_utf8(out, cp);
    i = semi + 1;
  }
  return out;
}

}  // namespace neolex::markup
