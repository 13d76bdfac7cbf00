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

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace neolex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when input bytes are not valid UTF-8.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// A required precondition of an operation was not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A referenced entity (group, document, lexicon) does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (labels, configuration values, responses).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// UTF-8 / code point helpers
// ---------------------------------------------------------------------------

/// Decodes UTF-8 into code points. Throws EncodingError on malformed input.
std::u32string utf8_to_u32(std::string_view s);
std::string u32_to_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view s) noexcept;

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

/// NFC normalization followed by lowercasing (Polish locale rules).
std::string normalize_form(std::string_view s);
std::string to_nfc(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

bool is_letter(char32_t cp) noexcept;
bool is_decimal_digit(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_lower(char32_t cp) noexcept;
bool is_space(char32_t cp) noexcept;
bool is_hyphen(char32_t cp) noexcept;
bool is_apostrophe(char32_t cp) noexcept;

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split(std::string_view s, char sep);

/// Collapses runs of whitespace to single spaces and trims both ends.
std::string collapse_whitespace(std::string_view s);

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

using Timestamp = std::chrono::sys_seconds;

/// "2025-03-01T12:00:00Z"
std::string format_timestamp(Timestamp t);
/// Accepts "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[Z]".
Timestamp parse_timestamp(std::string_view s);
/// "2025-03-01"
std::string format_date(Timestamp t);
Timestamp start_of_day(Timestamp t);

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view data);

}  // namespace neolex
