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

// Thin wrappers over cpp-httplib so that the (large) header is compiled in a
// single translation unit.

#include <chrono>
#include <map>
#include <string>

namespace neolex::http {

struct Result {
  int status = 0;
  std::string body;
  std::string content_type;
};

/// Throws neolex::Error on transport failure or malformed URL.
Result get(const std::string& url, std::chrono::seconds timeout, const std::string& user_agent);

Result post(const std::string& url, const std::string& body, const std::string& content_type,
            std::chrono::seconds timeout, const std::map<std::string, std::string>& headers = {});

}  // namespace neolex::http
