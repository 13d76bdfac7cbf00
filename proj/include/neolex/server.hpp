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

#include <map>
#include <memory>
#include <string>

#include "neolex/service.hpp"

namespace neolex {

struct ApiRequest {
  std::string method;  // GET, POST, PUT
  std::string path;    // percent-encoded path without the query string
  std::map<std::string, std::string> query;  // decoded
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json; charset=utf-8";
  std::string body;
};

/// Dispatches one API call. Errors map to 400 (malformed request), 404
/// (unknown group or route), 405, 422 (invalid config or unmet
/// precondition) and 502 (LLM failure); the body is {"error": message}.
ApiResponse handle_api(Workbench& workbench, const ApiRequest& request);

/// HTTP front end for handle_api.
class ApiServer {
 public:
  explicit ApiServer(Workbench& workbench);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port. Throws Error on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace neolex
