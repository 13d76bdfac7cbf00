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

#include "http_util.hpp"

#include <httplib.h>

#include "neolex/ingest.hpp"

namespace neolex::http {

namespace {

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path + query
};

Target split_url(const std::string& url) {
  const auto parsed = parse_url(url);
  if (!parsed) throw Error("not an absolute http(s) URL: " + url);
  Target t;
  t.origin = parsed->scheme + "://" + parsed->host;
  if (parsed->port != 0) t.origin += ":" + std::to_string(parsed->port);
  t.path = parsed->path.empty() ? "/" : parsed->path;
  if (!parsed->query.empty()) t.path += "?" + parsed->query;
  return t;
}

void configure(httplib::Client& cli, std::chrono::seconds timeout) {
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_follow_location(true);
}

Result to_result(const httplib::Result& res, const std::string& url) {
  if (!res) throw Error("request to " + url + " failed: " + httplib::to_string(res.error()));
  Result out;
  out.status = res->status;
  out.body = res->body;
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

}  // namespace

Result get(const std::string& url, std::chrono::seconds timeout, const std::string& user_agent) {
  const auto t = split_url(url);
  httplib::Client cli(t.origin);
  configure(cli, timeout);
  httplib::Headers headers = {{"User-Agent", user_agent}};
  return to_result(cli.Get(t.path, headers), url);
}

Result post(const std::string& url, const std::string& body, const std::string& content_type,
            std::chrono::seconds timeout, const std::map<std::string, std::string>& extra_headers) {
  const auto t = split_url(url);
  httplib::Client cli(t.origin);
  configure(cli, timeout);
  httplib::Headers headers;
  for (const auto& [k, v] : extra_headers) headers.emplace(k, v);
  return to_result(cli.Post(t.path, headers, body, content_type), url);
}

}  // namespace neolex::http
