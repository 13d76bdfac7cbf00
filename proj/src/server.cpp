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

#include "neolex/server.hpp"

#include <httplib.h>

#include <charconv>

#include "json_codec.hpp"

namespace neolex {

using json = nlohmann::json;

namespace {

struct HttpError {
  int status;
  std::string message;
};

ApiResponse json_response(int status, std::string body) {
  ApiResponse r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

ApiResponse error_response(int status, const std::string& message) {
  return json_response(status, json{{"error", message}}.dump());
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      const auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  for (const auto& part : split(path, '/')) {
    if (!part.empty()) out.push_back(percent_decode(part));
  }
  return out;
}

const std::string* param(const ApiRequest& r, const std::string& name) {
  auto it = r.query.find(name);
  return it == r.query.end() || it->second.empty() ? nullptr : &it->second;
}

std::size_t size_param(const ApiRequest& r, const std::string& name, std::size_t fallback) {
  const auto* v = param(r, name);
  if (!v) return fallback;
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size()) {
    throw HttpError{400, name + " must be a non-negative integer"};
  }
  return out;
}

Selection selection_of(const ApiRequest& r) {
  Selection s;
  if (const auto* v = param(r, "status")) {
    try {
      s.status = parse_review_status(*v);
    } catch (const Error& e) {
      throw HttpError{400, e.what()};
    }
  }
  if (const auto* v = param(r, "stage")) s.stage = *v;
  return s;
}

std::optional<Timestamp> time_param(const ApiRequest& r, const std::string& name) {
  const auto* v = param(r, name);
  if (!v) return std::nullopt;
  try {
    return parse_timestamp(*v);
  } catch (const Error& e) {
    throw HttpError{400, name + ": " + e.what()};
  }
}

json body_of(const ApiRequest& r) {
  if (trim(r.body).empty()) return json::object();
  try {
    auto j = json::parse(r.body);
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return j;
  } catch (const json::exception& e) {
    throw HttpError{400, std::string("malformed JSON body: ") + e.what()};
  }
}

template <typename T>
T field(const json& body, const std::string& name, T fallback) {
  if (!body.contains(name)) return fallback;
  try {
    return body[name].get<T>();
  } catch (const json::exception&) {
    throw HttpError{400, "field '" + name + "' has the wrong type"};
  }
}

ApiResponse dispatch(Workbench& wb, const ApiRequest& r) {
  const auto seg = segments(r.path);
  const auto& m = r.method;
  auto method_is = [&](const char* expected) {
    if (m != expected) throw HttpError{405, "method " + m + " is not allowed on " + r.path};
  };

  if (seg.size() == 1 && seg[0] == "candidates") {
    method_is("GET");
    ListQuery q;
    q.page = size_param(r, "page", 0);
    q.page_size = size_param(r, "page_size", q.page_size);
    if (const auto* v = param(r, "sort")) q.sort_key = *v;
    q.selection = selection_of(r);
    return json_response(200, to_json(wb.list_candidates(q)));
  }
  if (seg.size() == 2 && seg[0] == "candidates") {
    method_is("GET");
    return json_response(200, to_json(wb.candidate(seg[1])));
  }
  if (seg.size() == 3 && seg[0] == "candidates") {
    const auto& id = seg[1];
    const auto& action = seg[2];
    if (action == "trend") {
      method_is("GET");
      return json_response(200, to_json(wb.frequency_trend(id, time_param(r, "from"), time_param(r, "to"))));
    }
    if (action == "status") {
      method_is("POST");
      const auto body = body_of(r);
      if (!body.contains("status")) throw HttpError{400, "field 'status' is required"};
      ReviewStatus status;
      try {
        status = parse_review_status(field<std::string>(body, "status", ""));
      } catch (const ParseError& e) {
        throw HttpError{400, e.what()};
      }
      const auto reviewer = field<std::string>(body, "reviewer", "anonymous");
      return json_response(200, to_json(wb.set_review_status(id, status, reviewer)));
    }
    if (action == "definition") {
      method_is("POST");
      const auto shots = field<int>(body_of(r), "shots", 5);
      return json_response(200, codec::to_json(wb.request_definition(id, shots)).dump());
    }
    if (action == "categories") {
      method_is("POST");
      CategorySetup setup;
      try {
        setup = parse_category_setup(field<std::string>(body_of(r), "setup", "examples"));
      } catch (const ParseError& e) {
        throw HttpError{400, e.what()};
      }
      return json_response(200, to_json(wb.request_categories(id, setup)));
    }
  }
  if (seg.size() == 2 && seg[0] == "reports" && seg[1] == "stages") {
    method_is("GET");
    return json_response(200, to_json(wb.stage_reports()));
  }
  if (seg.size() == 2 && seg[0] == "config" && seg[1] == "filters") {
    if (m == "GET") return json_response(200, filter_config_to_json(wb.filter_config()));
    method_is("PUT");
    body_of(r);
    const auto config = filter_config_from_json(r.body, wb.filter_config());
    const auto stages = wb.update_filter_config_and_rerun(config);
    return json_response(
        200, json{{"config", json::parse(filter_config_to_json(config))}, {"stages", json::parse(to_json(stages))}}
                 .dump());
  }
  if (seg.size() == 1 && seg[0] == "export.csv") {
    method_is("GET");
    ApiResponse resp;
    resp.content_type = "text/csv; charset=utf-8";
    resp.body = wb.export_csv(selection_of(r));
    return resp;
  }
  throw HttpError{404, "no route for " + r.path};
}

}  // namespace

ApiResponse handle_api(Workbench& workbench, const ApiRequest& request) {
  try {
    return dispatch(workbench, request);
  } catch (const HttpError& e) {
    return error_response(e.status, e.message);
  } catch (const NotFoundError& e) {
    return error_response(404, e.what());
  } catch (const ConfigError& e) {
    return error_response(422, e.what());
  } catch (const PreconditionError& e) {
    return error_response(422, e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  } catch (const LlmError& e) {
    return error_response(502, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

// ---------------------------------------------------------------------------
// Server

struct ApiServer::Impl {
  Workbench& workbench;
  httplib::Server server;

  explicit Impl(Workbench& wb) : workbench(wb) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest r;
      r.method = req.method;
      r.path = req.target.substr(0, req.target.find('?'));
      for (const auto& [k, v] : req.params) r.query.emplace(k, v);
      r.body = req.body;
      const auto out = handle_api(workbench, r);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
  }
};

ApiServer::ApiServer(Workbench& workbench) : impl_(std::make_unique<Impl>(workbench)) {}
ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace neolex
