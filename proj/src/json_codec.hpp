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

// nlohmann::json conversions for library records, shared by the modules
// that persist or serve them.

#include <json.hpp>

#include "neolex/candidates.hpp"
#include "neolex/ingest.hpp"
#include "neolex/labels.hpp"

namespace neolex::codec {

using json = nlohmann::json;

json to_json(const Document& d);
Document document_from(const json& j);

json to_json(const Context& c);
Context context_from(const json& j);

json to_json(const CandidateStats& s);
CandidateStats stats_from(const json& j);

json to_json(const Definition& d);
Definition definition_from(const json& j);

json to_json(const CandidateGroup& g);
CandidateGroup group_from(const json& j);

/// Runs `f`, rethrowing nlohmann errors as ParseError prefixed by `what`.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace neolex::codec
