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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

#include "neolex/app.hpp"

namespace py = pybind11;
using namespace neolex;

namespace {

py::object loads(const std::string& json) { return py::module_::import("json").attr("loads")(json); }

std::string dumps(const py::object& obj) { return py::module_::import("json").attr("dumps")(obj).cast<std::string>(); }

py::dict nearest_to_dict(const NearestForm& n) {
  py::dict d;
  d["distance"] = n.distance;
  d["edits"] = n.edits;
  d["form"] = n.form;
  return d;
}

py::dict definition_to_dict(const Definition& def) {
  py::dict d;
  d["neologism"] = def.neologism;
  d["text"] = def.text;
  d["shots"] = def.shots;
  d["examples_used"] = def.examples_used;
  d["model"] = def.model_name;
  return d;
}

std::optional<Timestamp> optional_time(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return parse_timestamp(*s);
}

Selection make_selection(const std::optional<std::string>& status, const std::string& stage) {
  Selection sel;
  if (status) sel.status = parse_review_status(*status);
  sel.stage = stage;
  return sel;
}

FunctionClient::Fn callable(const py::function& fn) {
  return [fn](const std::string& prompt) {
    py::gil_scoped_acquire gil;
    return fn(prompt).cast<std::string>();
  };
}

py::dict chain_result_to_dict(const ChainResult& r) {
  py::dict d;
  d["stages"] = loads(to_json(r.stages));
  py::list survivors;
  for (const auto& g : r.survivors) survivors.append(loads(group_to_json(g)));
  d["survivors"] = survivors;
  py::list rejected;
  for (const auto& x : r.rejected) {
    py::dict item;
    item["id"] = x.group.id;
    item["decision"] = loads(to_json(x.decision));
    rejected.append(item);
  }
  d["rejected"] = rejected;
  return d;
}

py::dict run_corpus(const std::vector<std::string>& documents, const std::vector<std::string>& dictionary,
                    const std::vector<std::string>& english, const std::optional<std::vector<std::string>>& gold,
                    const std::string& filter_config, const std::vector<std::string>& chain, std::size_t parallelism,
                    const std::optional<py::function>& llm, const std::optional<std::filesystem::path>& exemplars) {
  std::vector<Document> docs;
  docs.reserve(documents.size());
  for (const auto& d : documents) docs.push_back(document_from_json(d));
  std::optional<ReferenceLexicon> eng;
  if (!english.empty()) eng = ReferenceLexicon::from_words("english", LexiconKind::dictionary, english);
  Resources res(ReferenceLexicon::from_words("dictionary", LexiconKind::dictionary, dictionary), std::move(eng), {});
  const auto config = filter_config_from_json(filter_config);
  config.validate();
  IdentityAdapter adapter;
  PipelineOptions po;
  po.parallelism = parallelism;
  const auto built = build_candidate_groups(docs, adapter, res.extraction_references(), po);

  ChainOptions co;
  co.parallelism = parallelism;
  if (gold) co.gold = GoldSet::from_words(*gold);
  auto order = chain.empty() ? default_chain(config) : chain;
  if (chain.empty() && !res.english()) std::erase(order, std::string(filter_id::english));
  std::optional<FunctionClient> client;
  if (std::find(order.begin(), order.end(), filter_id::llm) != order.end()) {
    if (!llm || !exemplars) throw PreconditionError("the llm stage needs a callable and an exemplars file");
    client.emplace(callable(*llm), "python");
    co.llm = LlmStageSetup{&*client, load_llm_exemplars(*exemplars), nullptr, 1, kLlmFilterContexts};
  }
  std::optional<ChainResult> result;
  {
    py::gil_scoped_release release;
    result = run_chain(built.groups, order, config, res.filter_lexicons(), co);
  }
  auto d = chain_result_to_dict(*result);
  d["documents"] = built.documents;
  d["occurrences"] = built.occurrences;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neologism candidate extraction, filtering and review";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());
  py::register_exception<LlmError>(m, "LlmError", base.ptr());

  // text and lexicons
  m.def("normalize_form", &normalize_form, py::arg("word"));
  m.def(
      "levenshtein", [](const std::string& a, const std::string& b) { return levenshtein(utf8_to_u32(a), utf8_to_u32(b)); },
      py::arg("a"), py::arg("b"));

  py::class_<ReferenceLexicon>(m, "Lexicon")
      .def_static(
          "from_words",
          [](const std::string& name, const std::vector<std::string>& words, const std::string& kind) {
            return ReferenceLexicon::from_words(name, parse_lexicon_kind(kind), words);
          },
          py::arg("name"), py::arg("words"), py::arg("kind") = "dictionary")
      .def_static(
          "load",
          [](const std::filesystem::path& path, const std::string& kind, const std::string& name) {
            return load_lexicon(path, parse_lexicon_kind(kind), name);
          },
          py::arg("path"), py::arg("kind") = "dictionary", py::arg("name") = "")
      .def_property_readonly("name", &ReferenceLexicon::name)
      .def("__len__", &ReferenceLexicon::size)
      .def("__contains__", [](const ReferenceLexicon& l, const std::string& w) { return l.contains(w); });

  py::class_<EditDistanceIndex>(m, "EditDistanceIndex")
      .def(py::init<const ReferenceLexicon&>(), py::arg("lexicon"))
      .def("__len__", &EditDistanceIndex::size)
      .def(
          "nearest", [](const EditDistanceIndex& i, const std::string& w) { return nearest_to_dict(i.nearest(w)); },
          py::arg("word"));

  // documents and the pipeline
  m.def(
      "make_document",
      [](const std::string& url, std::string text, const std::string& fetched_at) {
        return loads(document_to_json(make_document(url, std::move(text), parse_timestamp(fetched_at))));
      },
      py::arg("url"), py::arg("text"), py::arg("fetched_at"));
  m.def(
      "run_corpus",
      [](const py::list& documents, const std::vector<std::string>& dictionary, const std::vector<std::string>& english,
         const std::optional<std::vector<std::string>>& gold, const py::dict& filter_config,
         const std::vector<std::string>& chain, std::size_t parallelism, const std::optional<py::function>& llm,
         const std::optional<std::filesystem::path>& exemplars) {
        std::vector<std::string> docs;
        for (const auto& d : documents) docs.push_back(dumps(py::reinterpret_borrow<py::object>(d)));
        return run_corpus(docs, dictionary, english, gold, dumps(filter_config), chain, parallelism, llm, exemplars);
      },
      py::arg("documents"), py::arg("dictionary"), py::arg("english") = std::vector<std::string>{},
      py::arg("gold") = std::nullopt, py::arg("filter_config") = py::dict(),
      py::arg("chain") = std::vector<std::string>{}, py::arg("parallelism") = 1, py::arg("llm") = std::nullopt,
      py::arg("exemplars") = std::nullopt);
  m.def("default_chain", [](const py::dict& cfg) { return default_chain(filter_config_from_json(dumps(cfg))); },
        py::arg("filter_config") = py::dict());
  m.def("default_filter_config", [] { return loads(filter_config_to_json(FilterConfig{})); });

  // metrics
  m.def(
      "compute_prf",
      [](const std::set<std::string>& predicted, const std::set<std::string>& gold) {
        return loads(to_json(compute_prf(predicted, gold)));
      },
      py::arg("predicted"), py::arg("gold"));
  m.def(
      "compute_group_accuracy",
      [](const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>& groups) {
        std::vector<LemmaGroup> gs;
        for (const auto& [gold, forms] : groups) {
          LemmaGroup g;
          g.gold_base_form = gold;
          for (const auto& [form, lemma] : forms) g.forms.push_back({form, lemma});
          gs.push_back(std::move(g));
        }
        return loads(to_json(compute_group_accuracy(gs)));
      },
      py::arg("groups"));
  m.def(
      "compute_categorization",
      [](const std::vector<std::string>& predictions, const std::vector<std::string>& gold,
         const std::vector<std::string>& labels) {
        return loads(to_json(compute_categorization(predictions, gold, labels)));
      },
      py::arg("predictions"), py::arg("gold"), py::arg("labels"));

  // CSV
  m.def("parse_csv", [](const std::string& text) { return parse_csv(text); }, py::arg("text"));
  m.def("write_csv", &write_csv, py::arg("rows"));

  // LLM operations with a Python callable as the client
  m.def("parse_filter_verdict", [](const std::string& r) { return parse_filter_verdict(r); }, py::arg("response"));
  m.def(
      "generate_definition",
      [](const std::string& neologism, const std::vector<std::string>& contexts, int shots, const py::function& llm) {
        FunctionClient client(callable(llm), "python");
        std::optional<Definition> def;
        {
          py::gil_scoped_release release;
          def = generate_definition(neologism, contexts, shots, client);
        }
        return definition_to_dict(*def);
      },
      py::arg("neologism"), py::arg("contexts"), py::arg("shots"), py::arg("llm"));
  m.def(
      "judge_pairwise",
      [](const std::string& neologism, const std::string& a, const std::string& b,
         const std::vector<std::string>& contexts, const py::function& llm, std::uint64_t seed) {
        FunctionClient client(callable(llm), "python");
        std::optional<PairwiseVerdict> v;
        {
          py::gil_scoped_release release;
          v = judge_pairwise(neologism, a, b, contexts, client, seed);
        }
        py::dict d;
        d["value"] = to_string(v->value);
        d["a_first"] = v->a_first;
        d["de_shuffled"] = to_string(v->de_shuffled);
        return d;
      },
      py::arg("neologism"), py::arg("definition_a"), py::arg("definition_b"), py::arg("contexts"), py::arg("llm"),
      py::arg("seed"));

  // configured deployment
  py::class_<Application>(m, "Application")
      .def(py::init([](const std::filesystem::path& path) { return std::make_unique<Application>(load_app_config(path)); }),
           py::arg("config_path"))
      .def_property_readonly("notices", &Application::notices)
      .def(
          "import_documents",
          [](Application& app, const std::filesystem::path& path) {
            std::size_t added = 0;
            for (const auto& d : load_documents(path)) added += app.store().insert(d) ? 1 : 0;
            return added;
          },
          py::arg("path"))
      .def("document_count", [](Application& app) { return app.store().size(); })
      .def(
          "run_pipeline",
          [](Application& app, const std::optional<std::vector<std::string>>& gold) {
            std::optional<GoldSet> g;
            if (gold) g = GoldSet::from_words(*gold);
            {
              py::gil_scoped_release release;
              app.run_pipeline(g);
            }
            return loads(to_json(app.workbench().stage_reports()));
          },
          py::arg("gold") = std::nullopt)
      .def("stage_reports", [](Application& app) { return loads(to_json(app.workbench().stage_reports())); })
      .def("filter_config", [](Application& app) { return loads(filter_config_to_json(app.workbench().filter_config())); })
      .def(
          "update_filter_config",
          [](Application& app, const py::dict& partial) {
            const auto merged = filter_config_from_json(dumps(partial), app.workbench().filter_config());
            return loads(to_json(app.workbench().update_filter_config_and_rerun(merged)));
          },
          py::arg("changes"))
      .def(
          "list_candidates",
          [](Application& app, std::size_t page, std::size_t page_size, const std::string& sort,
             const std::optional<std::string>& status, const std::string& stage) {
            ListQuery q;
            q.page = page;
            q.page_size = page_size;
            q.sort_key = sort;
            q.selection = make_selection(status, stage);
            return loads(to_json(app.workbench().list_candidates(q)));
          },
          py::arg("page") = 0, py::arg("page_size") = 50, py::arg("sort") = "base_form",
          py::arg("status") = std::nullopt, py::arg("stage") = "all")
      .def(
          "candidate", [](Application& app, const std::string& id) { return loads(to_json(app.workbench().candidate(id))); },
          py::arg("id"))
      .def(
          "set_review_status",
          [](Application& app, const std::string& id, const std::string& status, const std::string& reviewer) {
            return loads(to_json(app.workbench().set_review_status(id, parse_review_status(status), reviewer)));
          },
          py::arg("id"), py::arg("status"), py::arg("reviewer") = "")
      .def(
          "frequency_trend",
          [](Application& app, const std::string& id, const std::optional<std::string>& from,
             const std::optional<std::string>& to) {
            return loads(to_json(app.workbench().frequency_trend(id, optional_time(from), optional_time(to))));
          },
          py::arg("id"), py::arg("start") = std::nullopt, py::arg("end") = std::nullopt)
      .def(
          "export_csv",
          [](Application& app, const std::optional<std::string>& status, const std::string& stage) {
            return app.workbench().export_csv(make_selection(status, stage));
          },
          py::arg("status") = std::nullopt, py::arg("stage") = "all")
      .def(
          "request_definition",
          [](Application& app, const std::string& id, int shots) {
            std::optional<Definition> d;
            {
              py::gil_scoped_release release;
              d = app.workbench().request_definition(id, shots);
            }
            return definition_to_dict(*d);
          },
          py::arg("id"), py::arg("shots") = 5);
}
