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

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include "neolex/app.hpp"
#include "neolex/server.hpp"

using namespace neolex;

namespace {

AppConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return load_app_config(path);
}

std::vector<int> parse_shots(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const auto t = std::string(trim(part));
    if (t.empty()) continue;
    if (t != "0" && t != "3" && t != "5") throw ConfigError("--shots accepts 0, 3 and 5, got '" + t + "'");
    out.push_back(std::stoi(t));
  }
  if (out.empty()) throw ConfigError("--shots is empty");
  return out;
}

std::pair<std::string, int> parse_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--addr must be HOST:PORT");
  const auto port_text = addr.substr(colon + 1);
  int port = -1;
  try {
    port = std::stoi(port_text);
  } catch (const std::exception&) {
  }
  if (port < 0 || port > 65535 || std::to_string(port) != port_text) throw ConfigError("invalid port in --addr");
  return {addr.substr(0, colon), port};
}

void print_notices(Application& app) {
  for (const auto& n : app.notices()) std::cerr << "note: " << n << "\n";
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << data;
}

std::unique_ptr<LlmClient> require_client(const std::optional<LlmEndpointConfig>& e, const char* what) {
  if (!e) throw ConfigError(std::string("no ") + what + " is configured");
  return make_llm_client(*e);
}

std::atomic<ApiServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Neologism candidate pipeline and review workbench"};
  cli.require_subcommand(1);
  std::string config_path;
  cli.add_option("-c,--config", config_path, "Configuration file (key = value)");

  // ingest
  auto* ingest = cli.add_subcommand("ingest", "Poll feeds or import documents into the store");
  std::string feeds, documents;
  ingest->add_option("--feeds", feeds, "Feed list, one URL per line");
  ingest->add_option("--documents", documents, "JSON lines of documents to import");

  // pipeline run
  auto* pipeline = cli.add_subcommand("pipeline", "Candidate extraction and filtering");
  pipeline->require_subcommand(1);
  auto* run = pipeline->add_subcommand("run", "Rebuild candidates from stored documents and run the filter chain");
  std::string gold_path;
  run->add_option("--config", config_path, "Configuration file");
  run->add_option("--gold", gold_path, "Gold base forms, one per line");

  // report stages
  auto* report = cli.add_subcommand("report", "Reports of the latest run");
  report->require_subcommand(1);
  auto* stages = report->add_subcommand("stages", "Per-stage survivor counts");
  bool stages_json = false;
  stages->add_flag("--json", stages_json, "Print JSON");

  // eval
  auto* eval = cli.add_subcommand("eval", "Evaluations on labelled datasets");
  eval->require_subcommand(1);
  std::string dataset, mode = "context", shots_text = "0,3,5", setup_text = "examples";
  std::uint64_t seed = 0;
  bool eval_json = false, no_pointwise = false, no_pairwise = false;
  auto* grouping = eval->add_subcommand("grouping", "Lemma grouping accuracy");
  grouping->add_option("--dataset", dataset, "JSON records {base_form, forms, examples}")->required();
  grouping->add_option("--mode", mode, "context or isolated")->check(CLI::IsMember({"context", "isolated"}));
  auto* definitions = eval->add_subcommand("definitions", "Definition generation judged pointwise and pairwise");
  definitions->add_option("--dataset", dataset, "JSON records {neologism, definition, examples}")->required();
  definitions->add_option("--shots", shots_text, "Comma-separated shot counts");
  definitions->add_option("--seed", seed, "Seed for presentation order");
  definitions->add_flag("--no-pointwise", no_pointwise, "Skip the pointwise judge");
  definitions->add_flag("--no-pairwise", no_pairwise, "Skip the pairwise judge");
  auto* categories = eval->add_subcommand("categories", "Sentiment and domain categorization");
  categories->add_option("--dataset", dataset, "JSON records {neologism, definition, examples, sentiment, domain}")
      ->required();
  categories->add_option("--setup", setup_text, "examples, definition or both")
      ->check(CLI::IsMember({"examples", "definition", "both"}));
  for (auto* sub : {grouping, definitions, categories}) sub->add_flag("--json", eval_json, "Print JSON");

  // serve
  auto* serve = cli.add_subcommand("serve", "Serve the review API");
  std::string addr = "127.0.0.1:8080";
  serve->add_option("--addr", addr, "HOST:PORT");

  // export
  auto* exp = cli.add_subcommand("export", "Export candidates as CSV");
  std::string out_path, status_text, stage_text = "all";
  exp->add_option("--out", out_path, "Output file")->required();
  exp->add_option("--status", status_text, "pending, accepted or rejected");
  exp->add_option("--stage", stage_text, "all, survivors, rejected, flagged or a filter id");

  // config keys
  auto* keys = cli.add_subcommand("config-keys", "List accepted configuration keys");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*keys) {
      for (const auto& k : app_config_keys()) std::cout << k << "\n";
      return 0;
    }

    if (*ingest) {
      auto cfg = load_config(config_path);
      if (!feeds.empty()) cfg.feeds = feeds;
      if (!cfg.feeds && documents.empty()) throw ConfigError("ingest needs --feeds, --documents or a feeds key");
      Application app(cfg);
      if (!documents.empty()) {
        std::size_t added = 0;
        const auto docs = load_documents(documents);
        for (const auto& d : docs) added += app.store().insert(d) ? 1 : 0;
        std::cout << "imported " << added << " of " << docs.size() << " documents\n";
      }
      if (cfg.feeds) {
        HttpFetcher fetcher(cfg.ingest_timeout, cfg.ingest_user_agent);
        const auto r = app.ingest(fetcher);
        std::cout << "stored " << r.documents.size() << " new documents, " << r.skipped_duplicates
                  << " duplicates, " << r.dropped.size() << " dropped, " << r.errors.size() << " errors\n";
        for (const auto& e : r.errors) {
          std::cerr << "error: " << e.source << (e.item.empty() ? "" : " " + e.item) << ": " << e.message << "\n";
        }
      }
      std::cout << "store holds " << app.store().size() << " documents\n";
      return 0;
    }

    if (*run) {
      Application app(load_config(config_path));
      print_notices(app);
      std::optional<GoldSet> gold;
      if (!gold_path.empty()) gold = load_gold_file(gold_path);
      const auto r = app.run_pipeline(gold);
      std::cout << r.documents << " documents, " << r.occurrences << " occurrences, " << r.candidate_forms
                << " forms, " << r.clusters << " clusters, " << r.groups.size() << " groups\n\n";
      std::cout << format_stage_table(app.workbench().stage_reports());
      return 0;
    }

    if (*stages) {
      Application app(load_config(config_path));
      const auto reports = app.workbench().stage_reports();
      if (reports.empty()) throw PreconditionError("no pipeline run is stored yet");
      std::cout << (stages_json ? to_json(reports) + "\n" : format_stage_table(reports));
      return 0;
    }

    if (*grouping) {
      const auto cfg = load_config(config_path);
      auto adapter = make_analyzer(cfg);
      const auto lemma_mode = parse_lemma_mode(mode);
      const auto groups = lemmatize_grouping_items(load_grouping_dataset(dataset), *adapter, lemma_mode);
      const auto r = compute_group_accuracy(groups);
      std::cout << (eval_json ? to_json(r) + "\n"
                              : format_group_accuracy_table({{adapter->name() + " (" + mode + ")", r}}));
      return 0;
    }

    if (*definitions) {
      const auto cfg = load_config(config_path);
      auto generator = require_client(cfg.llm, "llm");
      auto judge = cfg.judge ? make_llm_client(*cfg.judge) : nullptr;
      const auto templates =
          cfg.llm_templates ? PromptTemplates::load(*cfg.llm_templates) : PromptTemplates::defaults();
      DefinitionEvalOptions o;
      o.pointwise = !no_pointwise;
      o.pairwise = !no_pairwise;
      o.seed = seed;
      o.parallelism = cfg.llm_parallelism;
      o.llm.templates = &templates;
      const auto r = run_definition_evaluation(load_definition_dataset(dataset), *generator,
                                               judge ? *judge : *generator, parse_shots(shots_text), o);
      std::cout << (eval_json ? to_json(r) + "\n" : format_definition_eval_table(r));
      for (const auto& e : r.errors) std::cerr << "error: item " << e.item_id << ": " << e.message << "\n";
      return 0;
    }

    if (*categories) {
      const auto cfg = load_config(config_path);
      auto client = require_client(cfg.llm, "llm");
      const auto templates =
          cfg.llm_templates ? PromptTemplates::load(*cfg.llm_templates) : PromptTemplates::defaults();
      LlmOptions o;
      o.templates = &templates;
      const auto r = run_category_evaluation(load_category_dataset(dataset), *client,
                                             parse_category_setup(setup_text), o);
      if (eval_json) {
        std::cout << to_json(r) << "\n";
      } else {
        std::cout << format_categorization_table({{"sentiment (" + setup_text + ")", r.sentiment},
                                                  {"domain (" + setup_text + ")", r.domain}});
      }
      for (const auto& e : r.errors) std::cerr << "error: item " << e.item_id << ": " << e.message << "\n";
      return 0;
    }

    if (*serve) {
      Application app(load_config(config_path));
      print_notices(app);
      const auto [host, port] = parse_addr(addr);
      ApiServer server(app.workbench());
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving on http://" << host << ":" << bound << std::endl;
      server.run();
      g_server = nullptr;
      return 0;
    }

    if (*exp) {
      Application app(load_config(config_path));
      Selection sel;
      if (!status_text.empty()) sel.status = parse_review_status(status_text);
      sel.stage = stage_text;
      const auto csv = app.workbench().export_csv(sel);
      write_file(out_path, csv);
      std::cout << "wrote " << parse_csv(csv).size() - 1 << " rows to " << out_path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
