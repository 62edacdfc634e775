// Copyright 2026 The ARC Authors.
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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "arc/cli/pipeline.hpp"

int main(int argc, char** argv) {
  arc::cli::RunConfig config;
  CLI::App app{"Argument role coverage evaluation for summaries"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; flags override it");

  std::string cache, human, length_policy;
  std::size_t budget = 0;
  app.add_option("--input", config.input, "corpus JSONL for ingest");
  app.add_option("--out", config.out, "output directory")->capture_default_str();
  app.add_option("--scheme", config.scheme, "role scheme id (irc, dri) or JSON file")
      ->capture_default_str();
  app.add_option("--judge", config.judge, "judge backend: lexical | remote:<model>@<url>")
      ->capture_default_str();
  app.add_option("--nli", config.nli, "entailment backend")->capture_default_str();
  app.add_option("--backend", config.generator, "summary generator backend")
      ->capture_default_str();
  app.add_option("--system", config.system, "system tag for generated summaries");
  app.add_option("--cache", cache, "verdict cache path (default <out>/cache.jsonl)");
  app.add_option("--parallel", config.parallel, "max concurrent judge calls")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--budget", budget, "max network calls per client");
  app.add_option("--policy", config.policy,
                 "saliency policy: all_roles | role_sentences_only | relevance_eq(k)")
      ->capture_default_str();
  app.add_option("--level", config.levels, "all or a comma list of fullset,role,atomic")
      ->capture_default_str();
  app.add_option("--control", config.control, "none | length | length,position")
      ->capture_default_str();
  app.add_option("--length-ratio", config.length_ratio)->capture_default_str();
  app.add_option("--edge", config.edge)->capture_default_str();
  app.add_option("--mass", config.mass)->capture_default_str();
  app.add_option("--human", human, "expert scores CSV (expert,doc_id,system,likert)");
  app.add_option("--rpm", config.rpm, "requests per minute, 0 for unlimited")
      ->capture_default_str();
  app.add_option("--max-retries", config.max_retries)->capture_default_str();
  app.add_option("--max-tokens", config.max_tokens, "generation token cap")
      ->capture_default_str();
  app.add_option("--length-policy", length_policy, "match_reference | longest_reference");

  const std::map<std::string_view, std::string> help{
      {"ingest", "validate the corpus and write corpus.jsonl and stats.csv"},
      {"generate", "add one generated summary per document"},
      {"decompose", "extract salient arguments and entailed atomic facts"},
      {"score", "judge summaries at the fullset, role and atomic levels"},
      {"bias", "role bias scores with length and position controls"},
      {"position", "greedy ROUGE-1 attribution and position histograms"},
      {"correlate", "position and human agreement correlations"},
      {"report", "report.json and figure tables"},
      {"run", "ingest through report with the configured backends"},
  };
  std::string command;
  app.require_subcommand(1);
  for (std::string_view name : arc::cli::kCommands) {
    auto* sub = app.add_subcommand(std::string(name), help.at(name));
    sub->fallthrough();
    sub->callback([&command, name] { command = std::string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!cache.empty()) config.cache = cache;
  if (!human.empty()) config.human = human;
  if (!length_policy.empty()) config.length_policy = length_policy;
  if (app.count("--budget")) config.budget = budget;

  return arc::cli::run_guarded(command, config, std::cerr, std::cerr);
}
