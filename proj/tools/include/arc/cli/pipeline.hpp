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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arc::cli {

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path out = "arc_out";
  std::string scheme = "irc";
  std::string judge = "lexical";
  std::string nli = "lexical";
  std::string generator = "lexical";
  std::string system;  // tag for generated summaries; defaults to the backend id
  std::optional<std::filesystem::path> cache;  // defaults to <out>/cache.jsonl
  std::size_t parallel = 4;
  std::optional<std::size_t> budget;
  std::string policy = "all_roles";
  std::string levels = "all";
  std::string control = "length,position";
  double length_ratio = 0.2;
  double edge = 0.2;
  double mass = 0.8;
  std::optional<std::filesystem::path> human;
  double rpm = 0.0;
  int max_retries = 2;
  int max_tokens = 2048;
  std::optional<std::string> length_policy;

  std::filesystem::path artifact(std::string_view name) const { return out / name; }
  std::filesystem::path cache_path() const;
};

inline const std::vector<std::string_view> kCommands = {
    "ingest", "generate", "decompose", "score", "bias", "position", "correlate", "report", "run"};

void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_generate(const RunConfig& config, std::ostream& log);
void cmd_decompose(const RunConfig& config, std::ostream& log);
void cmd_score(const RunConfig& config, std::ostream& log);
void cmd_bias(const RunConfig& config, std::ostream& log);
void cmd_position(const RunConfig& config, std::ostream& log);
void cmd_correlate(const RunConfig& config, std::ostream& log);
void cmd_report(const RunConfig& config, std::ostream& log);
// ingest, decompose, score, bias, position, correlate, report.
void cmd_run(const RunConfig& config, std::ostream& log);

void dispatch(std::string_view command, const RunConfig& config, std::ostream& log);

// Runs a command and maps failures to exit codes: 0 ok, 1 internal,
// 2 validation, 3 auth or transport, 4 budget.
int run_guarded(std::string_view command, const RunConfig& config, std::ostream& log,
                std::ostream& err);

}  // namespace arc::cli
