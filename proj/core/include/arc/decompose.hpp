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
#include <map>
#include <string>
#include <vector>

#include "arc/corpus.hpp"
#include "arc/judge.hpp"

namespace arc::decompose {

struct AtomicFact {
  std::string fact_id;
  std::string arg_id;
  int ordinal = 0;  // 1-based position in the judge's fact map; 0 for fallback
  std::string text;
  bool entailed = false;
  bool fallback = false;
  std::string backend_id;

  friend bool operator==(const AtomicFact&, const AtomicFact&) = default;
};

// Candidate facts from the decomposition prompt. Duplicates (by normalized
// text) are dropped and ordinals renumbered 1..k. An empty fact map counts
// as an unparseable verdict.
std::vector<AtomicFact> decompose_argument(const corpus::ArgumentUnit& argument,
                                           judge::JudgeClient& judge);

// Sets `entailed` on each candidate using premise = argument text,
// hypothesis = fact text.
std::vector<AtomicFact> mark_entailment(const corpus::ArgumentUnit& argument,
                                        std::vector<AtomicFact> candidates,
                                        judge::JudgeClient& nli);

// Facts that survive the entailment filter. When none survive, a single
// fallback fact carrying the argument text is returned instead.
std::vector<AtomicFact> filter_entailed(const corpus::ArgumentUnit& argument,
                                        std::vector<AtomicFact> candidates,
                                        judge::JudgeClient& nli);

AtomicFact fallback_fact(const corpus::ArgumentUnit& argument,
                         const std::string& backend_id);

struct FactSet {
  // Every candidate (kept or not) plus any fallback, sorted by ordinal.
  std::map<std::string, std::vector<AtomicFact>> by_argument;
  // Arguments whose decomposition failed, with the reason.
  std::map<std::string, std::string> failures;
  std::string judge_backend;
  std::string nli_backend;

  // Entailed facts of one argument (the scoring set M_i).
  std::vector<AtomicFact> kept(const std::string& arg_id) const;
  std::size_t size() const { return by_argument.size(); }
};

FactSet decompose_all(const std::vector<corpus::ArgumentUnit>& arguments,
                      judge::JudgeClient& judge, judge::JudgeClient& nli,
                      std::size_t parallelism = 1);

// facts.jsonl: {"arg_id","fact_id","ordinal","text","entailed","fallback",
// "backend_id"}, one fact per line, sorted by (arg_id, ordinal).
void write_facts(const FactSet& facts, const std::filesystem::path& path);
FactSet read_facts(const std::filesystem::path& path);

}  // namespace arc::decompose
