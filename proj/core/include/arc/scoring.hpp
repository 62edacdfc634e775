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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arc/corpus.hpp"
#include "arc/decompose.hpp"
#include "arc/judge.hpp"
#include "arc/rational.hpp"

namespace arc::scoring {

enum class Level { kFullset, kRole, kAtomic };
std::string_view to_string(Level level);

// One judge decision about one target. An empty verdict marks an item whose
// response never parsed; it is excluded from every denominator.
struct VerdictRecord {
  std::string doc_id;
  Level level = Level::kAtomic;
  std::string target;  // "fullset", an arg_id, or a fact_id
  std::string arg_id;  // owning argument for role and atomic records
  std::string summary_system;
  std::string judged_by;
  std::optional<judge::Verdict> verdict;

  bool judged() const { return verdict.has_value(); }
};

// (likert - 1) / 3.
Rational phi_fullset(int likert);

// Renders arguments one per line as "<role>: <text>".
std::string format_argument_set(const std::vector<corpus::ArgumentUnit>& arguments);

Rational score_fullset(const std::vector<corpus::ArgumentUnit>& arguments,
                       const corpus::SummaryRecord& summary,
                       judge::JudgeClient& judge);

struct RoleResult {
  std::optional<Rational> mean;  // empty when nothing was judged
  std::vector<VerdictRecord> records;
  std::size_t unjudged = 0;
};

RoleResult score_role(const std::vector<corpus::ArgumentUnit>& arguments,
                      const corpus::SummaryRecord& summary,
                      judge::JudgeClient& judge, std::size_t parallelism = 1);

struct AtomicResult {
  std::optional<Rational> score;
  std::vector<VerdictRecord> records;
  std::size_t unjudged = 0;
};

AtomicResult score_atomic(const std::vector<corpus::ArgumentUnit>& arguments,
                          const decompose::FactSet& facts,
                          const corpus::SummaryRecord& summary,
                          judge::JudgeClient& judge, std::size_t parallelism = 1);

// Macro mean over arguments of the per-argument supported fraction, using
// judged records only. Arguments rejected by `include` are skipped; so are
// arguments with no judged fact.
std::optional<Rational> atomic_mean(
    const std::vector<VerdictRecord>& records,
    const std::function<bool(const std::string& arg_id)>& include = {});

// Mean of judged role decisions.
std::optional<Rational> role_mean(const std::vector<VerdictRecord>& records);

// Pooled share of supported facts over all judged fact records.
std::optional<Rational> pooled_atomic(const std::vector<VerdictRecord>& records);

struct ErrorDistribution {
  std::size_t supported = 0;
  std::size_t missing = 0;
  std::size_t not_factual = 0;

  std::size_t total() const { return supported + missing + not_factual; }
  Rational share(judge::ErrorTag tag) const;  // zero when empty
};

ErrorDistribution aggregate_errors(const std::vector<VerdictRecord>& records);
std::map<std::string, ErrorDistribution> aggregate_errors_by_system(
    const std::vector<VerdictRecord>& records);

// Nested atomic mean restricted to arguments of one role.
Rational per_role_atomic(const std::vector<corpus::ArgumentUnit>& arguments,
                         const std::vector<VerdictRecord>& records,
                         const std::string& role);

struct ScoreCard {
  std::string doc_id;
  std::string summary_system;
  std::optional<Rational> arc_fullset;
  std::optional<Rational> arc_role;
  std::optional<Rational> arc_atomic;
  std::map<std::string, Rational> per_role_atomic;
  ErrorDistribution errors;
  std::map<std::string, ErrorDistribution> per_role_errors;
  std::size_t unjudged = 0;
};

struct LevelSet {
  bool fullset = true;
  bool role = true;
  bool atomic = true;
  // "all" or a comma list of fullset, role, atomic.
  static LevelSet parse(std::string_view text);
};

struct DocumentScore {
  ScoreCard card;
  std::vector<VerdictRecord> records;
};

DocumentScore score_summary(const std::string& doc_id,
                            const std::vector<corpus::ArgumentUnit>& arguments,
                            const decompose::FactSet* facts,
                            const corpus::SummaryRecord& summary,
                            const std::string& system, judge::JudgeClient& judge,
                            const LevelSet& levels, std::size_t parallelism = 1);

// Rebuilds a card from stored records.
ScoreCard build_card(const std::string& doc_id, const std::string& system,
                     const std::vector<corpus::ArgumentUnit>& arguments,
                     const std::vector<VerdictRecord>& records);

// Corpus-level aggregation per system: unweighted mean of per-document scores
// and the pooled score over all judged items.
struct CorpusScore {
  std::string system;
  Level level = Level::kAtomic;
  std::optional<Rational> mean_doc;
  std::optional<Rational> pooled;
  std::size_t docs = 0;
};

std::vector<CorpusScore> aggregate_corpus(const std::vector<ScoreCard>& cards,
                                          const std::vector<VerdictRecord>& records);

// Scoring systems for a document: "reference" (or "reference#k" when a
// document has several references) followed by each generated system.
std::vector<std::pair<std::string, const corpus::SummaryRecord*>> summaries_to_score(
    const corpus::DocumentRecord& doc);

// verdicts.jsonl
nlohmann::json to_json(const VerdictRecord& record);
VerdictRecord verdict_record_from_json(const nlohmann::json& j);
void write_verdicts(const std::vector<VerdictRecord>& records,
                    const std::filesystem::path& path);
std::vector<VerdictRecord> read_verdicts(const std::filesystem::path& path);

// scores.csv: one row per (doc, system) with role "*", then one per role.
void write_scores_csv(const std::vector<ScoreCard>& cards,
                      const std::filesystem::path& path);

}  // namespace arc::scoring
