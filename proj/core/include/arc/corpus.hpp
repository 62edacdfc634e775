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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "arc/rational.hpp"

namespace arc::corpus {

// A named set of argument roles. Role names are lowercase and trimmed.
struct RoleScheme {
  std::string scheme_id;
  std::vector<std::string> roles;

  bool contains(std::string_view role) const;
};

// Built-in schemes: "irc" (issue, reason, conclusion) for legal opinions and
// "dri" (own_claim, background_claim, data) for scientific articles.
RoleScheme builtin_scheme(std::string_view scheme_id);
// Reads {"scheme_id": str, "roles": [str]}.
RoleScheme load_scheme(const std::filesystem::path& path);
// A built-in id, or else a path to a scheme file.
RoleScheme resolve_scheme(std::string_view id_or_path);

struct Sentence {
  int idx = 0;
  std::string text;
  std::vector<std::string> roles;  // sorted, unique
  std::optional<int> relevance;    // Likert 1..5

  bool has_role(std::string_view role) const;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Optional role annotation on a reference summary sentence.
struct SummarySentence {
  std::string text;
  std::vector<std::string> roles;
  friend bool operator==(const SummarySentence&, const SummarySentence&) = default;
};

struct SummaryRecord {
  std::string system;
  std::string text;
  std::vector<SummarySentence> sentences;

  std::size_t word_count() const;
  friend bool operator==(const SummaryRecord&, const SummaryRecord&) = default;
};

// Character offsets are code points into DocumentRecord::plain_text().
struct SpanAnnotation {
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string role;
  friend bool operator==(const SpanAnnotation&, const SpanAnnotation&) = default;
};

struct DocumentRecord {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<SummaryRecord> reference_summaries;
  std::vector<SummaryRecord> generated_summaries;
  std::vector<SpanAnnotation> spans;

  // Sentence texts joined by a single space.
  std::string plain_text() const;
  std::size_t word_count() const;
  bool has_relevance() const;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};


struct Corpus {
  RoleScheme scheme;
  std::vector<DocumentRecord> documents;

  const DocumentRecord* find(std::string_view doc_id) const;
};

struct ArgumentUnit {
  std::string arg_id;
  std::string doc_id;
  std::string role;
  std::string text;
  std::vector<int> sentence_indices;  // sorted, non-empty

  std::size_t word_count() const;
  friend bool operator==(const ArgumentUnit&, const ArgumentUnit&) = default;
};

// JSONL I/O. One document per line; blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path, const RoleScheme& scheme);
Corpus parse_corpus(std::istream& in, const RoleScheme& scheme);
DocumentRecord parse_document(const nlohmann::json& record, std::size_t line,
                              const RoleScheme& scheme);
nlohmann::json to_json(const DocumentRecord& doc);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Assigns each span's role to the sentence holding a strict majority of the
// span's words. A word sits in the sentence containing its midpoint.
std::vector<std::pair<int, std::string>> map_spans_to_sentences(
    const DocumentRecord& doc, const std::vector<SpanAnnotation>& spans);

struct SaliencyPolicy {
  enum class Kind { kAllRoles, kRelevanceEq, kRoleSentencesOnly };
  Kind kind = Kind::kAllRoles;
  int relevance = 5;

  static SaliencyPolicy all_roles() { return {}; }
  static SaliencyPolicy relevance_eq(int k) { return {Kind::kRelevanceEq, k}; }
  static SaliencyPolicy role_sentences_only() {
    return {Kind::kRoleSentencesOnly, 5};
  }
  // "all_roles", "role_sentences_only", "relevance_eq(5)" or "relevance_eq:5".
  static SaliencyPolicy parse(std::string_view text);
  std::string to_string() const;
};

// all_roles merges runs of consecutive sentences sharing a role into one unit;
// the other policies emit one unit per (sentence, role).
std::vector<ArgumentUnit> extract_salient(const DocumentRecord& doc,
                                          const SaliencyPolicy& policy);

// arguments.jsonl: one unit per line in extraction order.
nlohmann::json to_json(const ArgumentUnit& unit);
ArgumentUnit argument_from_json(const nlohmann::json& j);
void write_arguments(const std::vector<ArgumentUnit>& units, const std::filesystem::path& path);
std::vector<ArgumentUnit> read_arguments(const std::filesystem::path& path);

// Share of relevance == level sentences that carry at least one role.
Rational role_share_at_relevance(const Corpus& corpus, int level);

struct LengthSummary {
  std::size_t min = 0;
  double mean = 0.0;
  std::size_t max = 0;
};

struct CorpusStats {
  std::size_t docs = 0;
  LengthSummary input_length;
  LengthSummary summary_length;
  Rational pct_roles_input;
  std::optional<Rational> pct_roles_summary;  // needs summary annotations
};

CorpusStats corpus_stats(const Corpus& corpus);

// Word target for generating a summary of `doc`.
enum class LengthPolicy { kMatchReference, kLongestReference };
LengthPolicy parse_length_policy(std::string_view text);
std::string to_string(LengthPolicy policy);
// Corpora with several references per document (DRI-style) use the longest.
LengthPolicy infer_length_policy(const Corpus& corpus);
std::size_t target_length(const DocumentRecord& doc, LengthPolicy policy);

}  // namespace arc::corpus
