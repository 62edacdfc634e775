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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "arc/corpus.hpp"
#include "arc/rational.hpp"

namespace arc::position {

// Lowercased whitespace tokens with punctuation stripped. No stemming and no
// stopword removal.
std::vector<std::string> rouge_tokens(std::string_view text);

// ROUGE-1 F1 with clipped unigram counts: 2 * overlap / (|cand| + |target|).
Rational rouge1(std::string_view candidate, std::string_view target);
Rational rouge1(const std::vector<std::string>& candidate_tokens,
                const std::vector<std::string>& target_tokens);

struct AttributionResult {
  std::string doc_id;
  std::string summary_system;
  std::vector<int> selected_indices;  // in selection order
  Rational final_rouge1;
  std::vector<Rational> step_scores;  // strictly increasing
};

// Greedily adds the sentence whose inclusion maximizes ROUGE-1 of the
// selected set (in document order) against `target`; stops when no sentence
// strictly improves it. Ties go to the lowest index. When `restrict_to` is
// set, only those sentence indices are candidates.
AttributionResult greedy_select(const std::vector<corpus::Sentence>& sentences,
                                std::string_view target,
                                const std::optional<std::set<int>>& restrict_to = {});

// idx / (n - 1), or 0.5 for a one-sentence document.
double relative_position(std::size_t idx, std::size_t n_sentences);

// Mean relative position of an argument's sentences.
double argument_position(const corpus::ArgumentUnit& argument,
                         std::size_t n_sentences);

inline constexpr std::size_t kBins = 10;

// Bin i covers [i/10, (i+1)/10); position 1.0 lands in the last bin.
std::size_t bin_of(double position);

struct PositionItem {
  std::size_t idx = 0;
  std::size_t n_sentences = 1;
  std::optional<std::string> role;
};

struct PositionProfile {
  std::vector<double> positions;
  std::array<std::size_t, kBins> histogram{};
  double mean_position = 0.0;

  double share(std::size_t bin) const;
  // Share of mass in bins 0-1 and 8-9, i.e. the outer 20% bands.
  double outer_share() const;
};

inline constexpr std::string_view kOverall = "*";

// Keyed by role name, plus kOverall for every item. Items without a role only
// count toward kOverall.
std::map<std::string, PositionProfile> position_profile(
    const std::vector<PositionItem>& items);

// Salient arguments whose sentences greedy ROUGE-1 attribution picks when
// the selection is restricted to argument sentences.
std::vector<corpus::ArgumentUnit> greedy_matched_arguments(
    const corpus::DocumentRecord& doc,
    const std::vector<corpus::ArgumentUnit>& arguments, std::string_view target);

// relevance_eq policies average the relevance-filtered arguments directly.
// Other policies average the arguments matched by greedy attribution against
// each reference summary (pooled).
double mean_salient_position(const corpus::DocumentRecord& doc,
                             const corpus::SaliencyPolicy& policy);

struct PositionRow {
  std::string doc_id;
  std::string system;
  std::string role;  // "none" for sentences without a role
  double relative_position = 0.0;
};

// Greedy attribution of every scored summary (references included) over the
// whole document, one row per (selected sentence, role).
std::vector<PositionRow> attribute_positions(const corpus::DocumentRecord& doc);

// Per system and role, using PositionRow entries.
std::map<std::string, std::map<std::string, PositionProfile>> profiles_by_system(
    const std::vector<PositionRow>& rows);

void write_positions_csv(const std::vector<PositionRow>& rows,
                         const std::filesystem::path& path);
void write_histogram_csv(
    const std::map<std::string, std::map<std::string, PositionProfile>>& profiles,
    const std::filesystem::path& path);

}  // namespace arc::position
