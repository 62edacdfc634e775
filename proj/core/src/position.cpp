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

#include "arc/position.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <unordered_map>

#include "arc/csv.hpp"
#include "arc/error.hpp"
#include "arc/scoring.hpp"
#include "arc/text.hpp"

namespace arc::position {

namespace {

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'));
}

std::string fixed(double v, int places) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

}  // namespace

std::vector<std::string> rouge_tokens(std::string_view input) {
  std::vector<std::string> out;
  for (const std::string& w : text::words(input)) {
    std::string t;
    for (char c : text::ascii_lower(w)) {
      if (!is_ascii_punct(static_cast<unsigned char>(c))) t.push_back(c);
    }
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

Rational rouge1(const std::vector<std::string>& candidate,
                const std::vector<std::string>& target) {
  std::size_t denom = candidate.size() + target.size();
  if (denom == 0) return 0;
  std::unordered_map<std::string, long long> want;
  for (const std::string& t : target) ++want[t];
  long long overlap = 0;
  for (const std::string& c : candidate) {
    auto it = want.find(c);
    if (it != want.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return Rational(2 * overlap, static_cast<long long>(denom));
}

Rational rouge1(std::string_view candidate, std::string_view target) {
  return rouge1(rouge_tokens(candidate), rouge_tokens(target));
}

AttributionResult greedy_select(const std::vector<corpus::Sentence>& sentences,
                                std::string_view target,
                                const std::optional<std::set<int>>& restrict_to) {
  AttributionResult result;
  result.final_rouge1 = 0;
  auto target_tokens = rouge_tokens(target);
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(sentences.size());
  for (const corpus::Sentence& s : sentences) tokens.push_back(rouge_tokens(s.text));

  std::vector<bool> used(sentences.size(), false);
  std::vector<std::string> selected;
  Rational best = 0;
  for (;;) {
    std::optional<std::size_t> pick;
    Rational pick_score = best;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (used[i]) continue;
      if (restrict_to && !restrict_to->count(sentences[i].idx)) continue;
      std::vector<std::string> trial = selected;
      trial.insert(trial.end(), tokens[i].begin(), tokens[i].end());
      Rational score = rouge1(trial, target_tokens);
      if (score > pick_score) {
        pick_score = score;
        pick = i;
      }
    }
    if (!pick) break;
    used[*pick] = true;
    selected.insert(selected.end(), tokens[*pick].begin(), tokens[*pick].end());
    best = pick_score;
    result.selected_indices.push_back(sentences[*pick].idx);
    result.step_scores.push_back(best);
  }
  result.final_rouge1 = best;
  return result;
}

double relative_position(std::size_t idx, std::size_t n_sentences) {
  if (n_sentences == 0 || idx >= n_sentences) {
    throw IndexOutOfRange("sentence index " + std::to_string(idx) + " outside document of " +
                          std::to_string(n_sentences) + " sentences");
  }
  if (n_sentences == 1) return 0.5;
  return static_cast<double>(idx) / static_cast<double>(n_sentences - 1);
}

double argument_position(const corpus::ArgumentUnit& argument, std::size_t n_sentences) {
  if (argument.sentence_indices.empty()) {
    throw IndexOutOfRange("argument " + argument.arg_id + " has no sentences");
  }
  double total = 0.0;
  for (int idx : argument.sentence_indices) {
    total += relative_position(static_cast<std::size_t>(idx), n_sentences);
  }
  return total / static_cast<double>(argument.sentence_indices.size());
}

std::size_t bin_of(double position) {
  if (position <= 0.0) return 0;
  auto bin = static_cast<std::size_t>(position * static_cast<double>(kBins));
  return std::min(bin, kBins - 1);
}

double PositionProfile::share(std::size_t bin) const {
  if (positions.empty()) return 0.0;
  return static_cast<double>(histogram.at(bin)) / static_cast<double>(positions.size());
}

double PositionProfile::outer_share() const {
  return share(0) + share(1) + share(kBins - 2) + share(kBins - 1);
}

namespace {

void add(PositionProfile& p, double pos) {
  p.positions.push_back(pos);
  ++p.histogram[bin_of(pos)];
}

void finish(PositionProfile& p) {
  if (p.positions.empty()) return;
  double total = 0.0;
  std::vector<double> sorted = p.positions;
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) total += v;
  p.mean_position = total / static_cast<double>(sorted.size());
}

}  // namespace

std::map<std::string, PositionProfile> position_profile(const std::vector<PositionItem>& items) {
  std::map<std::string, PositionProfile> out;
  out[std::string(kOverall)];
  for (const PositionItem& item : items) {
    double pos = relative_position(item.idx, item.n_sentences);
    add(out[std::string(kOverall)], pos);
    if (item.role) add(out[*item.role], pos);
  }
  for (auto& [role, p] : out) finish(p);
  return out;
}

std::vector<corpus::ArgumentUnit> greedy_matched_arguments(
    const corpus::DocumentRecord& doc, const std::vector<corpus::ArgumentUnit>& arguments,
    std::string_view target) {
  std::set<int> allowed;
  for (const corpus::ArgumentUnit& a : arguments) {
    allowed.insert(a.sentence_indices.begin(), a.sentence_indices.end());
  }
  auto picked = greedy_select(doc.sentences, target, allowed);
  std::set<int> chosen(picked.selected_indices.begin(), picked.selected_indices.end());
  std::vector<corpus::ArgumentUnit> out;
  for (const corpus::ArgumentUnit& a : arguments) {
    bool hit = std::any_of(a.sentence_indices.begin(), a.sentence_indices.end(),
                           [&](int i) { return chosen.count(i) > 0; });
    if (hit) out.push_back(a);
  }
  return out;
}

double mean_salient_position(const corpus::DocumentRecord& doc,
                             const corpus::SaliencyPolicy& policy) {
  auto arguments = corpus::extract_salient(doc, policy);
  std::vector<double> positions;
  const std::size_t n = doc.sentences.size();
  if (policy.kind == corpus::SaliencyPolicy::Kind::kRelevanceEq) {
    for (const auto& a : arguments) positions.push_back(argument_position(a, n));
  } else {
    for (const corpus::SummaryRecord& ref : doc.reference_summaries) {
      for (const auto& a : greedy_matched_arguments(doc, arguments, ref.text)) {
        positions.push_back(argument_position(a, n));
      }
    }
  }
  if (positions.empty()) throw NoSalientArguments("document " + doc.doc_id + " has no salient arguments");
  double total = 0.0;
  for (double p : positions) total += p;
  return total / static_cast<double>(positions.size());
}

std::vector<PositionRow> attribute_positions(const corpus::DocumentRecord& doc) {
  std::vector<PositionRow> rows;
  const std::size_t n = doc.sentences.size();
  for (const auto& [system, summary] : scoring::summaries_to_score(doc)) {
    auto picked = greedy_select(doc.sentences, summary->text);
    std::vector<int> ordered = picked.selected_indices;
    std::sort(ordered.begin(), ordered.end());
    for (int idx : ordered) {
      const corpus::Sentence& s = doc.sentences.at(static_cast<std::size_t>(idx));
      double pos = relative_position(static_cast<std::size_t>(idx), n);
      if (s.roles.empty()) {
        rows.push_back({doc.doc_id, system, "none", pos});
      }
      for (const std::string& role : s.roles) rows.push_back({doc.doc_id, system, role, pos});
    }
  }
  return rows;
}

std::map<std::string, std::map<std::string, PositionProfile>> profiles_by_system(
    const std::vector<PositionRow>& rows) {
  std::map<std::string, std::map<std::string, PositionProfile>> out;
  // A sentence with several roles yields several rows; count it once overall.
  std::set<std::tuple<std::string, std::string, double>> seen;
  for (const PositionRow& r : rows) {
    auto& per_role = out[r.system];
    if (seen.emplace(r.doc_id, r.system, r.relative_position).second) {
      add(per_role[std::string(kOverall)], r.relative_position);
    }
    if (r.role != "none") add(per_role[r.role], r.relative_position);
  }
  for (auto& [system, per_role] : out) {
    for (auto& [role, p] : per_role) finish(p);
  }
  return out;
}

void write_positions_csv(const std::vector<PositionRow>& rows,
                         const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"doc_id", "system", "role", "relative_position"};
  for (const PositionRow& r : rows) {
    t.rows.push_back({r.doc_id, r.system, r.role, fixed(r.relative_position, 4)});
  }
  csv::write(path, t);
}

void write_histogram_csv(
    const std::map<std::string, std::map<std::string, PositionProfile>>& profiles,
    const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"system", "role", "bin_lo", "bin_hi", "count", "share"};
  for (const auto& [system, per_role] : profiles) {
    for (const auto& [role, p] : per_role) {
      for (std::size_t b = 0; b < kBins; ++b) {
        t.rows.push_back({system, role, fixed(static_cast<double>(b) / kBins, 1),
                          fixed(static_cast<double>(b + 1) / kBins, 1),
                          std::to_string(p.histogram[b]), fixed(p.share(b), 4)});
      }
    }
  }
  csv::write(path, t);
}

}  // namespace arc::position
