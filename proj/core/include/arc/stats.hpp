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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arc::stats {

// Paired observations. Pairs with a missing side are dropped on
// construction and counted in `dropped`.
struct PairedSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> labels;
  std::size_t dropped = 0;

  PairedSeries() = default;
  PairedSeries(std::vector<double> xs, std::vector<double> ys);
  static PairedSeries from_optional(const std::vector<std::optional<double>>& xs,
                                    const std::vector<std::optional<double>>& ys);
  std::size_t size() const { return x.size(); }
};

enum class Method { kPearson, kKendallTauB };
std::string_view to_string(Method m);

struct CorrelationResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Method method = Method::kPearson;

  bool significant(double alpha = 0.05) const { return p_value < alpha; }
};

// Sample Pearson r; two-sided p from t = r sqrt((n-2)/(1-r^2)) on n-2 dof.
CorrelationResult pearson(const PairedSeries& series);

// Tau-b with tie correction; two-sided p from the normal approximation of
// the concordance statistic with the tie-adjusted variance.
CorrelationResult kendall_tau_b(const PairedSeries& series);

// (likert - 1) / 3 for the 4-point coverage scale.
double normalize_likert(int likert);

using ItemKey = std::pair<std::string, std::string>;  // (doc_id, system)
using MetricScores = std::map<ItemKey, std::optional<double>>;
using ExpertScores = std::map<std::string, std::map<ItemKey, int>>;  // expert -> Likert

struct AgreementResult {
  std::map<std::string, CorrelationResult> tau;  // per expert
  std::map<std::string, CorrelationResult> rho;
  CorrelationResult tau_corr_of_avg;  // against the mean expert score
  CorrelationResult rho_corr_of_avg;
  double tau_avg_of_corr = 0.0;  // mean of per-expert statistics
  double rho_avg_of_corr = 0.0;
  std::size_t dropped = 0;  // unjudged metric items
};

// Human scores are normalized to [0,1]. Every expert must score exactly the
// metric's item set, else AlignmentMismatch.
AgreementResult metric_human_agreement(const MetricScores& metric,
                                       const ExpertScores& human);

// CSV with columns expert, doc_id, system, likert.
ExpertScores read_expert_scores(const std::filesystem::path& path);

CorrelationResult position_coverage_correlation(
    const std::vector<std::pair<double, double>>& per_doc);

struct CorrelationRow {
  std::string method;
  std::string scope;
  std::string expert;
  std::optional<double> statistic;
  std::optional<double> p_value;
  std::size_t n = 0;
};

CorrelationRow to_row(const CorrelationResult& r, std::string scope,
                      std::string expert);

// correlations.csv: method, scope, expert, statistic, p_value, n, significant.
void write_correlations_csv(const std::vector<CorrelationRow>& rows,
                            const std::filesystem::path& path);

}  // namespace arc::stats
