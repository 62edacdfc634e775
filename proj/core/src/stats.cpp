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

#include "arc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "arc/csv.hpp"
#include "arc/error.hpp"

namespace arc::stats {

namespace {

void require_size(const PairedSeries& s) {
  if (s.x.size() != s.y.size()) throw AlignmentMismatch("series lengths differ");
  if (s.size() < 3) throw DegenerateSeries("need at least 3 pairs, got " + std::to_string(s.size()));
}

// Sum over tie groups of f(group size).
template <typename F>
double tie_sum(std::vector<double> v, F f) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    total += f(static_cast<double>(j - i));
    i = j;
  }
  return total;
}

std::string format(double v, const char* pattern) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

PairedSeries::PairedSeries(std::vector<double> xs, std::vector<double> ys)
    : x(std::move(xs)), y(std::move(ys)) {
  if (x.size() != y.size()) throw AlignmentMismatch("series lengths differ");
}

PairedSeries PairedSeries::from_optional(const std::vector<std::optional<double>>& xs,
                                         const std::vector<std::optional<double>>& ys) {
  if (xs.size() != ys.size()) throw AlignmentMismatch("series lengths differ");
  PairedSeries s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] && ys[i]) {
      s.x.push_back(*xs[i]);
      s.y.push_back(*ys[i]);
    } else {
      ++s.dropped;
    }
  }
  return s;
}

std::string_view to_string(Method m) {
  return m == Method::kPearson ? "pearson" : "kendall_tau_b";
}

CorrelationResult pearson(const PairedSeries& s) {
  require_size(s);
  const auto n = static_cast<long double>(s.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    mx += s.x[i];
    my += s.y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    long double dx = s.x[i] - mx, dy = s.y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw DegenerateSeries("zero variance");
  double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  r = std::clamp(r, -1.0, 1.0);

  CorrelationResult out;
  out.method = Method::kPearson;
  out.n = s.size();
  out.statistic = r;
  double df = static_cast<double>(s.size()) - 2.0;
  if (std::abs(r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    double t = r * std::sqrt(df / (1.0 - r * r));
    boost::math::students_t dist(df);
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  }
  return out;
}

CorrelationResult kendall_tau_b(const PairedSeries& s) {
  require_size(s);
  const std::size_t n = s.size();
  long long concordant_minus_discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = s.x[i] - s.x[j], dy = s.y[i] - s.y[j];
      double sign = (dx > 0) - (dx < 0);
      sign *= (dy > 0) - (dy < 0);
      concordant_minus_discordant += static_cast<long long>(sign);
    }
  }
  const double nd = static_cast<double>(n);
  const double n0 = nd * (nd - 1) / 2;
  const double n1 = tie_sum(s.x, [](double t) { return t * (t - 1) / 2; });
  const double n2 = tie_sum(s.y, [](double t) { return t * (t - 1) / 2; });
  if (n0 == n1 || n0 == n2) throw DegenerateSeries("one series is constant");

  const auto cd = static_cast<double>(concordant_minus_discordant);
  CorrelationResult out;
  out.method = Method::kKendallTauB;
  out.n = n;
  out.statistic = std::clamp(cd / std::sqrt((n0 - n1) * (n0 - n2)), -1.0, 1.0);

  const double m = nd * (nd - 1);
  const double x0 = tie_sum(s.x, [](double t) { return t * (t - 1) * (t - 2); });
  const double y0 = tie_sum(s.y, [](double t) { return t * (t - 1) * (t - 2); });
  const double x1 = tie_sum(s.x, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double y1 = tie_sum(s.y, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double var = (m * (2 * nd + 5) - x1 - y1) / 18 + (2 * n1 * n2) / m +
                     x0 * y0 / (9 * m * (nd - 2));
  const double z = cd / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return out;
}

double normalize_likert(int likert) {
  if (likert < 1 || likert > 4) throw OutOfRangeLikert(likert);
  return (likert - 1) / 3.0;
}

AgreementResult metric_human_agreement(const MetricScores& metric, const ExpertScores& human) {
  if (human.empty()) throw AlignmentMismatch("no expert scores");
  std::set<ItemKey> items;
  for (const auto& [key, value] : metric) items.insert(key);
  for (const auto& [expert, scores] : human) {
    std::set<ItemKey> theirs;
    for (const auto& [key, value] : scores) theirs.insert(key);
    if (theirs != items) {
      throw AlignmentMismatch("expert '" + expert + "' scored " + std::to_string(theirs.size()) +
                              " items; metric has " + std::to_string(items.size()));
    }
  }

  AgreementResult out;
  std::vector<double> metric_values;
  std::vector<ItemKey> kept;
  for (const auto& [key, value] : metric) {
    if (!value) {
      ++out.dropped;
      continue;
    }
    kept.push_back(key);
    metric_values.push_back(*value);
  }

  std::vector<double> mean(kept.size(), 0.0);
  double tau_total = 0.0, rho_total = 0.0;
  for (const auto& [expert, scores] : human) {
    std::vector<double> h;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      h.push_back(normalize_likert(scores.at(kept[i])));
      mean[i] += h.back();
    }
    PairedSeries series(metric_values, h);
    out.tau[expert] = kendall_tau_b(series);
    out.rho[expert] = pearson(series);
    tau_total += out.tau[expert].statistic;
    rho_total += out.rho[expert].statistic;
  }
  const auto experts = static_cast<double>(human.size());
  for (double& v : mean) v /= experts;
  PairedSeries avg(metric_values, mean);
  out.tau_corr_of_avg = kendall_tau_b(avg);
  out.rho_corr_of_avg = pearson(avg);
  out.tau_avg_of_corr = tau_total / experts;
  out.rho_avg_of_corr = rho_total / experts;
  return out;
}

ExpertScores read_expert_scores(const std::filesystem::path& path) {
  csv::Table t = csv::read(path);
  auto col = [&](const char* name) {
    int i = t.column(name);
    if (i < 0) throw ValidationError(path.filename().string() + " lacks column '" + name + "'");
    return static_cast<std::size_t>(i);
  };
  const std::size_t expert = col("expert"), doc = col("doc_id"), system = col("system"),
                    likert = col("likert");
  ExpertScores out;
  std::size_t line = 1;
  for (const csv::Row& row : t.rows) {
    ++line;
    if (row.size() != t.header.size()) throw MalformedRecord(line, "wrong number of columns");
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(row[likert], &used);
      if (used != row[likert].size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw MalformedRecord(line, "likert '" + row[likert] + "' is not an integer");
    }
    if (value < 1 || value > 4) throw OutOfRangeLikert(value);
    auto [it, inserted] = out[row[expert]].emplace(ItemKey{row[doc], row[system]}, value);
    if (!inserted) throw MalformedRecord(line, "duplicate score for " + row[doc] + "/" + row[system]);
  }
  return out;
}

CorrelationResult position_coverage_correlation(
    const std::vector<std::pair<double, double>>& per_doc) {
  PairedSeries s;
  for (const auto& [position, coverage] : per_doc) {
    s.x.push_back(position);
    s.y.push_back(coverage);
  }
  return pearson(s);
}

CorrelationRow to_row(const CorrelationResult& r, std::string scope, std::string expert) {
  return {std::string(to_string(r.method)), std::move(scope), std::move(expert), r.statistic,
          r.p_value, r.n};
}

void write_correlations_csv(const std::vector<CorrelationRow>& rows,
                            const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"method", "scope", "expert", "statistic", "p_value", "n", "significant"};
  for (const CorrelationRow& r : rows) {
    t.rows.push_back({r.method, r.scope, r.expert,
                      r.statistic ? format(*r.statistic, "%.4f") : "",
                      r.p_value ? format(*r.p_value, "%.6g") : "", std::to_string(r.n),
                      r.p_value ? (*r.p_value < 0.05 ? "true" : "false") : ""});
  }
  csv::write(path, t);
}

}  // namespace arc::stats
