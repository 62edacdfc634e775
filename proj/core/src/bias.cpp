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

#include "arc/bias.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "arc/csv.hpp"
#include "arc/error.hpp"
#include "arc/position.hpp"

namespace arc::bias {

namespace {

constexpr double kEps = 1e-9;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Nested atomic mean over the given role's arguments, restricted to `ids`.
std::optional<Rational> role_score(const std::vector<scoring::VerdictRecord>& records,
                                   const std::set<std::string>& ids) {
  return scoring::atomic_mean(records, [&](const std::string& id) { return ids.count(id) > 0; });
}

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::kRaw ? "raw" : "normalized"; }

std::string_view to_string(Control c) {
  switch (c) {
    case Control::kNone: return "none";
    case Control::kLength: return "length";
    case Control::kLengthAndPosition: return "length_and_position";
  }
  return "";
}

std::string_view to_string(Scope s) { return s == Scope::kDoc ? "doc" : "corpus"; }

Rational prior_fraction(std::string_view role, const std::vector<corpus::ArgumentUnit>& scope) {
  if (scope.empty()) throw NoArguments();
  auto n = std::count_if(scope.begin(), scope.end(),
                         [&](const corpus::ArgumentUnit& a) { return a.role == role; });
  return Rational(static_cast<long long>(n), static_cast<long long>(scope.size()));
}

double beta(double arc_atomic_role, double fraction) {
  if (!(fraction > 0.0)) throw ZeroFraction();
  return arc_atomic_role / std::log1p(fraction);
}

double beta_raw(double arc_atomic_role) { return arc_atomic_role; }

std::vector<std::vector<std::size_t>> length_groups(std::span<const std::size_t> lengths,
                                                    double ratio) {
  if (!(ratio > 0.0)) throw ValidationError("length ratio must be positive");
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  std::vector<std::vector<std::size_t>> groups;
  double limit = 0.0;
  for (std::size_t i : order) {
    auto len = static_cast<double>(lengths[i]);
    if (groups.empty() || len > limit + kEps) {
      groups.emplace_back();
      limit = (1.0 + ratio) * len;
    }
    groups.back().push_back(i);
  }
  return groups;
}

std::vector<std::vector<corpus::ArgumentUnit>> length_control_groups(
    const std::vector<corpus::ArgumentUnit>& arguments, double ratio) {
  std::vector<std::size_t> lengths;
  lengths.reserve(arguments.size());
  for (const auto& a : arguments) lengths.push_back(a.word_count());
  std::vector<std::vector<corpus::ArgumentUnit>> out;
  for (const auto& g : length_groups(lengths, ratio)) {
    auto& group = out.emplace_back();
    for (std::size_t i : g) group.push_back(arguments[i]);
  }
  return out;
}

bool at_edge(double relative_position, double edge) {
  return relative_position <= edge + kEps || relative_position >= 1.0 - edge - kEps;
}

std::vector<corpus::DocumentRecord> position_control_filter(
    const std::vector<corpus::DocumentRecord>& docs, const corpus::SaliencyPolicy& policy,
    double edge, double mass) {
  if (!(edge > 0.0 && edge < 0.5)) throw ValidationError("edge must lie in (0, 0.5)");
  if (!(mass > 0.0 && mass <= 1.0)) throw ValidationError("mass must lie in (0, 1]");
  std::vector<corpus::DocumentRecord> out;
  for (const corpus::DocumentRecord& doc : docs) {
    auto arguments = corpus::extract_salient(doc, policy);
    if (arguments.empty()) continue;
    std::size_t edge_count = 0;
    for (const auto& a : arguments) {
      if (at_edge(position::argument_position(a, doc.sentences.size()), edge)) ++edge_count;
    }
    if (static_cast<double>(edge_count) + kEps >= mass * static_cast<double>(arguments.size())) {
      out.push_back(doc);
    }
  }
  return out;
}

std::vector<BiasReport> compute_bias(const corpus::Corpus& corpus,
                                     const corpus::SaliencyPolicy& policy,
                                     const std::vector<corpus::ArgumentUnit>& arguments,
                                     const std::vector<scoring::VerdictRecord>& records,
                                     const BiasOptions& options) {
  std::vector<Control> controls{Control::kNone};
  if (options.length_control || options.position_control) controls.push_back(Control::kLength);
  if (options.position_control) controls.push_back(Control::kLengthAndPosition);

  std::set<std::string> systems;
  for (const auto& r : records) {
    if (r.level == scoring::Level::kAtomic) systems.insert(r.summary_system);
  }

  std::set<std::string> edge_docs;
  if (options.position_control) {
    for (const auto& d : position_control_filter(corpus.documents, policy, options.edge,
                                                 options.mass)) {
      edge_docs.insert(d.doc_id);
    }
  }

  std::vector<BiasReport> out;
  for (Control control : controls) {
    std::vector<corpus::ArgumentUnit> scope;
    for (const auto& a : arguments) {
      if (control != Control::kLengthAndPosition || edge_docs.count(a.doc_id)) scope.push_back(a);
    }
    if (scope.empty()) continue;

    std::set<std::string> roles;
    for (const auto& a : scope) roles.insert(a.role);

    std::map<std::string, std::vector<corpus::ArgumentUnit>> by_doc;
    for (const auto& a : scope) by_doc[a.doc_id].push_back(a);

    std::vector<std::vector<corpus::ArgumentUnit>> groups;
    if (control == Control::kNone) {
      groups.push_back(scope);
    } else {
      groups = length_control_groups(scope, options.length_ratio);
    }

    for (const std::string& system : systems) {
      std::vector<scoring::VerdictRecord> mine;
      for (const auto& r : records) {
        if (r.summary_system == system) mine.push_back(r);
      }
      for (const std::string& role : roles) {
        // Mean of the per-group role scores over groups where the role was judged.
        Rational total = 0;
        long long used = 0;
        for (const auto& group : groups) {
          std::set<std::string> ids;
          for (const auto& a : group) {
            if (a.role == role) ids.insert(a.arg_id);
          }
          if (ids.empty()) continue;
          if (auto s = role_score(mine, ids)) {
            total += *s;
            ++used;
          }
        }
        if (used == 0) continue;
        double arc = to_double(total / used);

        Rational doc_fraction = 0;
        for (const auto& [doc_id, list] : by_doc) doc_fraction += prior_fraction(role, list);
        doc_fraction /= static_cast<long long>(by_doc.size());

        for (Scope scope_kind : {Scope::kDoc, Scope::kCorpus}) {
          double fraction = to_double(scope_kind == Scope::kDoc ? doc_fraction
                                                                : prior_fraction(role, scope));
          for (Variant variant : {Variant::kNormalized, Variant::kRaw}) {
            BiasReport r;
            r.role = role;
            r.system = system;
            r.arc_atomic_role = arc;
            r.prior_fraction = fraction;
            r.beta = variant == Variant::kRaw ? beta_raw(arc) : beta(arc, fraction);
            r.variant = variant;
            r.control = control;
            r.scope = scope_kind;
            out.push_back(r);
          }
        }
      }
    }
  }
  return out;
}

void write_bias_csv(const std::vector<BiasReport>& reports, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"system", "role", "control", "variant", "scope",
              "arc_atomic_role", "prior_fraction", "beta"};
  for (const BiasReport& r : reports) {
    t.rows.push_back({r.system, r.role, std::string(to_string(r.control)),
                      std::string(to_string(r.variant)), std::string(to_string(r.scope)),
                      fixed4(r.arc_atomic_role), fixed4(r.prior_fraction), fixed4(r.beta)});
  }
  csv::write(path, t);
}

}  // namespace arc::bias
