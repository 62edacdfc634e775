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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arc/corpus.hpp"
#include "arc/rational.hpp"
#include "arc/scoring.hpp"

namespace arc::bias {

enum class Variant { kNormalized, kRaw };
enum class Control { kNone, kLength, kLengthAndPosition };
enum class Scope { kDoc, kCorpus };

std::string_view to_string(Variant v);
std::string_view to_string(Control c);
std::string_view to_string(Scope s);

struct BiasReport {
  std::string role;
  std::string system;
  double arc_atomic_role = 0.0;
  double prior_fraction = 0.0;
  double beta = 0.0;
  Variant variant = Variant::kNormalized;
  Control control = Control::kNone;
  Scope scope = Scope::kCorpus;
};

// |role arguments| / |arguments|. Throws NoArguments on an empty scope.
Rational prior_fraction(std::string_view role,
                        const std::vector<corpus::ArgumentUnit>& scope);

// arc / ln(1 + fraction). Throws ZeroFraction when fraction <= 0.
double beta(double arc_atomic_role, double fraction);
double beta_raw(double arc_atomic_role);

// Sorts by length and sweeps greedily: an item joins the current group while
// max <= (1 + ratio) * min. Returns groups of input indices.
std::vector<std::vector<std::size_t>> length_groups(
    std::span<const std::size_t> lengths, double ratio = 0.2);

std::vector<std::vector<corpus::ArgumentUnit>> length_control_groups(
    const std::vector<corpus::ArgumentUnit>& arguments, double ratio = 0.2);

// Is the argument within the first or last `edge` of its document?
bool at_edge(double relative_position, double edge);

// Documents in which at least `mass` of the salient arguments sit in the
// outer `edge` bands. Documents without salient arguments are dropped.
std::vector<corpus::DocumentRecord> position_control_filter(
    const std::vector<corpus::DocumentRecord>& docs,
    const corpus::SaliencyPolicy& policy, double edge = 0.2, double mass = 0.8);

struct BiasOptions {
  bool length_control = true;
  bool position_control = true;
  double length_ratio = 0.2;
  double edge = 0.2;
  double mass = 0.8;
};

// One report per (system, role, control, variant, scope) with a defined beta.
std::vector<BiasReport> compute_bias(const corpus::Corpus& corpus,
                                     const corpus::SaliencyPolicy& policy,
                                     const std::vector<corpus::ArgumentUnit>& arguments,
                                     const std::vector<scoring::VerdictRecord>& records,
                                     const BiasOptions& options);

void write_bias_csv(const std::vector<BiasReport>& reports,
                    const std::filesystem::path& path);

}  // namespace arc::bias
