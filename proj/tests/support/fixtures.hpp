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

#include <map>
#include <random>
#include <string>
#include <vector>

#include "arc/corpus.hpp"
#include "arc/decompose.hpp"
#include "arc/judge.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace arc::testing {

// Arguments with pre-decided atomic verdicts. Fact texts are unique so a
// scripted judge can look them up.
struct VerdictFixture {
  std::vector<corpus::ArgumentUnit> arguments;
  decompose::FactSet facts;
  std::map<std::string, int> fact_decision;     // fact text -> d
  std::map<std::string, int> argument_decision;  // argument text -> d
  std::vector<std::vector<int>> decisions;       // per argument, per fact

  // Answers role and atomic prompts from the planted decisions.
  ScriptedBackend::Responder responder() const {
    return [this](const judge::Request& r) -> std::string {
      const std::string& unit = r.bindings.at("argument");
      if (r.template_id == judge::TemplateId::kRole) {
        return R"({"decision": )" + std::to_string(argument_decision.at(unit)) + "}";
      }
      return fact_decision.at(unit) ? R"({"decision": [1, "supported"]})"
                                    : R"({"decision": [0, "missing"]})";
    };
  }
};

inline VerdictFixture random_fixture(std::mt19937& rng, std::size_t max_args,
                                     std::size_t max_facts, const std::string& doc = "doc") {
  VerdictFixture f;
  const std::vector<std::string> roles{"issue", "reason", "conclusion"};
  std::size_t n = 1 + rng() % max_args;
  for (std::size_t i = 0; i < n; ++i) {
    corpus::ArgumentUnit a;
    a.doc_id = doc;
    a.arg_id = doc + ":a" + std::to_string(i + 1);
    a.role = roles[rng() % roles.size()];
    a.text = "argument " + a.arg_id;
    a.sentence_indices = {static_cast<int>(i)};
    f.argument_decision[a.text] = static_cast<int>(rng() % 2);
    std::size_t m = 1 + rng() % max_facts;
    std::vector<int> ds;
    for (std::size_t j = 0; j < m; ++j) {
      decompose::AtomicFact fact;
      fact.arg_id = a.arg_id;
      fact.ordinal = static_cast<int>(j + 1);
      fact.fact_id = a.arg_id + ".f" + std::to_string(j + 1);
      fact.text = "fact " + fact.fact_id;
      fact.entailed = true;
      fact.backend_id = "fixture";
      int d = static_cast<int>(rng() % 2);
      f.fact_decision[fact.text] = d;
      ds.push_back(d);
      f.facts.by_argument[a.arg_id].push_back(fact);
    }
    f.decisions.push_back(ds);
    f.arguments.push_back(a);
  }
  return f;
}

}  // namespace arc::testing
