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

#include "arc/decompose.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "arc/error.hpp"
#include "arc/parallel.hpp"
#include "arc/text.hpp"

namespace arc::decompose {

namespace {

std::string fact_key(const std::string& fact) {
  std::string s = text::ascii_lower(text::normalize_whitespace(fact));
  while (!s.empty() && std::string_view(".,;:!?").find(s.back()) != std::string_view::npos) {
    s.pop_back();
  }
  return s;
}

std::string fact_id(const std::string& arg_id, int ordinal) {
  return arg_id + ".f" + std::to_string(ordinal);
}

}  // namespace

std::vector<AtomicFact> decompose_argument(const corpus::ArgumentUnit& argument,
                                           judge::JudgeClient& judge) {
  if (text::word_count(argument.text) == 0) {
    throw ValidationError("argument " + argument.arg_id + " has no text");
  }
  auto request = judge::make_request(judge::TemplateId::kDecompose,
                                     {{"argument", argument.text}});
  judge::Verdict v = judge.judge(request, judge::VerdictKind::kFactMap);

  std::vector<AtomicFact> out;
  std::set<std::string> seen;
  for (const std::string& text : v.facts) {
    if (!seen.insert(fact_key(text)).second) continue;
    AtomicFact f;
    f.arg_id = argument.arg_id;
    f.ordinal = static_cast<int>(out.size()) + 1;
    f.fact_id = fact_id(argument.arg_id, f.ordinal);
    f.text = text;
    f.backend_id = judge.backend_id();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<AtomicFact> mark_entailment(const corpus::ArgumentUnit& argument,
                                        std::vector<AtomicFact> candidates,
                                        judge::JudgeClient& nli) {
  for (AtomicFact& f : candidates) {
    auto request = judge::make_request(
        judge::TemplateId::kNli, {{"premise", argument.text}, {"hypothesis", f.text}});
    judge::Verdict v = nli.judge(request, judge::VerdictKind::kNliLabel);
    f.entailed = v.label == judge::NliLabel::kEntailment;
  }
  return candidates;
}

AtomicFact fallback_fact(const corpus::ArgumentUnit& argument, const std::string& backend_id) {
  AtomicFact f;
  f.arg_id = argument.arg_id;
  f.ordinal = 0;
  f.fact_id = fact_id(argument.arg_id, 0);
  f.text = argument.text;
  f.entailed = true;
  f.fallback = true;
  f.backend_id = backend_id;
  return f;
}

std::vector<AtomicFact> filter_entailed(const corpus::ArgumentUnit& argument,
                                        std::vector<AtomicFact> candidates,
                                        judge::JudgeClient& nli) {
  std::string backend = candidates.empty() ? nli.backend_id() : candidates.front().backend_id;
  std::vector<AtomicFact> kept;
  for (AtomicFact& f : mark_entailment(argument, std::move(candidates), nli)) {
    if (f.entailed) kept.push_back(std::move(f));
  }
  if (kept.empty()) kept.push_back(fallback_fact(argument, backend));
  return kept;
}

std::vector<AtomicFact> FactSet::kept(const std::string& arg_id) const {
  std::vector<AtomicFact> out;
  auto it = by_argument.find(arg_id);
  if (it == by_argument.end()) return out;
  for (const AtomicFact& f : it->second) {
    if (f.entailed) out.push_back(f);
  }
  return out;
}

FactSet decompose_all(const std::vector<corpus::ArgumentUnit>& arguments,
                      judge::JudgeClient& judge, judge::JudgeClient& nli,
                      std::size_t parallelism) {
  FactSet out;
  out.judge_backend = judge.backend_id();
  out.nli_backend = nli.backend_id();
  std::mutex mutex;
  parallel_for(arguments.size(), parallelism, [&](std::size_t i) {
    const corpus::ArgumentUnit& a = arguments[i];
    try {
      auto candidates = mark_entailment(a, decompose_argument(a, judge), nli);
      bool any = std::any_of(candidates.begin(), candidates.end(),
                             [](const AtomicFact& f) { return f.entailed; });
      if (!any) candidates.push_back(fallback_fact(a, judge.backend_id()));
      std::sort(candidates.begin(), candidates.end(),
                [](const AtomicFact& x, const AtomicFact& y) { return x.ordinal < y.ordinal; });
      std::lock_guard lock(mutex);
      out.by_argument[a.arg_id] = std::move(candidates);
    } catch (const UnparseableVerdict& e) {
      std::lock_guard lock(mutex);
      out.failures[a.arg_id] = e.what();
    }
  });
  return out;
}

void write_facts(const FactSet& facts, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const auto& [arg_id, list] : facts.by_argument) {
    for (const AtomicFact& f : list) {
      nlohmann::ordered_json j;
      j["arg_id"] = f.arg_id;
      j["fact_id"] = f.fact_id;
      j["ordinal"] = f.ordinal;
      j["text"] = f.text;
      j["entailed"] = f.entailed;
      j["fallback"] = f.fallback;
      j["backend_id"] = f.backend_id;
      out << j.dump() << '\n';
    }
  }
}

FactSet read_facts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingUpstream(path.filename().string());
  FactSet facts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::word_count(line) == 0) continue;
    try {
      auto j = nlohmann::json::parse(line);
      AtomicFact f;
      f.arg_id = j.at("arg_id").get<std::string>();
      f.fact_id = j.at("fact_id").get<std::string>();
      f.ordinal = j.at("ordinal").get<int>();
      f.text = j.at("text").get<std::string>();
      f.entailed = j.at("entailed").get<bool>();
      f.fallback = j.at("fallback").get<bool>();
      f.backend_id = j.value("backend_id", "");
      facts.by_argument[f.arg_id].push_back(std::move(f));
    } catch (const std::exception& e) {
      throw MalformedRecord(line_no, std::string("facts.jsonl: ") + e.what());
    }
  }
  for (auto& [arg_id, list] : facts.by_argument) {
    std::sort(list.begin(), list.end(),
              [](const AtomicFact& x, const AtomicFact& y) { return x.ordinal < y.ordinal; });
  }
  return facts;
}

}  // namespace arc::decompose
