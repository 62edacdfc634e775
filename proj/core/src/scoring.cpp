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

#include "arc/scoring.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "arc/csv.hpp"
#include "arc/error.hpp"
#include "arc/parallel.hpp"
#include "arc/text.hpp"

namespace arc::scoring {

using judge::ErrorTag;
using nlohmann::json;

namespace {

std::optional<Level> parse_level(std::string_view t) {
  if (t == "fullset") return Level::kFullset;
  if (t == "role") return Level::kRole;
  if (t == "atomic") return Level::kAtomic;
  return std::nullopt;
}

std::string cell(const std::optional<Rational>& r) { return r ? format_decimal(*r) : ""; }

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::kFullset: return "fullset";
    case Level::kRole: return "role";
    case Level::kAtomic: return "atomic";
  }
  return "";
}

Rational phi_fullset(int likert) {
  if (likert < 1 || likert > 4) throw OutOfRangeLikert(likert);
  return Rational(likert - 1, 3);
}

std::string format_argument_set(const std::vector<corpus::ArgumentUnit>& arguments) {
  std::string out;
  for (const corpus::ArgumentUnit& a : arguments) {
    if (!out.empty()) out += '\n';
    out += a.role + ": " + a.text;
  }
  return out;
}

Rational score_fullset(const std::vector<corpus::ArgumentUnit>& arguments,
                       const corpus::SummaryRecord& summary, judge::JudgeClient& judge) {
  if (arguments.empty()) throw EmptyArgumentSet();
  auto request = judge::make_request(
      judge::TemplateId::kFullset,
      {{"reference_arguments", format_argument_set(arguments)},
       {"generated_summary", summary.text}});
  judge::Verdict v = judge.judge(request, judge::VerdictKind::kFullsetRating);
  return phi_fullset(v.rating);
}

RoleResult score_role(const std::vector<corpus::ArgumentUnit>& arguments,
                      const corpus::SummaryRecord& summary, judge::JudgeClient& judge,
                      std::size_t parallelism) {
  if (arguments.empty()) throw EmptyArgumentSet();
  RoleResult result;
  result.records.resize(arguments.size());
  parallel_for(arguments.size(), parallelism, [&](std::size_t i) {
    const corpus::ArgumentUnit& a = arguments[i];
    VerdictRecord& r = result.records[i];
    r.doc_id = a.doc_id;
    r.level = Level::kRole;
    r.target = a.arg_id;
    r.arg_id = a.arg_id;
    r.summary_system = summary.system;
    r.judged_by = judge.backend_id();
    auto request = judge::make_request(judge::TemplateId::kRole,
                                       {{"argument", a.text}, {"summary", summary.text}});
    try {
      r.verdict = judge.judge(request, judge::VerdictKind::kRoleDecision);
    } catch (const UnparseableVerdict&) {
      r.verdict.reset();
    }
  });
  for (const VerdictRecord& r : result.records) result.unjudged += r.judged() ? 0 : 1;
  result.mean = role_mean(result.records);
  return result;
}

AtomicResult score_atomic(const std::vector<corpus::ArgumentUnit>& arguments,
                          const decompose::FactSet& facts,
                          const corpus::SummaryRecord& summary, judge::JudgeClient& judge,
                          std::size_t parallelism) {
  struct Item {
    const corpus::ArgumentUnit* argument;
    decompose::AtomicFact fact;
  };
  std::vector<Item> items;
  AtomicResult result;
  for (const corpus::ArgumentUnit& a : arguments) {
    auto kept = facts.kept(a.arg_id);
    if (kept.empty()) {
      ++result.unjudged;  // decomposition failed for this argument
      continue;
    }
    for (auto& f : kept) items.push_back({&a, std::move(f)});
  }
  result.records.resize(items.size());
  parallel_for(items.size(), parallelism, [&](std::size_t i) {
    const Item& item = items[i];
    VerdictRecord& r = result.records[i];
    r.doc_id = item.argument->doc_id;
    r.level = Level::kAtomic;
    r.target = item.fact.fact_id;
    r.arg_id = item.argument->arg_id;
    r.summary_system = summary.system;
    r.judged_by = judge.backend_id();
    auto request = judge::make_request(judge::TemplateId::kAtomic,
                                       {{"argument", item.fact.text}, {"summary", summary.text}});
    try {
      r.verdict = judge.judge(request, judge::VerdictKind::kAtomicDecision);
    } catch (const UnparseableVerdict&) {
      r.verdict.reset();
    }
  });
  for (const VerdictRecord& r : result.records) result.unjudged += r.judged() ? 0 : 1;
  result.score = atomic_mean(result.records);
  return result;
}

std::optional<Rational> atomic_mean(
    const std::vector<VerdictRecord>& records,
    const std::function<bool(const std::string& arg_id)>& include) {
  std::map<std::string, std::pair<long long, long long>> per_arg;  // supported, judged
  for (const VerdictRecord& r : records) {
    if (r.level != Level::kAtomic || !r.judged()) continue;
    if (include && !include(r.arg_id)) continue;
    auto& [supported, judged] = per_arg[r.arg_id];
    ++judged;
    if (r.verdict->decision == 1) ++supported;
  }
  if (per_arg.empty()) return std::nullopt;
  Rational total = 0;
  for (const auto& [arg, counts] : per_arg) total += Rational(counts.first, counts.second);
  return total / static_cast<long long>(per_arg.size());
}

std::optional<Rational> role_mean(const std::vector<VerdictRecord>& records) {
  long long judged = 0, supported = 0;
  for (const VerdictRecord& r : records) {
    if (r.level != Level::kRole || !r.judged()) continue;
    ++judged;
    supported += r.verdict->decision;
  }
  if (judged == 0) return std::nullopt;
  return Rational(supported, judged);
}

std::optional<Rational> pooled_atomic(const std::vector<VerdictRecord>& records) {
  long long judged = 0, supported = 0;
  for (const VerdictRecord& r : records) {
    if (r.level != Level::kAtomic || !r.judged()) continue;
    ++judged;
    supported += r.verdict->decision;
  }
  if (judged == 0) return std::nullopt;
  return Rational(supported, judged);
}

Rational ErrorDistribution::share(ErrorTag tag) const {
  if (total() == 0) return 0;
  std::size_t n = tag == ErrorTag::kSupported ? supported
                  : tag == ErrorTag::kMissing ? missing
                                              : not_factual;
  return Rational(static_cast<long long>(n), static_cast<long long>(total()));
}

ErrorDistribution aggregate_errors(const std::vector<VerdictRecord>& records) {
  ErrorDistribution d;
  for (const VerdictRecord& r : records) {
    if (r.level != Level::kAtomic || !r.judged()) continue;
    switch (r.verdict->error) {
      case ErrorTag::kSupported: ++d.supported; break;
      case ErrorTag::kMissing: ++d.missing; break;
      case ErrorTag::kNotFactual: ++d.not_factual; break;
    }
  }
  return d;
}

std::map<std::string, ErrorDistribution> aggregate_errors_by_system(
    const std::vector<VerdictRecord>& records) {
  std::map<std::string, std::vector<VerdictRecord>> grouped;
  for (const VerdictRecord& r : records) grouped[r.summary_system].push_back(r);
  std::map<std::string, ErrorDistribution> out;
  for (const auto& [system, list] : grouped) out[system] = aggregate_errors(list);
  return out;
}

Rational per_role_atomic(const std::vector<corpus::ArgumentUnit>& arguments,
                         const std::vector<VerdictRecord>& records, const std::string& role) {
  std::set<std::string> ids;
  for (const corpus::ArgumentUnit& a : arguments) {
    if (a.role == role) ids.insert(a.arg_id);
  }
  auto score = atomic_mean(records, [&](const std::string& id) { return ids.count(id) > 0; });
  if (!score) throw NoArgumentsOfRole(role);
  return *score;
}

LevelSet LevelSet::parse(std::string_view t) {
  if (t == "all" || t.empty()) return {};
  LevelSet set{false, false, false};
  std::size_t start = 0;
  while (start <= t.size()) {
    std::size_t comma = t.find(',', start);
    std::string_view item = t.substr(start, comma == std::string_view::npos ? t.npos : comma - start);
    auto level = parse_level(item);
    if (!level) throw ValidationError("unknown level '" + std::string(item) + "'");
    if (*level == Level::kFullset) set.fullset = true;
    if (*level == Level::kRole) set.role = true;
    if (*level == Level::kAtomic) set.atomic = true;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return set;
}

ScoreCard build_card(const std::string& doc_id, const std::string& system,
                     const std::vector<corpus::ArgumentUnit>& arguments,
                     const std::vector<VerdictRecord>& all_records) {
  std::vector<VerdictRecord> records;
  for (const VerdictRecord& r : all_records) {
    if (r.doc_id == doc_id && r.summary_system == system) records.push_back(r);
  }
  ScoreCard card;
  card.doc_id = doc_id;
  card.summary_system = system;
  for (const VerdictRecord& r : records) {
    if (!r.judged()) {
      ++card.unjudged;
    } else if (r.level == Level::kFullset) {
      card.arc_fullset = phi_fullset(r.verdict->rating);
    }
  }
  card.arc_role = role_mean(records);
  card.arc_atomic = atomic_mean(records);
  card.errors = aggregate_errors(records);

  std::map<std::string, std::string> role_of;
  for (const corpus::ArgumentUnit& a : arguments) {
    if (a.doc_id == doc_id) role_of[a.arg_id] = a.role;
  }
  std::set<std::string> roles;
  for (const auto& [id, role] : role_of) roles.insert(role);
  for (const std::string& role : roles) {
    auto in_role = [&](const std::string& id) {
      auto it = role_of.find(id);
      return it != role_of.end() && it->second == role;
    };
    if (auto s = atomic_mean(records, in_role)) card.per_role_atomic[role] = *s;
    std::vector<VerdictRecord> subset;
    for (const VerdictRecord& r : records) {
      if (r.level == Level::kAtomic && in_role(r.arg_id)) subset.push_back(r);
    }
    if (!subset.empty()) card.per_role_errors[role] = aggregate_errors(subset);
  }
  return card;
}

DocumentScore score_summary(const std::string& doc_id,
                            const std::vector<corpus::ArgumentUnit>& arguments,
                            const decompose::FactSet* facts,
                            const corpus::SummaryRecord& summary_in, const std::string& system,
                            judge::JudgeClient& judge, const LevelSet& levels,
                            std::size_t parallelism) {
  corpus::SummaryRecord summary = summary_in;
  summary.system = system;
  DocumentScore out;
  if (!arguments.empty()) {
    if (levels.fullset) {
      VerdictRecord r{doc_id, Level::kFullset, "fullset", "", system, judge.backend_id(), {}};
      auto request = judge::make_request(
          judge::TemplateId::kFullset,
          {{"reference_arguments", format_argument_set(arguments)},
           {"generated_summary", summary.text}});
      try {
        r.verdict = judge.judge(request, judge::VerdictKind::kFullsetRating);
      } catch (const UnparseableVerdict&) {
        r.verdict.reset();
      }
      out.records.push_back(std::move(r));
    }
    if (levels.role) {
      auto role = score_role(arguments, summary, judge, parallelism);
      for (auto& r : role.records) out.records.push_back(std::move(r));
    }
    if (levels.atomic) {
      if (facts == nullptr) throw MissingUpstream("facts.jsonl");
      auto atomic = score_atomic(arguments, *facts, summary, judge, parallelism);
      for (auto& r : atomic.records) out.records.push_back(std::move(r));
    }
  }
  out.card = build_card(doc_id, system, arguments, out.records);
  return out;
}

std::vector<CorpusScore> aggregate_corpus(const std::vector<ScoreCard>& cards,
                                          const std::vector<VerdictRecord>& records) {
  std::set<std::string> systems;
  for (const ScoreCard& c : cards) systems.insert(c.summary_system);
  std::vector<CorpusScore> out;
  for (const std::string& system : systems) {
    std::vector<VerdictRecord> mine;
    for (const VerdictRecord& r : records) {
      if (r.summary_system == system) mine.push_back(r);
    }
    for (Level level : {Level::kFullset, Level::kRole, Level::kAtomic}) {
      CorpusScore s;
      s.system = system;
      s.level = level;
      Rational total = 0;
      for (const ScoreCard& c : cards) {
        if (c.summary_system != system) continue;
        const auto& v = level == Level::kFullset ? c.arc_fullset
                        : level == Level::kRole  ? c.arc_role
                                                 : c.arc_atomic;
        if (!v) continue;
        total += *v;
        ++s.docs;
      }
      if (s.docs) s.mean_doc = total / static_cast<long long>(s.docs);
      switch (level) {
        case Level::kFullset: s.pooled = s.mean_doc; break;
        case Level::kRole: s.pooled = role_mean(mine); break;
        case Level::kAtomic: s.pooled = pooled_atomic(mine); break;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::pair<std::string, const corpus::SummaryRecord*>> summaries_to_score(
    const corpus::DocumentRecord& doc) {
  std::vector<std::pair<std::string, const corpus::SummaryRecord*>> out;
  const auto& refs = doc.reference_summaries;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out.emplace_back(refs.size() == 1 ? "reference" : "reference#" + std::to_string(i + 1),
                     &refs[i]);
  }
  for (const corpus::SummaryRecord& g : doc.generated_summaries) out.emplace_back(g.system, &g);
  return out;
}

json to_json(const VerdictRecord& r) {
  nlohmann::ordered_json j;
  j["doc_id"] = r.doc_id;
  j["system"] = r.summary_system;
  j["level"] = std::string(to_string(r.level));
  j["target"] = r.target;
  j["arg_id"] = r.arg_id;
  j["judged_by"] = r.judged_by;
  j["status"] = r.judged() ? "judged" : "unjudged";
  if (r.judged()) {
    switch (r.level) {
      case Level::kFullset: j["rating"] = r.verdict->rating; break;
      case Level::kRole: j["decision"] = r.verdict->decision; break;
      case Level::kAtomic:
        j["decision"] = r.verdict->decision;
        j["error"] = std::string(judge::to_string(r.verdict->error));
        break;
    }
    j["explanation"] = r.verdict->explanation;
  }
  return json::parse(j.dump());
}

VerdictRecord verdict_record_from_json(const json& j) {
  VerdictRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.summary_system = j.at("system").get<std::string>();
  auto level = parse_level(j.at("level").get<std::string>());
  if (!level) throw ValidationError("unknown verdict level");
  r.level = *level;
  r.target = j.at("target").get<std::string>();
  r.arg_id = j.value("arg_id", "");
  r.judged_by = j.value("judged_by", "");
  if (j.value("status", "") == "judged") {
    judge::Verdict v;
    v.explanation = j.value("explanation", "");
    switch (r.level) {
      case Level::kFullset:
        v.kind = judge::VerdictKind::kFullsetRating;
        v.rating = j.at("rating").get<int>();
        break;
      case Level::kRole:
        v.kind = judge::VerdictKind::kRoleDecision;
        v.decision = j.at("decision").get<int>();
        v.error = v.decision ? ErrorTag::kSupported : ErrorTag::kMissing;
        break;
      case Level::kAtomic: {
        v.kind = judge::VerdictKind::kAtomicDecision;
        v.decision = j.at("decision").get<int>();
        auto tag = judge::parse_error_tag(j.at("error").get<std::string>());
        if (!tag) throw ValidationError("unknown error tag in verdicts.jsonl");
        v.error = *tag;
        break;
      }
    }
    r.verdict = v;
  }
  return r;
}

void write_verdicts(const std::vector<VerdictRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const VerdictRecord& r : records) {
    // Field order is fixed for stable diffs.
    nlohmann::ordered_json j;
    json plain = to_json(r);
    for (const char* key : {"doc_id", "system", "level", "target", "arg_id", "judged_by",
                            "status", "rating", "decision", "error", "explanation"}) {
      if (plain.contains(key)) j[key] = plain[key];
    }
    out << j.dump() << '\n';
  }
}

std::vector<VerdictRecord> read_verdicts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingUpstream(path.filename().string());
  std::vector<VerdictRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::word_count(line) == 0) continue;
    try {
      out.push_back(verdict_record_from_json(json::parse(line)));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw MalformedRecord(line_no, std::string("verdicts.jsonl: ") + e.what());
    }
  }
  return out;
}

void write_scores_csv(const std::vector<ScoreCard>& cards, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"doc_id", "system",    "arc_fullset", "arc_role",    "arc_atomic", "role",
              "per_role_atomic", "supported", "missing", "not_factual", "unjudged"};
  auto counts = [](const ErrorDistribution& d) {
    return std::vector<std::string>{std::to_string(d.supported), std::to_string(d.missing),
                                    std::to_string(d.not_factual)};
  };
  for (const ScoreCard& c : cards) {
    csv::Row row{c.doc_id, c.summary_system, cell(c.arc_fullset), cell(c.arc_role),
                 cell(c.arc_atomic), "*", ""};
    for (auto& x : counts(c.errors)) row.push_back(x);
    row.push_back(std::to_string(c.unjudged));
    t.rows.push_back(std::move(row));
    for (const auto& [role, score] : c.per_role_atomic) {
      csv::Row rr{c.doc_id, c.summary_system, "", "", "", role, format_decimal(score)};
      auto it = c.per_role_errors.find(role);
      for (auto& x : counts(it == c.per_role_errors.end() ? ErrorDistribution{} : it->second)) {
        rr.push_back(x);
      }
      rr.push_back("");
      t.rows.push_back(std::move(rr));
    }
  }
  csv::write(path, t);
}

}  // namespace arc::scoring
