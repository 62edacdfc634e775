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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "arc/bias.hpp"
#include "arc/cli/pipeline.hpp"
#include "arc/decompose.hpp"
#include "arc/position.hpp"
#include "arc/scoring.hpp"
#include "arc/stats.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "planted.hpp"
#include "test_support.hpp"

namespace {

using namespace arc;
using judge::JudgeClient;
using judge::VerdictCache;
using testing::ScriptedBackend;

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

corpus::Corpus legal_corpus() {
  return corpus::load_corpus(testing::fixture("legal_irc.jsonl"), corpus::builtin_scheme("irc"));
}

std::vector<corpus::ArgumentUnit> arguments_of(const corpus::DocumentRecord& doc) {
  return corpus::extract_salient(doc, corpus::SaliencyPolicy::all_roles());
}

corpus::SummaryRecord summary(const std::string& text) { return {"sys", text, {}}; }

Outcome fullset_normalization() {
  const Rational expected[] = {Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)};
  for (int l = 1; l <= 4; ++l) {
    if (scoring::phi_fullset(l) != expected[l - 1]) return check(false, "likert " + std::to_string(l));
  }
  return check(true, "{1,2,3,4} -> {0,1/3,2/3,1}");
}

Outcome nested_mean_oracle() {
  std::mt19937 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = testing::random_fixture(rng, 6, 5);
    ScriptedBackend j("planted", f.responder());
    VerdictCache cache;
    JudgeClient client(j, cache);
    auto r = scoring::score_atomic(f.arguments, f.facts, summary("s"), client);
    auto o = oracle::nested_mean(f.decisions);
    if (!r.score || *r.score != Rational(o.num, o.den)) {
      return check(false, "trial " + std::to_string(trial));
    }
  }
  return check(true, "1000 fixtures exact");
}

Outcome degenerate_coincidence() {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = testing::random_fixture(rng, 6, 1);
    for (std::size_t i = 0; i < f.arguments.size(); ++i) {
      f.argument_decision[f.arguments[i].text] = f.decisions[i][0];
    }
    ScriptedBackend j("planted", f.responder());
    VerdictCache cache;
    JudgeClient client(j, cache);
    auto a = scoring::score_atomic(f.arguments, f.facts, summary("s"), client);
    auto r = scoring::score_role(f.arguments, summary("s"), client);
    if (!a.score || a.score != r.mean) return check(false, "trial " + std::to_string(trial));
  }
  return check(true, "300 singleton fixtures");
}

Outcome all_supported_judge() {
  auto c = legal_corpus();
  judge::LexicalBackend lex;
  VerdictCache lex_cache;
  JudgeClient lex_client(lex, lex_cache);
  ScriptedBackend all("all", testing::all_supported);
  VerdictCache cache;
  JudgeClient client(all, cache);
  std::size_t cards = 0;
  for (const auto& doc : c.documents) {
    auto args = arguments_of(doc);
    auto facts = decompose::decompose_all(args, lex_client, lex_client);
    for (const auto& [system, s] : scoring::summaries_to_score(doc)) {
      auto r = scoring::score_summary(doc.doc_id, args, &facts, *s, system, client, {});
      const auto& k = r.card;
      if (k.arc_fullset != Rational(1) || k.arc_role != Rational(1) || k.arc_atomic != Rational(1)) {
        return check(false, doc.doc_id + "/" + system);
      }
      ++cards;
    }
  }
  return check(cards > 0, std::to_string(cards) + " cards at 1/1/1");
}

Outcome contempt_filter() {
  auto c = legal_corpus();
  std::optional<corpus::ArgumentUnit> target;
  for (const auto& a : arguments_of(c.documents.front())) {
    if (a.role == "issue") target = a;
  }
  if (!target) return check(false, "fixture argument missing");
  std::ifstream in(testing::fixture("contempt_facts.json"));
  std::string recorded((std::istreambuf_iterator<char>(in)), {});
  ScriptedBackend rec("recorded", [&](const judge::Request&) { return recorded; });
  VerdictCache c1, c2;
  JudgeClient judge_client(rec, c1);
  judge::LexicalBackend lex;
  JudgeClient nli(lex, c2);
  auto candidates = decompose::decompose_argument(*target, judge_client);
  bool proposed = std::any_of(candidates.begin(), candidates.end(), [](const decompose::AtomicFact& f) {
    return f.text == "The father applied for denial of access.";
  });
  auto kept = decompose::filter_entailed(*target, candidates, nli);
  bool ok = proposed && candidates.size() == 2 && kept.size() == 1 && kept[0].entailed &&
            kept[0].text == "The father applied to have the mother cited for contempt.";
  return check(ok, "contempt kept, denial of access removed");
}

Outcome fallback_guarantee() {
  auto c = legal_corpus();
  judge::LexicalBackend lex;
  ScriptedBackend reject("reject", testing::reject_all);
  VerdictCache c1, c2, c3;
  JudgeClient judge_client(lex, c1), nli(reject, c2), scorer(lex, c3);
  std::size_t n = 0;
  for (const auto& doc : c.documents) {
    auto args = arguments_of(doc);
    auto facts = decompose::decompose_all(args, judge_client, nli);
    for (const auto& a : args) {
      std::size_t fallbacks = 0, kept = 0;
      for (const auto& f : facts.by_argument.at(a.arg_id)) {
        fallbacks += f.fallback;
        kept += f.entailed;
      }
      if (fallbacks != 1 || kept != 1) return check(false, a.arg_id);
      ++n;
    }
    auto r = scoring::score_atomic(args, facts, doc.reference_summaries.front(), scorer);
    if (!r.score) return check(false, doc.doc_id + " atomic undefined");
  }
  return check(true, std::to_string(n) + " arguments, one fallback each");
}

Outcome beta_formula() {
  double b = bias::beta(0.8, 1.0);
  if (std::abs(b - 1.1541560327111708) > 1e-9) return check(false, "beta(0.8,1)");
  double prev = INFINITY;
  for (int i = 1; i <= 100; ++i) {
    double v = bias::beta(0.8, i / 100.0);
    if (!(v < prev)) return check(false, "not decreasing at " + std::to_string(i));
    prev = v;
  }
  return check(true, "0.8/ln2 and 100-point grid");
}

Outcome controls() {
  std::vector<std::size_t> words{8, 9, 10, 12, 15, 18};
  auto groups = bias::length_groups(words, 0.2);
  std::vector<std::vector<std::size_t>> got;
  for (const auto& g : groups) {
    auto& o = got.emplace_back();
    for (std::size_t i : g) o.push_back(words[i]);
  }
  if (got != std::vector<std::vector<std::size_t>>{{8, 9}, {10, 12}, {15, 18}}) {
    return check(false, "length groups");
  }
  std::vector<corpus::DocumentRecord> docs;
  std::set<std::string> planted;
  std::mt19937 rng(8);
  for (int i = 0; i < 30; ++i) {
    int edge = static_cast<int>(rng() % 11);
    std::string id = "doc" + std::to_string(i);
    docs.push_back(testing::edge_document(id, edge, 10 - edge));
    if (edge >= 8) planted.insert(id);
  }
  std::set<std::string> kept;
  for (const auto& d : bias::position_control_filter(docs, corpus::SaliencyPolicy::all_roles(), 0.2, 0.8)) {
    kept.insert(d.doc_id);
  }
  return check(kept == planted, std::to_string(planted.size()) + " planted edge documents kept");
}

bool greedy_agrees(const std::vector<corpus::Sentence>& sentences, const std::string& target) {
  std::vector<std::vector<std::string>> tokens;
  for (const auto& s : sentences) tokens.push_back(position::rouge_tokens(s.text));
  std::vector<oracle::Frac> steps;
  auto expected = oracle::greedy_oracle(tokens, position::rouge_tokens(target), &steps);
  auto got = position::greedy_select(sentences, target);
  if (got.selected_indices.size() != expected.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (got.selected_indices[i] != static_cast<int>(expected[i])) return false;
    if (got.step_scores[i] != Rational(steps[i].num, steps[i].den)) return false;
    if (i > 0 && !(got.step_scores[i] > got.step_scores[i - 1])) return false;
  }
  return true;
}

Outcome greedy_attribution() {
  std::size_t n = 0;
  for (const auto& doc : legal_corpus().documents) {
    if (doc.sentences.size() != 6) continue;
    for (const auto& [system, s] : scoring::summaries_to_score(doc)) {
      if (!greedy_agrees(doc.sentences, s->text)) return check(false, doc.doc_id + "/" + system);
      ++n;
    }
  }
  const std::vector<std::string> vocab{"court", "father", "mother", "access", "order", "appeal", "the", "costs"};
  std::mt19937 rng(9);
  auto sentence = [&] {
    std::string s;
    for (std::size_t i = 0, len = 2 + rng() % 6; i < len; ++i) s += (i ? " " : "") + vocab[rng() % vocab.size()];
    return s;
  };
  for (int trial = 0; trial < 500; ++trial, ++n) {
    std::vector<corpus::Sentence> sentences;
    for (int i = 0; i < 6; ++i) sentences.push_back({i, sentence(), {}, {}});
    if (!greedy_agrees(sentences, sentence() + " " + sentence())) return check(false, "random " + std::to_string(trial));
  }
  return check(n > 500, std::to_string(n) + " summaries agree");
}

Outcome u_shape() {
  // Bins 0-1 cover sentences 0-3 of 21 and bins 8-9 cover 16-20.
  const std::vector<int> left{0, 1, 2, 3}, right{16, 17, 18, 19, 20};
  std::mt19937 rng(10);
  std::vector<position::PositionItem> items;
  std::vector<std::pair<double, double>> per_doc;
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int d = 0; d < 40; ++d) {
    // 8 edge arguments split unevenly between the two bands, 2 in the middle.
    int n_left = 3 + static_cast<int>(rng() % 2);
    std::vector<int> idx(left.begin(), left.begin() + n_left);
    idx.insert(idx.end(), right.end() - (8 - n_left), right.end());
    idx.push_back(6 + static_cast<int>(rng() % 4));
    idx.push_back(11 + static_cast<int>(rng() % 4));
    std::sort(idx.begin(), idx.end());
    auto doc = testing::planted_document("u" + std::to_string(d), 21, idx);
    std::string reference;
    for (int i : idx) reference += doc.sentences[i].text + " ";
    doc.reference_summaries = {{"reference", reference, {}}};
    for (const auto& a : arguments_of(doc)) {
      for (int s : a.sentence_indices) items.push_back({static_cast<std::size_t>(s), 21, a.role});
    }
    double pos = position::mean_salient_position(doc, corpus::SaliencyPolicy::all_roles());
    per_doc.push_back({pos, 1.0 - pos + noise(rng)});
  }
  auto profile = position::position_profile(items).at(std::string(position::kOverall));
  auto r = stats::position_coverage_correlation(per_doc);
  std::ostringstream s;
  s << "outer share " << profile.outer_share() << ", r " << r.statistic << ", p " << r.p_value;
  return check(profile.outer_share() >= 0.78 && r.statistic < -0.9 && r.p_value < 0.05, s.str());
}

Outcome correlation_machinery() {
  auto r = stats::pearson({{1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}});
  auto t = stats::kendall_tau_b({{1, 2, 3, 4}, {1, 3, 2, 4}});
  auto [c, d] = oracle::concordance({1, 2, 3, 4}, {1, 3, 2, 4});
  auto mr = stats::pearson({{1, 2, 3, 4, 5}, {2, 4, 6, 8, 10}});
  auto mt = stats::kendall_tau_b({{1, 2, 3, 4, 5}, {2, 4, 6, 8, 10}});
  bool ok = std::abs(r.statistic - 0.8) <= 1e-9 && c == 5 && d == 1 &&
            std::abs(t.statistic - 2.0 / 3.0) <= 1e-15 && mr.statistic == 1.0 && mt.statistic == 1.0;
  return check(ok, "r=0.8, tau=2/3, monotone 1/1");
}

Outcome determinism() {
  testing::TempDir dir;
  cli::RunConfig config;
  config.input = testing::fixture("legal_irc.jsonl");
  config.out = dir.path() / "out";
  std::set<std::string> reports;
  for (int i = 0; i < 3; ++i) {
    std::ostringstream log;
    cli::cmd_run(config, log);
    reports.insert(testing::read_file(config.artifact("report.json")));
  }
  return check(reports.size() == 1 && !reports.begin()->empty(), "3 runs, byte-identical report.json");
}

// Needs ARC_SMOKE_JUDGE=remote:<model>@<url> plus ARC_API_KEY.
std::optional<Outcome> live_smoke() {
  const char* descriptor = std::getenv("ARC_SMOKE_JUDGE");
  if (descriptor == nullptr || std::getenv("ARC_API_KEY") == nullptr) return std::nullopt;
  testing::TempDir dir;
  cli::RunConfig config;
  config.input = testing::fixture("legal_irc.jsonl");
  config.out = dir.path() / "out";
  config.judge = config.nli = descriptor;
  config.budget = 500;
  std::ostringstream log;
  cli::cmd_run(config, log);
  std::ifstream in(config.artifact("verdicts.jsonl"));
  std::size_t judged = 0, total = 0, missing = 0, not_factual = 0;
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line);
    ++total;
    judged += j.at("status") == "judged";
    if (j.contains("error")) {
      missing += j["error"] == "missing";
      not_factual += j["error"] == "not-factual";
    }
  }
  double parsed = total ? static_cast<double>(judged) / total : 0.0;
  std::ostringstream s;
  s << "parsed " << parsed << ", missing " << missing << ", not-factual " << not_factual;
  return Outcome{parsed >= 0.95 && missing > not_factual, s.str()};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "fullset normalization", 1, fullset_normalization},
      {2, "nested-mean oracle", 5, nested_mean_oracle},
      {3, "degenerate coincidence", 1, degenerate_coincidence},
      {4, "all-supported judge", 5, all_supported_judge},
      {5, "decomposition filter", 1, contempt_filter},
      {6, "fallback guarantee", 1, fallback_guarantee},
      {7, "beta formula", 1, beta_formula},
      {8, "controls", 1, controls},
      {9, "greedy attribution", 5, greedy_attribution},
      {10, "u-shape reconstruction", 10, u_shape},
      {11, "correlation machinery", 1, correlation_machinery},
      {12, "end-to-end determinism", 30, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = o.ok && secs <= c.limit_seconds;
    failures += !ok;
    std::printf("%s %2d %s (%s; %.3fs)\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  try {
    if (auto o = live_smoke()) {
      std::printf("%s 13 live smoke, not gating (%s)\n", o->ok ? "PASS" : "FAIL", o->detail.c_str());
    } else {
      std::printf("SKIP 13 live smoke, not gating (set ARC_SMOKE_JUDGE and ARC_API_KEY)\n");
    }
  } catch (const std::exception& e) {
    std::printf("FAIL 13 live smoke, not gating (%s)\n", e.what());
  }
  return failures == 0 ? 0 : 1;
}
