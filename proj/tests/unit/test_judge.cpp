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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "arc/error.hpp"
#include "arc/judge.hpp"
#include "test_support.hpp"

namespace arc::judge {
namespace {

using testing::ScriptedBackend;
using testing::TempDir;

TEST(Prompts, AtomicSubstitutesBoth) {
  std::string p = render_prompt(TemplateId::kAtomic, {{"argument", "ARG-TEXT"}, {"summary", "SUM-TEXT"}});
  EXPECT_NE(p.find("ARG-TEXT"), std::string::npos);
  EXPECT_NE(p.find("SUM-TEXT"), std::string::npos);
  EXPECT_EQ(p.find("{argument}"), std::string::npos);
}

TEST(Prompts, MissingBindingIsNamed) {
  try {
    render_prompt(TemplateId::kFullset, {{"reference_arguments", "x"}});
    FAIL();
  } catch (const MissingBinding& e) {
    EXPECT_NE(std::string(e.what()).find("generated_summary"), std::string::npos);
  }
}

TEST(Prompts, SummarizeTarget) {
  std::string p = render_prompt(TemplateId::kSummarize, {{"document", "Doc."}, {"target_words", "273"}});
  EXPECT_NE(p.find("Summarize in 273 words"), std::string::npos);
  EXPECT_EQ(p.rfind("Read the following text and summarize it: ", 0), 0u);
}

TEST(Prompts, EveryTemplateRendersCompletely) {
  for (TemplateId id : {TemplateId::kDecompose, TemplateId::kFullset, TemplateId::kRole,
                        TemplateId::kAtomic, TemplateId::kNli, TemplateId::kSummarize}) {
    Bindings b;
    for (const auto& name : placeholders(prompt_template(id).body)) b[name] = "<" + name + ">";
    ASSERT_FALSE(b.empty()) << to_string(id);
    std::string once = render_prompt(id, b);
    EXPECT_EQ(once, render_prompt(id, b));
    EXPECT_TRUE(placeholders(once).size() <= b.size());
    for (const auto& [name, value] : b) EXPECT_NE(once.find(value), std::string::npos);
  }
}

TEST(Prompts, BoundValuesAreNotReexpanded) {
  std::string p = render_prompt(TemplateId::kRole, {{"argument", "{summary}"}, {"summary", "S"}});
  EXPECT_NE(p.find("{summary}"), std::string::npos);
}

TEST(Verdicts, FullsetRating) {
  EXPECT_EQ(parse_verdict(VerdictKind::kFullsetRating, R"({"explanation":"ok","rating":3})").rating, 3);
  EXPECT_EQ(parse_verdict(VerdictKind::kFullsetRating, R"({"rating":"4"})").rating, 4);
  EXPECT_THROW(parse_verdict(VerdictKind::kFullsetRating, R"({"rating":5})"), UnparseableVerdict);
  EXPECT_THROW(parse_verdict(VerdictKind::kFullsetRating, R"({"rating":0})"), UnparseableVerdict);
  EXPECT_THROW(parse_verdict(VerdictKind::kFullsetRating, R"({"explanation":"no score"})"),
               UnparseableVerdict);
}

TEST(Verdicts, RoleWithPreamble) {
  Verdict v = parse_verdict(VerdictKind::kRoleDecision, R"(Sure! {"explanation":"x","decision":1} Hope this helps.)");
  EXPECT_EQ(v.decision, 1);
  EXPECT_EQ(v.explanation, "x");
  EXPECT_THROW(parse_verdict(VerdictKind::kRoleDecision, R"({"decision":2})"), UnparseableVerdict);
  EXPECT_THROW(parse_verdict(VerdictKind::kRoleDecision, "no json at all"), UnparseableVerdict);
}

TEST(Verdicts, AtomicForms) {
  Verdict a = parse_verdict(VerdictKind::kAtomicDecision,
                            R"({"decision": [0, "not-factual"], "explanation": "contradicts"})");
  EXPECT_EQ(a.decision, 0);
  EXPECT_EQ(a.error, ErrorTag::kNotFactual);
  Verdict b = parse_verdict(VerdictKind::kAtomicDecision, R"({"explanation": "e", "decision": (1, "supported")})");
  EXPECT_EQ(b.decision, 1);
  EXPECT_EQ(b.error, ErrorTag::kSupported);
  Verdict c = parse_verdict(VerdictKind::kAtomicDecision, R"({'decision': 0, 'error': 'missing'})");
  EXPECT_EQ(c.error, ErrorTag::kMissing);
  // d = 1 must pair with supported.
  EXPECT_THROW(parse_verdict(VerdictKind::kAtomicDecision, R"({"decision": [1, "missing"]})"),
               UnparseableVerdict);
  EXPECT_THROW(parse_verdict(VerdictKind::kAtomicDecision, R"({"decision": [0, "supported"]})"),
               UnparseableVerdict);
}

TEST(Verdicts, BracesInsideStrings) {
  Verdict v = parse_verdict(VerdictKind::kRoleDecision, R"({"explanation":"a } brace","decision":0})");
  EXPECT_EQ(v.decision, 0);
  EXPECT_EQ(extract_first_object(R"(x {"a": "}"} y)"), R"({"a": "}"})");
  EXPECT_EQ(extract_first_object("nothing"), "");
}

TEST(Verdicts, FactMapOrder) {
  Verdict v = parse_verdict(VerdictKind::kFactMap,
                            R"({"fact2": "b", "fact10": "j", "fact1": "a"})");
  EXPECT_EQ(v.facts, (std::vector<std::string>{"a", "b", "j"}));
  EXPECT_THROW(parse_verdict(VerdictKind::kFactMap, "{}"), UnparseableVerdict);
}

TEST(Verdicts, NliLabel) {
  EXPECT_EQ(parse_verdict(VerdictKind::kNliLabel, R"({"label":"Entailment"})").label, NliLabel::kEntailment);
  EXPECT_THROW(parse_verdict(VerdictKind::kNliLabel, R"({"label":"maybe"})"), UnparseableVerdict);
}

TEST(Lexical, ContainmentExamples) {
  EXPECT_EQ(lexical_entail("the court dismissed the appeal", "the appeal was dismissed").label,
            NliLabel::kEntailment);
  EXPECT_EQ(lexical_entail("the court dismissed the appeal", "the court awarded damages").label,
            NliLabel::kNeutral);
  const std::string s = "The father applied to have the mother cited for contempt.";
  EXPECT_EQ(lexical_entail(s, s).label, NliLabel::kEntailment);
}

TEST(Lexical, ContemptPair) {
  const std::string arg =
      "The father applied to have the mother cited for contempt for denial of access.";
  EXPECT_EQ(lexical_entail(arg, "The father applied to have the mother cited for contempt.").label,
            NliLabel::kEntailment);
  EXPECT_EQ(lexical_entail(arg, "The father applied for denial of access.").label,
            NliLabel::kNeutral);
}

TEST(Lexical, MonotoneUnderConcatenation) {
  std::mt19937 rng(7);
  const std::vector<std::string> vocab{"court", "appeal", "dismissed", "father", "mother",
                                       "access", "contempt", "order", "the", "of", "was"};
  auto phrase = [&](int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += (out.empty() ? "" : " ") + vocab[rng() % vocab.size()];
    return out;
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::string premise = phrase(8), hypothesis = phrase(3), extra = phrase(5);
    if (lexical_entail(premise, hypothesis).label != NliLabel::kEntailment) continue;
    EXPECT_EQ(lexical_entail(premise + " " + extra, hypothesis).label, NliLabel::kEntailment);
    EXPECT_EQ(lexical_entail(extra + " " + premise, hypothesis).label, NliLabel::kEntailment);
  }
}

TEST(Lexical, BackendNeverUsesNetwork) {
  LexicalBackend lex;
  VerdictCache cache;
  JudgeClient client(lex, cache);
  auto req = make_request(TemplateId::kRole, {{"argument", "appeal dismissed"}, {"summary", "the appeal was dismissed"}});
  EXPECT_EQ(client.judge(req, VerdictKind::kRoleDecision).decision, 1);
  client.judge(req, VerdictKind::kRoleDecision);
  EXPECT_EQ(client.network_calls(), 0u);
  EXPECT_EQ(cache.size(), 0u);
  EXPECT_FALSE(lex.uses_network());
}

TEST(Lexical, AtomicThreeWay) {
  LexicalBackend lex;
  auto atomic = [&](const std::string& fact, const std::string& summary) {
    return parse_verdict(VerdictKind::kAtomicDecision,
                         lex.complete(make_request(TemplateId::kAtomic, {{"argument", fact}, {"summary", summary}})));
  };
  EXPECT_EQ(atomic("the appeal was dismissed", "The court dismissed the appeal.").error, ErrorTag::kSupported);
  EXPECT_EQ(atomic("the tenant paid rent", "The court dismissed the appeal.").error, ErrorTag::kMissing);
  EXPECT_EQ(atomic("the father applied for access",
                   "The father won the hearing after a long trial. Later the mother applied for an order restricting access.").error,
            ErrorTag::kNotFactual);
}

TEST(Cache, KeyDependsOnEveryField) {
  const std::string k = cache_key("b", "m", 0.0, "p");
  EXPECT_EQ(k, cache_key("b", "m", 0.0, "p"));
  EXPECT_EQ(k.size(), 64u);
  EXPECT_NE(k, cache_key("b2", "m", 0.0, "p"));
  EXPECT_NE(k, cache_key("b", "m2", 0.0, "p"));
  EXPECT_NE(k, cache_key("b", "m", 0.1, "p"));
  EXPECT_NE(k, cache_key("b", "m", 0.0, "p2"));
  // Length prefixes keep field boundaries apart.
  EXPECT_NE(cache_key("ab", "c", 0.0, "p"), cache_key("a", "bc", 0.0, "p"));
}

TEST(Cache, PersistsAndLastRecordWins) {
  TempDir dir;
  {
    VerdictCache cache(dir / "cache.jsonl");
    cache.store({"k1", "first", "role", "2026-01-01T00:00:00Z"});
    cache.store({"k1", "second", "role", "2026-01-01T00:00:01Z"});
    cache.store({"k2", "other", "role", "2026-01-01T00:00:02Z"});
  }
  {
    std::ofstream torn(dir / "cache.jsonl", std::ios::app);
    torn << R"({"key":"k3","raw_resp)";
  }
  VerdictCache again(dir / "cache.jsonl");
  EXPECT_EQ(again.lookup("k1"), "second");
  EXPECT_EQ(again.lookup("k2"), "other");
  EXPECT_FALSE(again.lookup("k3").has_value());
  EXPECT_EQ(again.size(), 2u);
}

TEST(Client, SecondCallServedFromCache) {
  ScriptedBackend net("net", testing::all_supported, true);
  TempDir dir;
  VerdictCache cache(dir / "cache.jsonl");
  JudgeClient client(net, cache, testing::fast_options());
  auto req = make_request(TemplateId::kRole, {{"argument", "a"}, {"summary", "s"}});
  client.judge(req, VerdictKind::kRoleDecision);
  client.judge(req, VerdictKind::kRoleDecision);
  EXPECT_EQ(net.calls(), 1);
  EXPECT_EQ(client.network_calls(), 1u);
  EXPECT_EQ(client.cache_hits(), 1u);

  // A fresh process reading the same file makes no calls.
  VerdictCache reread(dir / "cache.jsonl");
  JudgeClient again(net, reread, testing::fast_options());
  again.judge(req, VerdictKind::kRoleDecision);
  EXPECT_EQ(net.calls(), 1);
}

TEST(Client, TransientFailuresExhaustRetries) {
  int attempts = 0;
  ScriptedBackend net("net", [&](const Request&) -> std::string {
    ++attempts;
    throw TransientFailure("HTTP 500");
  }, true);
  net.mutable_config().max_retries = 2;
  VerdictCache cache;
  JudgeClient client(net, cache, testing::fast_options());
  EXPECT_THROW(client.invoke(make_request(TemplateId::kNli, {{"premise", "p"}, {"hypothesis", "h"}})),
               TransportError);
  EXPECT_EQ(attempts, 3);
}

TEST(Client, RecoversAfterTransientFailure) {
  int attempts = 0;
  ScriptedBackend net("net", [&](const Request& r) -> std::string {
    if (++attempts == 1) throw TransientFailure("reset");
    return testing::all_supported(r);
  }, true);
  VerdictCache cache;
  JudgeClient client(net, cache, testing::fast_options());
  auto v = client.judge(make_request(TemplateId::kRole, {{"argument", "a"}, {"summary", "s"}}),
                        VerdictKind::kRoleDecision);
  EXPECT_EQ(v.decision, 1);
  EXPECT_EQ(attempts, 2);
}

TEST(Client, UnparseableIsRetriedThenRaised) {
  ScriptedBackend net("net", [](const Request&) { return std::string("I cannot answer."); }, true);
  net.mutable_config().max_retries = 2;
  VerdictCache cache;
  JudgeClient client(net, cache, testing::fast_options());
  EXPECT_THROW(client.judge(make_request(TemplateId::kRole, {{"argument", "a"}, {"summary", "s"}}),
                            VerdictKind::kRoleDecision),
               UnparseableVerdict);
  EXPECT_EQ(net.calls(), 3);
}

TEST(Client, ReparseBypassesStaleCacheEntry) {
  int n = 0;
  ScriptedBackend net("net", [&](const Request&) {
    return std::string(++n == 1 ? "garbage" : R"({"decision": 1})");
  }, true);
  VerdictCache cache;
  JudgeClient client(net, cache, testing::fast_options());
  auto req = make_request(TemplateId::kRole, {{"argument", "a"}, {"summary", "s"}});
  EXPECT_EQ(client.judge(req, VerdictKind::kRoleDecision).decision, 1);
  EXPECT_EQ(client.first_attempt_parses(), 0u);
  // The good response now shadows the bad one.
  EXPECT_EQ(client.judge(req, VerdictKind::kRoleDecision).decision, 1);
  EXPECT_EQ(net.calls(), 2);
}

TEST(Client, BudgetCap) {
  ScriptedBackend net("net", testing::all_supported, true);
  VerdictCache cache;
  auto options = testing::fast_options();
  options.budget = 1;
  JudgeClient client(net, cache, options);
  client.invoke(make_request(TemplateId::kRole, {{"argument", "a"}, {"summary", "s"}}));
  EXPECT_THROW(client.invoke(make_request(TemplateId::kRole, {{"argument", "b"}, {"summary", "s"}})),
               BudgetExceeded);
}

TEST(Client, ConcurrentCallsRespectInFlightCap) {
  std::atomic<int> in_flight{0}, peak{0};
  ScriptedBackend net("net", [&](const Request& r) {
    int now = ++in_flight;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {}
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --in_flight;
    return testing::all_supported(r);
  }, true);
  VerdictCache cache;
  auto options = testing::fast_options();
  options.max_in_flight = 2;
  JudgeClient client(net, cache, options);
  std::vector<std::jthread> workers;
  for (int t = 0; t < 6; ++t) {
    workers.emplace_back([&, t] {
      client.invoke(make_request(TemplateId::kRole, {{"argument", std::to_string(t)}, {"summary", "s"}}));
    });
  }
  workers.clear();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(net.calls(), 6);
}

TEST(Backends, DescriptorParsing) {
  EXPECT_EQ(parse_backend_descriptor("lexical").kind, BackendKind::kLexical);
  auto r = parse_backend_descriptor("remote:gpt-4o@https://api.example.com/v1");
  EXPECT_EQ(r.kind, BackendKind::kRemote);
  EXPECT_EQ(r.model_name, "gpt-4o");
  EXPECT_EQ(r.endpoint, "https://api.example.com/v1");
  EXPECT_EQ(r.temperature, 0.0);
  EXPECT_THROW(parse_backend_descriptor("remote:gpt-4o"), ValidationError);
  EXPECT_THROW(parse_backend_descriptor("oracle"), ValidationError);
}

TEST(Backends, RemoteRequestBody) {
  RemoteBackend b(parse_backend_descriptor("remote:m@http://127.0.0.1:1/v1"));
  auto j = nlohmann::json::parse(b.request_body("hello"));
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["temperature"], 0);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "hello");
}

class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string completion(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

class RemoteTest : public ::testing::Test {
 protected:
  void SetUp() override { ::setenv("ARC_API_KEY", "test-key", 1); }
  void TearDown() override { ::unsetenv("ARC_API_KEY"); }
};

TEST_F(RemoteTest, ServerErrorsExhaustRetries) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
  });
  auto cfg = parse_backend_descriptor("remote:m@" + srv.endpoint());
  cfg.max_retries = 2;
  RemoteBackend backend(cfg);
  VerdictCache cache;
  JudgeClient client(backend, cache, testing::fast_options());
  EXPECT_THROW(client.invoke(make_request(TemplateId::kNli, {{"premise", "p"}, {"hypothesis", "h"}})),
               TransportError);
  EXPECT_EQ(hits.load(), 3);
}

TEST_F(RemoteTest, CompletionRoundTripAndCache) {
  LocalServer srv;
  std::atomic<int> hits{0};
  std::string auth, body;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    auth = req.get_header_value("Authorization");
    body = req.body;
    res.set_content(completion(R"(Here you go: {"explanation": "fine", "rating": 3})"), "application/json");
  });
  RemoteBackend backend(parse_backend_descriptor("remote:m@" + srv.endpoint()));
  TempDir dir;
  VerdictCache cache(dir / "cache.jsonl");
  JudgeClient client(backend, cache, testing::fast_options());
  auto req = make_request(TemplateId::kFullset, {{"reference_arguments", "issue: x"}, {"generated_summary", "s"}});
  EXPECT_EQ(client.judge(req, VerdictKind::kFullsetRating).rating, 3);
  EXPECT_EQ(client.judge(req, VerdictKind::kFullsetRating).rating, 3);
  EXPECT_EQ(hits.load(), 1);
  EXPECT_EQ(auth, "Bearer test-key");
  EXPECT_EQ(nlohmann::json::parse(body)["messages"][0]["content"], req.prompt);

  std::ifstream in(dir / "cache.jsonl");
  std::string line;
  std::getline(in, line);
  auto j = nlohmann::json::parse(line);
  for (const char* k : {"key", "raw_response", "kind", "created_at"}) EXPECT_TRUE(j.contains(k)) << k;
}

TEST_F(RemoteTest, MissingKeyIsAuthError) {
  ::unsetenv("ARC_API_KEY");
  RemoteBackend backend(parse_backend_descriptor("remote:m@http://127.0.0.1:9/v1"));
  VerdictCache cache;
  JudgeClient client(backend, cache, testing::fast_options());
  EXPECT_THROW(client.invoke(make_request(TemplateId::kNli, {{"premise", "p"}, {"hypothesis", "h"}})),
               AuthError);
}

TEST_F(RemoteTest, RejectedCredentialIsAuthError) {
  LocalServer srv;
  srv.server().Post("/v1/chat/completions",
                    [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  RemoteBackend backend(parse_backend_descriptor("remote:m@" + srv.endpoint()));
  VerdictCache cache;
  JudgeClient client(backend, cache, testing::fast_options());
  EXPECT_THROW(client.invoke(make_request(TemplateId::kNli, {{"premise", "p"}, {"hypothesis", "h"}})),
               AuthError);
}

TEST(Distillation, ThreeWayLabels) {
  std::vector<DistillationItem> items;
  for (auto tag : {ErrorTag::kSupported, ErrorTag::kMissing, ErrorTag::kNotFactual}) {
    Verdict v;
    v.kind = VerdictKind::kAtomicDecision;
    v.decision = tag == ErrorTag::kSupported;
    v.error = tag;
    items.push_back({DistillationItem::Level::kAtomic, "fact", "summary", v});
  }
  std::ostringstream out;
  export_distillation(items, out);
  std::istringstream in(out.str());
  std::vector<std::string> labels;
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["fact"], "fact");
    labels.push_back(j["label"]);
  }
  EXPECT_EQ(labels, (std::vector<std::string>{"supported", "missing", "not-factual"}));

  std::ostringstream empty;
  export_distillation({}, empty);
  EXPECT_TRUE(empty.str().empty());
}

TEST(Distillation, RoleLabels) {
  Verdict v;
  v.decision = 0;
  std::ostringstream out;
  export_distillation({{DistillationItem::Level::kRole, "arg", "sum", v}}, out);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["argument"], "arg");
  EXPECT_EQ(j["label"], "unsupported");
}

}  // namespace
}  // namespace arc::judge
