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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace arc::judge {

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

enum class TemplateId { kDecompose, kFullset, kRole, kAtomic, kNli, kSummarize };

std::string_view to_string(TemplateId id);

using Bindings = std::map<std::string, std::string>;

struct PromptTemplate {
  TemplateId template_id;
  std::string_view body;
};

const PromptTemplate& prompt_template(TemplateId id);

// Placeholder names ({name}) in order of first appearance.
std::vector<std::string> placeholders(std::string_view body);

// Single-pass substitution of {name} placeholders. Substituted values are not
// rescanned. Throws MissingBinding for any placeholder without a binding.
std::string render_prompt(std::string_view body, const Bindings& bindings);
std::string render_prompt(TemplateId id, const Bindings& bindings);

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class VerdictKind {
  kFullsetRating,
  kRoleDecision,
  kAtomicDecision,
  kNliLabel,
  kFactMap,
};

enum class ErrorTag { kSupported, kMissing, kNotFactual };
enum class NliLabel { kEntailment, kContradiction, kNeutral };

std::string_view to_string(VerdictKind kind);
std::string_view to_string(ErrorTag tag);  // "supported", "missing", "not-factual"
std::string_view to_string(NliLabel label);
std::optional<ErrorTag> parse_error_tag(std::string_view text);
std::optional<NliLabel> parse_nli_label(std::string_view text);

struct Verdict {
  VerdictKind kind = VerdictKind::kRoleDecision;
  int rating = 0;                            // fullset, 1..4
  int decision = 0;                          // role and atomic, 0 or 1
  ErrorTag error = ErrorTag::kMissing;       // atomic; supported iff decision == 1
  NliLabel label = NliLabel::kNeutral;       // nli
  std::vector<std::string> facts;            // fact map, in key order
  std::string explanation;
};

// First balanced {...} object in `raw`, honoring string literals. Empty when
// none exists.
std::string extract_first_object(std::string_view raw);

// Tolerant parse: leading and trailing prose is ignored, Python-style tuples
// "(0, "missing")" are accepted as arrays and numeric strings as numbers.
// Throws UnparseableVerdict when the object is missing or violates the kind's
// field contract. Never substitutes a default score.
Verdict parse_verdict(VerdictKind kind, std::string_view raw);

// ---------------------------------------------------------------------------
// Lexical entailment
// ---------------------------------------------------------------------------

// Lowercased, stopword-free, suffix-stripped tokens in text order.
std::vector<std::string> content_tokens(std::string_view text);

// Two content tokens adjacent in a hypothesis must sit at most this many
// content tokens apart somewhere in the premise.
inline constexpr std::size_t kProximityWindow = 3;

// Entailment iff every hypothesis content token occurs in the premise and
// each adjacent pair of them co-occurs within kProximityWindow premise
// tokens. Otherwise neutral.
Verdict lexical_entail(std::string_view premise, std::string_view hypothesis);

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

enum class BackendKind { kRemote, kLexical };

struct BackendConfig {
  std::string backend_id;
  BackendKind kind = BackendKind::kLexical;
  std::string endpoint;    // remote only, e.g. https://api.openai.com/v1
  std::string model_name;  // remote only
  double temperature = 0.0;
  int max_retries = 2;
  std::optional<int> max_tokens;
  std::chrono::milliseconds timeout{60000};
};

// "lexical" or "remote:<model>@<endpoint>".
BackendConfig parse_backend_descriptor(std::string_view descriptor);

// One rendered prompt plus the structured inputs it was rendered from.
// Remote backends only see `prompt`; the lexical judge reads `bindings`.
struct Request {
  TemplateId template_id;
  Bindings bindings;
  std::string prompt;
};

Request make_request(TemplateId id, Bindings bindings);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual const BackendConfig& config() const = 0;
  virtual bool uses_network() const = 0;
  // Throws TransientFailure for retryable transport errors.
  virtual std::string complete(const Request& request) = 0;
};

// Thrown by backends for failures worth retrying (5xx, connection reset).
class TransientFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic judge answering every template from token containment.
class LexicalBackend final : public Backend {
 public:
  explicit LexicalBackend(BackendConfig config = {"lexical", BackendKind::kLexical});
  const BackendConfig& config() const override { return config_; }
  bool uses_network() const override { return false; }
  std::string complete(const Request& request) override;

 private:
  BackendConfig config_;
};

// Chat-completions client. Reads ARC_API_KEY at call time.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(BackendConfig config);
  const BackendConfig& config() const override { return config_; }
  bool uses_network() const override { return true; }
  std::string complete(const Request& request) override;

  // Request body sent for `prompt`.
  std::string request_body(const std::string& prompt) const;

 private:
  BackendConfig config_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

// Splits an argument into clause-level candidate facts: sentences, then
// coordinated clauses ("and", ";"). Fragments without content tokens drop.
std::vector<std::string> lexical_clauses(std::string_view argument);

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

struct CacheEntry {
  std::string key;
  std::string raw_response;
  std::string kind;
  std::string created_at;  // ISO-8601 UTC
};

// SHA-256 hex over the length-prefixed fields.
std::string cache_key(std::string_view backend_id, std::string_view model_name,
                      double temperature, std::string_view prompt);

// Append-only JSONL cache. Later records for a key shadow earlier ones.
class VerdictCache {
 public:
  VerdictCache() = default;  // memory only
  explicit VerdictCache(const std::filesystem::path& path);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(CacheEntry entry);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, CacheEntry> entries_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
};

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

class TokenBucket {
 public:
  // Zero means unlimited.
  explicit TokenBucket(double requests_per_minute, double burst = 1.0);
  void acquire();

 private:
  double rate_per_second_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

struct ClientOptions {
  std::optional<std::size_t> budget;  // max network calls
  std::size_t max_in_flight = 4;
  double requests_per_minute = 0.0;
  std::chrono::milliseconds backoff_base{500};
};

// Wraps a backend with caching, retries, rate limiting and a call budget.
class JudgeClient {
 public:
  JudgeClient(Backend& backend, VerdictCache& cache, ClientOptions options = {});

  const BackendConfig& config() const { return backend_.config(); }
  const std::string& backend_id() const { return backend_.config().backend_id; }

  // Cache first; on a miss calls the backend with up to max_retries retries
  // on transient failures (exponential backoff) and stores the response.
  std::string invoke(const Request& request, bool bypass_cache = false);

  // invoke + parse_verdict. An unparseable response is re-requested (bypassing
  // the cache) up to max_retries times before UnparseableVerdict escapes.
  Verdict judge(const Request& request, VerdictKind kind);

  std::size_t network_calls() const { return network_calls_; }
  std::size_t cache_hits() const { return cache_hits_; }
  std::size_t first_attempt_parses() const { return first_attempt_parses_; }
  std::size_t parse_attempts() const { return judged_; }

 private:
  std::string call_backend(const Request& request);
  void wait_for_slot();
  void release_slot();

  Backend& backend_;
  VerdictCache& cache_;
  ClientOptions options_;
  TokenBucket bucket_;
  std::mutex slot_mutex_;
  std::condition_variable slot_cv_;
  std::size_t in_flight_ = 0;
  std::atomic<std::size_t> network_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> first_attempt_parses_{0};
  std::atomic<std::size_t> judged_{0};
};

// ---------------------------------------------------------------------------
// Distillation export
// ---------------------------------------------------------------------------

struct DistillationItem {
  enum class Level { kRole, kAtomic };
  Level level = Level::kAtomic;
  std::string unit;  // argument or fact text
  std::string summary;
  Verdict verdict;
};

// One JSON object per line: {"argument"|"fact": str, "summary": str,
// "label": str}. Role labels are supported/unsupported, atomic labels
// supported/missing/not-factual.
void export_distillation(const std::vector<DistillationItem>& items,
                         std::ostream& out);
void export_distillation(const std::vector<DistillationItem>& items,
                         const std::filesystem::path& path);

}  // namespace arc::judge
