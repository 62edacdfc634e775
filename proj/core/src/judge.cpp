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

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <thread>

#include <nlohmann/json.hpp>

#include "arc/error.hpp"
#include "arc/judge.hpp"

namespace arc::judge {

namespace {

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_field(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
  out += '\n';
}

}  // namespace

BackendConfig parse_backend_descriptor(std::string_view d) {
  BackendConfig config;
  if (d == "lexical") {
    config.backend_id = "lexical";
    config.kind = BackendKind::kLexical;
    return config;
  }
  constexpr std::string_view kRemote = "remote:";
  if (d.substr(0, kRemote.size()) == kRemote) {
    std::string_view rest = d.substr(kRemote.size());
    std::size_t at = rest.find('@');
    if (at != std::string_view::npos && at > 0 && at + 1 < rest.size()) {
      config.kind = BackendKind::kRemote;
      config.model_name = std::string(rest.substr(0, at));
      config.endpoint = std::string(rest.substr(at + 1));
      config.backend_id = "remote:" + config.model_name;
      return config;
    }
  }
  throw ValidationError("backend descriptor must be 'lexical' or 'remote:<model>@<url>', got '" +
                        std::string(d) + "'");
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendKind::kLexical) return std::make_unique<LexicalBackend>(config);
  return std::make_unique<RemoteBackend>(config);
}

std::string cache_key(std::string_view backend_id, std::string_view model_name,
                      double temperature, std::string_view prompt) {
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.17g", temperature);
  std::string material;
  append_field(material, backend_id);
  append_field(material, model_name);
  append_field(material, temp);
  append_field(material, prompt);

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(material.data(), material.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

VerdictCache::VerdictCache(const std::filesystem::path& path) : path_(path) {
  if (std::ifstream in(path, std::ios::binary); in) {
    std::string line;
    while (std::getline(in, line)) {
      try {
        auto j = nlohmann::json::parse(line);
        CacheEntry e{j.at("key").get<std::string>(), j.at("raw_response").get<std::string>(),
                     j.value("kind", ""), j.value("created_at", "")};
        entries_[e.key] = std::move(e);
      } catch (const std::exception&) {
        // A torn final line from an interrupted append is ignored.
      }
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw ValidationError("cannot open cache " + path.string());
}

std::optional<std::string> VerdictCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.raw_response;
}

void VerdictCache::store(CacheEntry entry) {
  if (entry.created_at.empty()) entry.created_at = now_iso8601();
  std::lock_guard lock(mutex_);
  if (out_.is_open()) {
    nlohmann::json j{{"key", entry.key},
                     {"raw_response", entry.raw_response},
                     {"kind", entry.kind},
                     {"created_at", entry.created_at}};
    out_ << j.dump() << '\n';
    out_.flush();
  }
  entries_[entry.key] = std::move(entry);
}

std::size_t VerdictCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

TokenBucket::TokenBucket(double requests_per_minute, double burst)
    : rate_per_second_(requests_per_minute / 60.0),
      burst_(std::max(burst, 1.0)),
      tokens_(std::max(burst, 1.0)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
  if (rate_per_second_ <= 0) return;
  for (;;) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mutex_);
      auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(burst_, tokens_ + rate_per_second_ *
                                               std::chrono::duration<double>(now - last_).count());
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_per_second_);
    }
    std::this_thread::sleep_for(wait);
  }
}

JudgeClient::JudgeClient(Backend& backend, VerdictCache& cache, ClientOptions options)
    : backend_(backend),
      cache_(cache),
      options_(options),
      bucket_(options.requests_per_minute) {
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

void JudgeClient::wait_for_slot() {
  std::unique_lock lock(slot_mutex_);
  slot_cv_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
  ++in_flight_;
}

void JudgeClient::release_slot() {
  {
    std::lock_guard lock(slot_mutex_);
    --in_flight_;
  }
  slot_cv_.notify_one();
}

std::string JudgeClient::call_backend(const Request& request) {
  if (!backend_.uses_network()) return backend_.complete(request);
  const int retries = std::max(0, backend_.config().max_retries);
  for (int attempt = 0;; ++attempt) {
    {
      std::lock_guard lock(slot_mutex_);
      if (options_.budget && network_calls_ >= *options_.budget) {
        throw BudgetExceeded(*options_.budget);
      }
      ++network_calls_;
    }
    bucket_.acquire();
    wait_for_slot();
    try {
      std::string raw = backend_.complete(request);
      release_slot();
      return raw;
    } catch (const TransientFailure& e) {
      release_slot();
      if (attempt >= retries) {
        throw TransportError(backend_id() + ": " + e.what() + " (after " +
                             std::to_string(attempt + 1) + " attempts)");
      }
    } catch (...) {
      release_slot();
      throw;
    }
    std::this_thread::sleep_for(options_.backoff_base * (1LL << std::min(attempt, 16)));
  }
}

std::string JudgeClient::invoke(const Request& request, bool bypass_cache) {
  if (!backend_.uses_network()) return backend_.complete(request);
  const BackendConfig& c = backend_.config();
  const std::string key = cache_key(c.backend_id, c.model_name, c.temperature, request.prompt);
  if (!bypass_cache) {
    if (auto hit = cache_.lookup(key)) {
      ++cache_hits_;
      return *hit;
    }
  }
  std::string raw = call_backend(request);
  cache_.store({key, raw, std::string(to_string(request.template_id)), {}});
  return raw;
}

Verdict JudgeClient::judge(const Request& request, VerdictKind kind) {
  ++judged_;
  const int retries = std::max(0, backend_.config().max_retries);
  for (int attempt = 0;; ++attempt) {
    std::string raw = invoke(request, attempt > 0);
    try {
      Verdict v = parse_verdict(kind, raw);
      if (attempt == 0) ++first_attempt_parses_;
      return v;
    } catch (const UnparseableVerdict&) {
      if (attempt >= retries) throw;
    }
  }
}

}  // namespace arc::judge
