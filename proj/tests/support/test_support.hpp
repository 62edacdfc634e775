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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <functional>
#include <random>
#include <string>

#include "arc/judge.hpp"

namespace arc::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ARC_TEST_DATA_DIR) / name;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("arc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Backend answering from a callback. Optionally reports itself as networked.
class ScriptedBackend final : public judge::Backend {
 public:
  using Responder = std::function<std::string(const judge::Request&)>;

  ScriptedBackend(std::string id, Responder responder, bool network = false)
      : responder_(std::move(responder)), network_(network) {
    config_.backend_id = std::move(id);
    config_.kind = network ? judge::BackendKind::kRemote : judge::BackendKind::kLexical;
    config_.model_name = config_.backend_id;
  }

  const judge::BackendConfig& config() const override { return config_; }
  bool uses_network() const override { return network_; }
  std::string complete(const judge::Request& request) override {
    ++calls_;
    return responder_(request);
  }

  judge::BackendConfig& mutable_config() { return config_; }
  int calls() const { return calls_; }

 private:
  judge::BackendConfig config_;
  Responder responder_;
  bool network_;
  std::atomic<int> calls_{0};
};

// Everything is covered: rating 4, decision 1, supported, entailment.
inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string all_supported(const judge::Request& r) {
  switch (r.template_id) {
    case judge::TemplateId::kFullset: return R"({"explanation": "all", "rating": 4})";
    case judge::TemplateId::kRole: return R"({"explanation": "yes", "decision": 1})";
    case judge::TemplateId::kAtomic:
      return R"({"explanation": "yes", "decision": [1, "supported"]})";
    case judge::TemplateId::kNli: return R"({"label": "entailment"})";
    default: return judge::LexicalBackend().complete(r);
  }
}

// Entailment model that rejects every hypothesis.
inline std::string reject_all(const judge::Request&) { return R"({"label": "contradiction"})"; }

inline judge::ClientOptions fast_options() {
  judge::ClientOptions o;
  o.backoff_base = std::chrono::milliseconds(1);
  return o;
}

}  // namespace arc::testing
