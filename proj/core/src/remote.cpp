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

#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "arc/error.hpp"
#include "arc/judge.hpp"

namespace arc::judge {

RemoteBackend::RemoteBackend(BackendConfig config) : config_(std::move(config)) {
  config_.kind = BackendKind::kRemote;
  if (config_.endpoint.empty()) throw ValidationError("remote backend needs an endpoint");
  if (config_.backend_id.empty()) config_.backend_id = "remote:" + config_.model_name;
}

std::string RemoteBackend::request_body(const std::string& prompt) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model_name;
  body["temperature"] = config_.temperature;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", prompt}}});
  if (config_.max_tokens) body["max_tokens"] = *config_.max_tokens;
  return body.dump();
}

std::string RemoteBackend::complete(const Request& request) {
  const char* key = std::getenv("ARC_API_KEY");
  if (key == nullptr || *key == '\0') {
    throw AuthError("ARC_API_KEY is not set for " + config_.backend_id);
  }

  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) {
    throw TransportError("malformed endpoint URL '" + config_.endpoint + "'");
  }
  std::string base = m[1].str();
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Client client(base);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
  client.set_connection_timeout(static_cast<time_t>(seconds));
  client.set_read_timeout(static_cast<time_t>(seconds));
  httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};

  auto res = client.Post(path, headers, request_body(request.prompt), "application/json");
  if (!res) throw TransientFailure("request failed: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403) {
    throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransientFailure("HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception& e) {
    throw TransientFailure(std::string("malformed completion body: ") + e.what());
  }
}

}  // namespace arc::judge
