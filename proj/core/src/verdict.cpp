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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "arc/error.hpp"
#include "arc/judge.hpp"
#include "arc/text.hpp"

namespace arc::judge {

using nlohmann::json;

namespace {

// End (exclusive) of the balanced object starting at raw[begin] == '{', or
// npos. Quote characters open string literals in which braces are inert.
std::size_t balanced_end(std::string_view raw, std::size_t begin) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = begin; i < raw.size(); ++i) {
    char c = raw[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// Rewrites Python-literal habits into JSON: single-quoted strings become
// double-quoted, tuples become arrays, True/False/None become literals.
std::string jsonify(std::string_view obj) {
  std::string out;
  out.reserve(obj.size());
  for (std::size_t i = 0; i < obj.size(); ++i) {
    char c = obj[i];
    if (c == '"') {
      std::size_t j = i + 1;
      out += '"';
      for (; j < obj.size() && obj[j] != '"'; ++j) {
        if (obj[j] == '\\' && j + 1 < obj.size()) out += obj[j++];
        out += obj[j];
      }
      out += '"';
      i = j;
    } else if (c == '\'') {
      std::size_t j = i + 1;
      out += '"';
      for (; j < obj.size() && obj[j] != '\''; ++j) {
        if (obj[j] == '\\' && j + 1 < obj.size()) {
          if (obj[j + 1] == '\'') {
            out += '\'';
            ++j;
            continue;
          }
          out += obj[j++];
          out += obj[j];
        } else if (obj[j] == '"') {
          out += "\\\"";
        } else {
          out += obj[j];
        }
      }
      out += '"';
      i = j;
    } else if (c == '(') {
      out += '[';
    } else if (c == ')') {
      out += ']';
    } else if (obj.substr(i, 4) == "True") {
      out += "true";
      i += 3;
    } else if (obj.substr(i, 5) == "False") {
      out += "false";
      i += 4;
    } else if (obj.substr(i, 4) == "None") {
      out += "null";
      i += 3;
    } else {
      out += c;
    }
  }
  return out;
}

std::optional<json> first_object(std::string_view raw) {
  for (std::size_t pos = raw.find('{'); pos != std::string_view::npos;
       pos = raw.find('{', pos + 1)) {
    std::size_t end = balanced_end(raw, pos);
    if (end == std::string_view::npos) continue;
    std::string_view candidate = raw.substr(pos, end - pos);
    for (const std::string& text : {std::string(candidate), jsonify(candidate)}) {
      try {
        json j = json::parse(text);
        if (j.is_object()) return j;
      } catch (const json::parse_error&) {
      }
    }
  }
  return std::nullopt;
}

std::optional<long long> as_integer(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) return static_cast<long long>(d);
    return std::nullopt;
  }
  if (v.is_string()) {
    std::string s = text::normalize_whitespace(v.get<std::string>());
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
      long long n = std::stoll(s, &used);
      if (used == s.size()) return n;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

const json* find_key(const json& obj, std::initializer_list<std::string_view> keys) {
  for (std::string_view k : keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (text::ascii_lower(it.key()) == k) return &it.value();
    }
  }
  return nullptr;
}

std::string explanation_of(const json& obj) {
  const json* e = find_key(obj, {"explanation", "rationale", "reason"});
  if (e && e->is_string()) return e->get<std::string>();
  return {};
}

[[noreturn]] void fail(const std::string& reason, std::string_view raw) {
  throw UnparseableVerdict(reason, std::string(raw));
}

int decision_bit(const json& v, std::string_view raw) {
  auto n = as_integer(v);
  if (!n || (*n != 0 && *n != 1)) fail("decision must be 0 or 1", raw);
  return static_cast<int>(*n);
}

}  // namespace

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kFullsetRating: return "fullset_rating";
    case VerdictKind::kRoleDecision: return "role_decision";
    case VerdictKind::kAtomicDecision: return "atomic_decision";
    case VerdictKind::kNliLabel: return "nli_label";
    case VerdictKind::kFactMap: return "fact_map";
  }
  return "";
}

std::string_view to_string(ErrorTag tag) {
  switch (tag) {
    case ErrorTag::kSupported: return "supported";
    case ErrorTag::kMissing: return "missing";
    case ErrorTag::kNotFactual: return "not-factual";
  }
  return "";
}

std::string_view to_string(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment: return "entailment";
    case NliLabel::kContradiction: return "contradiction";
    case NliLabel::kNeutral: return "neutral";
  }
  return "";
}

std::optional<ErrorTag> parse_error_tag(std::string_view t) {
  std::string s = text::ascii_lower(text::normalize_whitespace(t));
  std::replace(s.begin(), s.end(), '_', '-');
  std::replace(s.begin(), s.end(), ' ', '-');
  if (s == "supported") return ErrorTag::kSupported;
  if (s == "missing") return ErrorTag::kMissing;
  if (s == "not-factual" || s == "non-factual" || s == "notfactual" || s == "nonfactual") {
    return ErrorTag::kNotFactual;
  }
  return std::nullopt;
}

std::optional<NliLabel> parse_nli_label(std::string_view t) {
  std::string s = text::ascii_lower(text::normalize_whitespace(t));
  if (s == "entailment" || s == "entailed") return NliLabel::kEntailment;
  if (s == "contradiction") return NliLabel::kContradiction;
  if (s == "neutral") return NliLabel::kNeutral;
  return std::nullopt;
}

std::string extract_first_object(std::string_view raw) {
  for (std::size_t pos = raw.find('{'); pos != std::string_view::npos;
       pos = raw.find('{', pos + 1)) {
    std::size_t end = balanced_end(raw, pos);
    if (end != std::string_view::npos) return std::string(raw.substr(pos, end - pos));
  }
  return {};
}

Verdict parse_verdict(VerdictKind kind, std::string_view raw) {
  if (text::word_count(raw) == 0) fail("empty response", raw);
  std::optional<json> parsed = first_object(raw);
  if (!parsed) fail("no JSON object found", raw);
  const json& obj = *parsed;

  Verdict v;
  v.kind = kind;
  v.explanation = explanation_of(obj);

  switch (kind) {
    case VerdictKind::kFullsetRating: {
      const json* r = find_key(obj, {"rating", "score"});
      if (!r) fail("missing \"rating\"", raw);
      auto n = as_integer(*r);
      if (!n) fail("rating is not an integer", raw);
      if (*n < 1 || *n > 4) fail("rating " + std::to_string(*n) + " outside 1..4", raw);
      v.rating = static_cast<int>(*n);
      break;
    }
    case VerdictKind::kRoleDecision: {
      const json* d = find_key(obj, {"decision"});
      if (!d) fail("missing \"decision\"", raw);
      v.decision = decision_bit(*d, raw);
      v.error = v.decision ? ErrorTag::kSupported : ErrorTag::kMissing;
      break;
    }
    case VerdictKind::kAtomicDecision: {
      const json* d = find_key(obj, {"decision"});
      if (!d) fail("missing \"decision\"", raw);
      std::optional<ErrorTag> tag;
      if (d->is_array()) {
        if (d->size() != 2 || !(*d)[1].is_string()) fail("decision tuple must be (d, e)", raw);
        v.decision = decision_bit((*d)[0], raw);
        tag = parse_error_tag((*d)[1].get<std::string>());
        if (!tag) fail("unknown error type", raw);
      } else {
        v.decision = decision_bit(*d, raw);
        const json* e = find_key(obj, {"error", "error_type", "label", "type"});
        if (e) {
          if (!e->is_string()) fail("error type must be a string", raw);
          tag = parse_error_tag(e->get<std::string>());
          if (!tag) fail("unknown error type", raw);
        } else if (v.decision == 1) {
          tag = ErrorTag::kSupported;
        } else {
          fail("decision 0 without an error type", raw);
        }
      }
      if ((v.decision == 1) != (*tag == ErrorTag::kSupported)) {
        fail("decision and error type disagree", raw);
      }
      v.error = *tag;
      break;
    }
    case VerdictKind::kNliLabel: {
      const json* l = find_key(obj, {"label", "prediction", "relation"});
      if (!l || !l->is_string()) fail("missing \"label\"", raw);
      auto label = parse_nli_label(l->get<std::string>());
      if (!label) fail("unknown NLI label", raw);
      v.label = *label;
      break;
    }
    case VerdictKind::kFactMap: {
      std::vector<std::pair<long long, std::string>> facts;
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        std::string key = text::ascii_lower(it.key());
        if (key.rfind("fact", 0) != 0) continue;
        auto n = as_integer(json(key.substr(4)));
        if (!n) continue;
        if (!it->is_string()) fail("fact values must be strings", raw);
        std::string fact = text::normalize_whitespace(it->get<std::string>());
        if (!fact.empty()) facts.emplace_back(*n, std::move(fact));
      }
      if (facts.empty()) fail("empty fact map", raw);
      std::stable_sort(facts.begin(), facts.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& f : facts) v.facts.push_back(std::move(f.second));
      break;
    }
  }
  return v;
}

void export_distillation(const std::vector<DistillationItem>& items, std::ostream& out) {
  for (const DistillationItem& item : items) {
    nlohmann::ordered_json j;
    if (item.level == DistillationItem::Level::kRole) {
      j["argument"] = item.unit;
      j["summary"] = item.summary;
      j["label"] = item.verdict.decision ? "supported" : "unsupported";
    } else {
      j["fact"] = item.unit;
      j["summary"] = item.summary;
      j["label"] = std::string(to_string(item.verdict.error));
    }
    out << j.dump() << '\n';
  }
}

void export_distillation(const std::vector<DistillationItem>& items,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  export_distillation(items, out);
}

}  // namespace arc::judge
