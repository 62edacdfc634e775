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
#include <map>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "arc/judge.hpp"
#include "arc/text.hpp"

namespace arc::judge {

namespace {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",      "about",  "after", "all",     "also",   "am",     "an",    "and",
      "any",    "are",    "as",    "at",      "be",     "been",   "before", "being",
      "between", "both",  "but",   "by",      "can",    "could",  "did",   "do",
      "does",   "during", "each",  "either",  "for",    "from",   "had",   "has",
      "have",   "having", "he",    "her",     "here",   "his",    "i",     "if",
      "in",     "into",   "is",    "it",      "its",    "may",    "me",    "might",
      "must",   "my",     "neither", "of",    "on",     "onto",   "or",    "our",
      "over",   "shall",  "she",   "should",  "so",     "such",   "than",  "that",
      "the",    "their",  "them",  "then",    "there",  "these",  "they",  "this",
      "those",  "to",     "under", "upon",    "was",    "we",     "were",  "what",
      "which",  "who",    "whom",  "whose",   "will",   "with",   "would", "you",
      "your",
  };
  return words;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string stem(std::string w) {
  if (w.size() > 4 && (ends_with(w, "ies") || ends_with(w, "ied"))) {
    w.replace(w.size() - 3, 3, "y");
  } else if (w.size() > 5 && ends_with(w, "ing")) {
    w.resize(w.size() - 3);
  } else if (w.size() > 4 && ends_with(w, "ed")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 4 && ends_with(w, "es")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 4 && ends_with(w, "ly")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss")) {
    w.resize(w.size() - 1);
  }
  if (w.size() > 3 && ends_with(w, "e")) w.pop_back();
  return w;
}

bool token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool entails(const std::vector<std::string>& premise,
             const std::vector<std::string>& hypothesis) {
  std::unordered_map<std::string, std::vector<std::size_t>> where;
  for (std::size_t i = 0; i < premise.size(); ++i) where[premise[i]].push_back(i);
  for (const std::string& t : hypothesis) {
    if (!where.count(t)) return false;
  }
  for (std::size_t k = 1; k < hypothesis.size(); ++k) {
    const auto& a = where[hypothesis[k - 1]];
    const auto& b = where[hypothesis[k]];
    std::size_t best = SIZE_MAX;
    for (std::size_t i : a) {
      for (std::size_t j : b) best = std::min(best, i > j ? i - j : j - i);
    }
    if (best > kProximityWindow) return false;
  }
  return true;
}

bool contains_all(const std::vector<std::string>& premise,
                  const std::vector<std::string>& hypothesis) {
  std::set<std::string> have(premise.begin(), premise.end());
  return std::all_of(hypothesis.begin(), hypothesis.end(),
                     [&](const std::string& t) { return have.count(t) > 0; });
}

std::string trim_fragment(std::string s) {
  s = text::normalize_whitespace(s);
  while (!s.empty() && (s.back() == ',' || s.back() == ';' || s.back() == ':')) {
    s.pop_back();
    s = text::normalize_whitespace(s);
  }
  return s;
}

std::vector<std::string> split_sentences(std::string_view t) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cur += t[i];
    bool terminal = t[i] == '.' || t[i] == '!' || t[i] == '?';
    if (terminal && (i + 1 == t.size() || t[i + 1] == ' ' || t[i + 1] == '\n')) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (text::word_count(cur)) out.push_back(cur);
  return out;
}

// Splits on ";" and on the standalone word "and".
std::vector<std::string> split_clauses(const std::string& sentence) {
  std::vector<std::string> out;
  std::string cur;
  for (const std::string& w : text::words(sentence)) {
    std::string lw = text::ascii_lower(w);
    if (lw == "and") {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    if (!cur.empty()) cur += ' ';
    cur += w;
    if (ends_with(w, ";")) {
      out.push_back(cur);
      cur.clear();
    }
  }
  out.push_back(cur);
  return out;
}

std::string verdict_json(const std::string& explanation, const std::string& field,
                         const std::string& value_literal) {
  return "{\"explanation\": " + nlohmann::json(explanation).dump() + ", \"" + field +
         "\": " + value_literal + "}";
}

const std::string& binding(const Request& r, const std::string& name) {
  auto it = r.bindings.find(name);
  if (it == r.bindings.end()) throw std::invalid_argument("lexical judge needs {" + name + "}");
  return it->second;
}

}  // namespace

std::vector<std::string> content_tokens(std::string_view t) {
  std::string lower = text::ascii_lower(t);
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stopwords().count(cur)) out.push_back(stem(cur));
    cur.clear();
  };
  for (unsigned char c : lower) {
    if (token_char(c)) {
      cur += static_cast<char>(c);
    } else if (c == '\'' && !cur.empty()) {
      flush();  // possessive and contraction tails are dropped below
      cur = "'";
    } else {
      flush();
    }
  }
  flush();
  std::erase_if(out, [](const std::string& s) { return s.empty() || s[0] == '\''; });
  return out;
}

Verdict lexical_entail(std::string_view premise, std::string_view hypothesis) {
  Verdict v;
  v.kind = VerdictKind::kNliLabel;
  const bool ok = entails(content_tokens(premise), content_tokens(hypothesis));
  v.label = ok ? NliLabel::kEntailment : NliLabel::kNeutral;
  v.explanation = ok ? "every hypothesis token is supported locally by the premise"
                     : "hypothesis tokens are absent or scattered in the premise";
  return v;
}

std::vector<std::string> lexical_clauses(std::string_view argument) {
  std::vector<std::string> out;
  for (const std::string& sentence : split_sentences(argument)) {
    for (std::string clause : split_clauses(sentence)) {
      clause = trim_fragment(clause);
      if (content_tokens(clause).size() >= 2) out.push_back(clause);
    }
  }
  if (out.empty()) {
    std::string whole = text::normalize_whitespace(argument);
    if (!whole.empty()) out.push_back(whole);
  }
  return out;
}

LexicalBackend::LexicalBackend(BackendConfig config) : config_(std::move(config)) {
  config_.kind = BackendKind::kLexical;
  if (config_.backend_id.empty()) config_.backend_id = "lexical";
}

std::string LexicalBackend::complete(const Request& request) {
  switch (request.template_id) {
    case TemplateId::kDecompose: {
      nlohmann::ordered_json facts;
      std::size_t k = 0;
      for (const std::string& f : lexical_clauses(binding(request, "argument"))) {
        facts["fact" + std::to_string(++k)] = f;
      }
      return facts.dump();
    }
    case TemplateId::kFullset: {
      const auto summary = content_tokens(binding(request, "generated_summary"));
      std::size_t total = 0, covered = 0;
      for (const std::string& line : [&] {
             std::vector<std::string> lines;
             std::string cur;
             for (char c : binding(request, "reference_arguments")) {
               if (c == '\n') {
                 lines.push_back(cur);
                 cur.clear();
               } else {
                 cur += c;
               }
             }
             lines.push_back(cur);
             return lines;
           }()) {
        std::string arg = line;
        if (auto colon = arg.find(": "); colon != std::string::npos) arg = arg.substr(colon + 2);
        if (content_tokens(arg).empty()) continue;
        ++total;
        if (entails(summary, content_tokens(arg))) ++covered;
      }
      int rating = 1;
      if (total > 0 && covered == total) {
        rating = 4;
      } else if (covered * 2 >= total && covered > 0) {
        rating = 3;
      } else if (covered > 0) {
        rating = 2;
      }
      return verdict_json(std::to_string(covered) + " of " + std::to_string(total) +
                              " arguments are lexically covered",
                          "rating", std::to_string(rating));
    }
    case TemplateId::kRole: {
      bool ok = entails(content_tokens(binding(request, "summary")),
                        content_tokens(binding(request, "argument")));
      return verdict_json(ok ? "the summary contains the argument"
                             : "argument content is missing from the summary",
                          "decision", ok ? "1" : "0");
    }
    case TemplateId::kAtomic: {
      const auto summary = content_tokens(binding(request, "summary"));
      const auto fact = content_tokens(binding(request, "argument"));
      if (entails(summary, fact)) {
        return verdict_json("the summary states the fact", "decision", "(1, \"supported\")");
      }
      if (!fact.empty() && contains_all(summary, fact)) {
        return verdict_json("the fact's terms appear but are recombined", "decision",
                            "(0, \"not-factual\")");
      }
      return verdict_json("the fact cannot be found in the summary", "decision",
                          "(0, \"missing\")");
    }
    case TemplateId::kNli: {
      Verdict v = lexical_entail(binding(request, "premise"), binding(request, "hypothesis"));
      return "{\"label\": \"" + std::string(to_string(v.label)) + "\"}";
    }
    case TemplateId::kSummarize: {
      std::size_t n = std::stoul(binding(request, "target_words"));
      std::string out;
      std::size_t k = 0;
      for (const std::string& w : text::words(binding(request, "document"))) {
        if (k++ == n) break;
        if (!out.empty()) out += ' ';
        out += w;
      }
      return out;
    }
  }
  return {};
}

}  // namespace arc::judge
