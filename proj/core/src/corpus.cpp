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

#include "arc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "arc/error.hpp"
#include "arc/text.hpp"

namespace arc::corpus {

using nlohmann::json;

namespace {

std::string normalize_role(std::string_view name) {
  return text::ascii_lower(text::normalize_whitespace(name));
}

std::string arg_id_for(const std::string& doc_id, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), ":a%03zu", ordinal);
  return doc_id + buf;
}

std::string joined_text(const DocumentRecord& doc, const std::vector<int>& indices) {
  std::string out;
  for (int i : indices) {
    if (!out.empty()) out += ' ';
    out += doc.sentences[static_cast<std::size_t>(i)].text;
  }
  return text::normalize_whitespace(out);
}

bool blank(std::string_view s) { return text::word_count(s) == 0; }

const json& require(const json& obj, const char* key, std::size_t line,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw MalformedRecord(line, where + "missing \"" + key + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line,
                           const std::string& where) {
  const json& v = require(obj, key, line, where);
  if (!v.is_string()) {
    throw MalformedRecord(line, where + "\"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> parse_roles(const json& obj, std::size_t line,
                                     const std::string& where,
                                     const RoleScheme& scheme) {
  std::set<std::string> roles;
  auto it = obj.find("roles");
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) {
    throw MalformedRecord(line, where + "\"roles\" must be an array");
  }
  for (const json& r : *it) {
    if (!r.is_string()) {
      throw MalformedRecord(line, where + "role names must be strings");
    }
    std::string name = normalize_role(r.get<std::string>());
    if (name.empty()) throw MalformedRecord(line, where + "empty role name");
    if (!scheme.contains(name)) throw UnknownRole(name, scheme.scheme_id);
    roles.insert(std::move(name));
  }
  return {roles.begin(), roles.end()};
}

SummaryRecord parse_summary(const json& s, std::size_t line, const std::string& where,
                            const RoleScheme& scheme, bool reference) {
  if (!s.is_object()) throw MalformedRecord(line, where + "summary must be an object");
  SummaryRecord summary;
  if (reference) {
    auto it = s.find("system");
    summary.system = (it != s.end() && it->is_string()) ? it->get<std::string>()
                                                        : "reference";
  } else {
    summary.system = require_string(s, "system", line, where);
    if (blank(summary.system)) throw MalformedRecord(line, where + "empty system tag");
  }
  summary.text = require_string(s, "text", line, where);
  if (blank(summary.text)) throw MalformedRecord(line, where + "empty summary text");
  if (auto it = s.find("sentences"); it != s.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw MalformedRecord(line, where + "summary \"sentences\" must be an array");
    }
    for (const json& ss : *it) {
      if (!ss.is_object()) {
        throw MalformedRecord(line, where + "summary sentence must be an object");
      }
      SummarySentence sent;
      sent.text = require_string(ss, "text", line, where);
      sent.roles = parse_roles(ss, line, where, scheme);
      summary.sentences.push_back(std::move(sent));
    }
  }
  return summary;
}

std::vector<SummaryRecord> parse_summaries(const json& record, const char* key,
                                           std::size_t line, const RoleScheme& scheme,
                                           bool reference) {
  std::vector<SummaryRecord> out;
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw MalformedRecord(line, std::string("\"") + key + "\" must be an array");
  }
  for (std::size_t i = 0; i < it->size(); ++i) {
    out.push_back(parse_summary((*it)[i], line,
                                std::string(key) + "[" + std::to_string(i) + "]: ",
                                scheme, reference));
  }
  return out;
}

}  // namespace

bool RoleScheme::contains(std::string_view role) const {
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

RoleScheme builtin_scheme(std::string_view scheme_id) {
  if (scheme_id == "irc") return {"irc", {"issue", "reason", "conclusion"}};
  if (scheme_id == "dri") return {"dri", {"own_claim", "background_claim", "data"}};
  throw ValidationError("unknown role scheme '" + std::string(scheme_id) + "'");
}

RoleScheme load_scheme(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scheme file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scheme file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("scheme_id") || !j["scheme_id"].is_string() ||
      !j.contains("roles") || !j["roles"].is_array()) {
    throw ValidationError("scheme file needs {\"scheme_id\": str, \"roles\": [str]}");
  }
  RoleScheme scheme;
  scheme.scheme_id = j["scheme_id"].get<std::string>();
  for (const json& r : j["roles"]) {
    if (!r.is_string()) throw ValidationError("scheme roles must be strings");
    std::string name = normalize_role(r.get<std::string>());
    if (name.empty() || scheme.contains(name)) {
      throw ValidationError("scheme roles must be non-empty and unique");
    }
    scheme.roles.push_back(std::move(name));
  }
  return scheme;
}

RoleScheme resolve_scheme(std::string_view id_or_path) {
  if (id_or_path == "irc" || id_or_path == "dri") return builtin_scheme(id_or_path);
  return load_scheme(std::filesystem::path(id_or_path));
}

bool Sentence::has_role(std::string_view role) const {
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

std::size_t SummaryRecord::word_count() const { return text::word_count(text); }

std::string DocumentRecord::plain_text() const {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += ' ';
    out += sentences[i].text;
  }
  return out;
}

std::size_t DocumentRecord::word_count() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += text::word_count(s.text);
  return n;
}

bool DocumentRecord::has_relevance() const {
  return std::any_of(sentences.begin(), sentences.end(),
                     [](const Sentence& s) { return s.relevance.has_value(); });
}

const DocumentRecord* Corpus::find(std::string_view doc_id) const {
  for (const DocumentRecord& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

std::size_t ArgumentUnit::word_count() const { return text::word_count(text); }

DocumentRecord parse_document(const json& record, std::size_t line,
                              const RoleScheme& scheme) {
  if (!record.is_object()) throw MalformedRecord(line, "record must be a JSON object");
  DocumentRecord doc;
  doc.doc_id = require_string(record, "doc_id", line, "");
  if (blank(doc.doc_id)) throw MalformedRecord(line, "empty doc_id");

  const json& sentences = require(record, "sentences", line, "");
  if (!sentences.is_array() || sentences.empty()) {
    throw MalformedRecord(line, "\"sentences\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const json& s = sentences[i];
    const std::string where = "sentences[" + std::to_string(i) + "]: ";
    if (!s.is_object()) throw MalformedRecord(line, where + "must be an object");
    Sentence sent;
    const json& idx = require(s, "idx", line, where);
    if (!idx.is_number_integer() || idx.get<long long>() != static_cast<long long>(i)) {
      throw MalformedRecord(line, where + "idx must equal its 0-based position");
    }
    sent.idx = static_cast<int>(i);
    sent.text = require_string(s, "text", line, where);
    if (blank(sent.text)) throw MalformedRecord(line, where + "empty sentence text");
    sent.roles = parse_roles(s, line, where, scheme);
    if (auto it = s.find("relevance"); it != s.end() && !it->is_null()) {
      if (!it->is_number_integer()) {
        throw MalformedRecord(line, where + "relevance must be an integer");
      }
      int rel = it->get<int>();
      if (rel < 1 || rel > 5) throw MalformedRecord(line, where + "relevance outside 1..5");
      sent.relevance = rel;
    }
    doc.sentences.push_back(std::move(sent));
  }

  doc.reference_summaries =
      parse_summaries(record, "reference_summaries", line, scheme, true);
  doc.generated_summaries =
      parse_summaries(record, "generated_summaries", line, scheme, false);
  std::set<std::string> systems;
  for (const SummaryRecord& g : doc.generated_summaries) {
    if (g.system.rfind("reference", 0) == 0) {
      throw MalformedRecord(line, "system tag '" + g.system + "' is reserved");
    }
    if (!systems.insert(g.system).second) {
      throw MalformedRecord(line, "duplicate generated summary for system '" + g.system + "'");
    }
  }

  if (auto it = record.find("spans"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRecord(line, "\"spans\" must be an array");
    for (const json& sp : *it) {
      if (!sp.is_object() || !sp.contains("start") || !sp.contains("end") ||
          !sp["start"].is_number_integer() || !sp["end"].is_number_integer()) {
        throw MalformedRecord(line, "span needs integer \"start\" and \"end\"");
      }
      long long start = sp["start"].get<long long>();
      long long end = sp["end"].get<long long>();
      if (start < 0 || end < 0) throw SpanOutOfBounds("negative span offset");
      std::string role = normalize_role(require_string(sp, "role", line, "span: "));
      if (!scheme.contains(role)) throw UnknownRole(role, scheme.scheme_id);
      doc.spans.push_back({static_cast<std::size_t>(start),
                           static_cast<std::size_t>(end), std::move(role)});
    }
    for (const auto& [idx, role] : map_spans_to_sentences(doc, doc.spans)) {
      auto& roles = doc.sentences[static_cast<std::size_t>(idx)].roles;
      if (std::find(roles.begin(), roles.end(), role) == roles.end()) {
        roles.push_back(role);
        std::sort(roles.begin(), roles.end());
      }
    }
  }
  return doc;
}

Corpus parse_corpus(std::istream& in, const RoleScheme& scheme) {
  Corpus corpus;
  corpus.scheme = scheme;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
    }
    DocumentRecord doc = parse_document(record, line_no, scheme);
    if (!seen.insert(doc.doc_id).second) throw DuplicateDocId(doc.doc_id);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const RoleScheme& scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open corpus " + path.string());
  return parse_corpus(in, scheme);
}

json to_json(const DocumentRecord& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  json sentences = json::array();
  for (const Sentence& s : doc.sentences) {
    json js{{"idx", s.idx}, {"text", s.text}, {"roles", s.roles}};
    if (s.relevance) js["relevance"] = *s.relevance;
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  auto summaries = [](const std::vector<SummaryRecord>& list) {
    json out = json::array();
    for (const SummaryRecord& s : list) {
      json js{{"system", s.system}, {"text", s.text}};
      if (!s.sentences.empty()) {
        json ss = json::array();
        for (const SummarySentence& x : s.sentences) {
          ss.push_back({{"text", x.text}, {"roles", x.roles}});
        }
        js["sentences"] = std::move(ss);
      }
      out.push_back(std::move(js));
    }
    return out;
  };
  j["reference_summaries"] = summaries(doc.reference_summaries);
  j["generated_summaries"] = summaries(doc.generated_summaries);
  if (!doc.spans.empty()) {
    json spans = json::array();
    for (const SpanAnnotation& sp : doc.spans) {
      spans.push_back({{"start", sp.char_start}, {"end", sp.char_end}, {"role", sp.role}});
    }
    j["spans"] = std::move(spans);
  }
  return j;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const DocumentRecord& doc : corpus.documents) out << to_json(doc).dump() << '\n';
}

nlohmann::json to_json(const ArgumentUnit& unit) {
  nlohmann::ordered_json j;
  j["arg_id"] = unit.arg_id;
  j["doc_id"] = unit.doc_id;
  j["role"] = unit.role;
  j["text"] = unit.text;
  j["sentence_indices"] = unit.sentence_indices;
  return nlohmann::json::parse(j.dump());
}

ArgumentUnit argument_from_json(const nlohmann::json& j) {
  ArgumentUnit a;
  a.arg_id = j.at("arg_id").get<std::string>();
  a.doc_id = j.at("doc_id").get<std::string>();
  a.role = j.at("role").get<std::string>();
  a.text = j.at("text").get<std::string>();
  a.sentence_indices = j.at("sentence_indices").get<std::vector<int>>();
  if (a.sentence_indices.empty()) throw ValidationError("argument " + a.arg_id + " has no sentences");
  return a;
}

void write_arguments(const std::vector<ArgumentUnit>& units, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const ArgumentUnit& a : units) {
    nlohmann::ordered_json j;
    j["arg_id"] = a.arg_id;
    j["doc_id"] = a.doc_id;
    j["role"] = a.role;
    j["text"] = a.text;
    j["sentence_indices"] = a.sentence_indices;
    out << j.dump() << '\n';
  }
}

std::vector<ArgumentUnit> read_arguments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingUpstream(path.filename().string());
  std::vector<ArgumentUnit> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::word_count(line) == 0) continue;
    try {
      out.push_back(argument_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(line_no, std::string("arguments.jsonl: ") + e.what());
    }
  }
  return out;
}

std::vector<std::pair<int, std::string>> map_spans_to_sentences(
    const DocumentRecord& doc, const std::vector<SpanAnnotation>& spans) {
  // Code-point ranges of each sentence inside plain_text().
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t offset = 0;
  for (const Sentence& s : doc.sentences) {
    std::size_t len = text::to_utf32(s.text).size();
    ranges.emplace_back(offset, offset + len);
    offset += len + 1;
  }
  const std::u32string plain = text::to_utf32(doc.plain_text());

  std::set<std::pair<int, std::string>> out;
  for (const SpanAnnotation& span : spans) {
    if (span.char_start >= span.char_end || span.char_end > plain.size()) {
      throw SpanOutOfBounds("span [" + std::to_string(span.char_start) + ", " +
                            std::to_string(span.char_end) + ") outside document of " +
                            std::to_string(plain.size()) + " characters");
    }
    std::u32string_view piece =
        std::u32string_view(plain).substr(span.char_start, span.char_end - span.char_start);
    std::vector<text::WordSpan> span_words = text::word_spans(piece);
    if (span_words.empty()) continue;
    std::map<int, std::size_t> per_sentence;
    for (const text::WordSpan& w : span_words) {
      // Twice the midpoint, in document coordinates.
      std::size_t mid2 = 2 * span.char_start + w.begin + w.end;
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (2 * ranges[i].first <= mid2 && mid2 < 2 * ranges[i].second) {
          ++per_sentence[static_cast<int>(i)];
          break;
        }
      }
    }
    for (const auto& [idx, count] : per_sentence) {
      if (2 * count > span_words.size()) out.emplace(idx, span.role);
    }
  }
  return {out.begin(), out.end()};
}

SaliencyPolicy SaliencyPolicy::parse(std::string_view t) {
  std::string s = text::ascii_lower(text::normalize_whitespace(t));
  if (s == "all_roles") return all_roles();
  if (s == "role_sentences_only") return role_sentences_only();
  const std::string prefix = "relevance_eq";
  if (s.rfind(prefix, 0) == 0) {
    std::string rest = s.substr(prefix.size());
    if (!rest.empty() && (rest.front() == '(' || rest.front() == ':' || rest.front() == '=')) {
      rest.erase(0, 1);
      if (!rest.empty() && rest.back() == ')') rest.pop_back();
      if (rest.size() == 1 && rest[0] >= '1' && rest[0] <= '5') {
        return relevance_eq(rest[0] - '0');
      }
    }
  }
  throw ValidationError("unknown saliency policy '" + std::string(t) + "'");
}

std::string SaliencyPolicy::to_string() const {
  switch (kind) {
    case Kind::kAllRoles: return "all_roles";
    case Kind::kRoleSentencesOnly: return "role_sentences_only";
    case Kind::kRelevanceEq: return "relevance_eq(" + std::to_string(relevance) + ")";
  }
  return "";
}

std::vector<ArgumentUnit> extract_salient(const DocumentRecord& doc,
                                          const SaliencyPolicy& policy) {
  struct Pending {
    int first;
    std::string role;
    std::vector<int> indices;
  };
  std::vector<Pending> pending;
  const auto& sents = doc.sentences;

  switch (policy.kind) {
    case SaliencyPolicy::Kind::kAllRoles:
      for (std::size_t i = 0; i < sents.size(); ++i) {
        for (const std::string& role : sents[i].roles) {
          if (i > 0 && sents[i - 1].has_role(role)) continue;  // inside a run
          Pending p{static_cast<int>(i), role, {}};
          for (std::size_t j = i; j < sents.size() && sents[j].has_role(role); ++j) {
            p.indices.push_back(static_cast<int>(j));
          }
          pending.push_back(std::move(p));
        }
      }
      break;
    case SaliencyPolicy::Kind::kRelevanceEq:
      if (!doc.has_relevance()) {
        throw PolicyInapplicable("document '" + doc.doc_id +
                                 "' has no relevance scores for " + policy.to_string());
      }
      for (const Sentence& s : sents) {
        if (s.relevance != policy.relevance) continue;
        for (const std::string& role : s.roles) pending.push_back({s.idx, role, {s.idx}});
      }
      break;
    case SaliencyPolicy::Kind::kRoleSentencesOnly:
      for (const Sentence& s : sents) {
        for (const std::string& role : s.roles) pending.push_back({s.idx, role, {s.idx}});
      }
      break;
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.first, a.role) < std::tie(b.first, b.role);
  });
  std::vector<ArgumentUnit> out;
  out.reserve(pending.size());
  for (std::size_t k = 0; k < pending.size(); ++k) {
    ArgumentUnit unit;
    unit.arg_id = arg_id_for(doc.doc_id, k + 1);
    unit.doc_id = doc.doc_id;
    unit.role = pending[k].role;
    unit.sentence_indices = pending[k].indices;
    unit.text = joined_text(doc, unit.sentence_indices);
    out.push_back(std::move(unit));
  }
  return out;
}

Rational role_share_at_relevance(const Corpus& corpus, int level) {
  long long at_level = 0;
  long long with_role = 0;
  for (const DocumentRecord& doc : corpus.documents) {
    for (const Sentence& s : doc.sentences) {
      if (s.relevance != level) continue;
      ++at_level;
      if (!s.roles.empty()) ++with_role;
    }
  }
  if (at_level == 0) {
    throw PolicyInapplicable("no sentences with relevance " + std::to_string(level));
  }
  return Rational(with_role) / at_level;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.docs = corpus.documents.size();
  if (corpus.documents.empty()) return stats;

  auto summarize = [](const std::vector<std::size_t>& v) {
    LengthSummary out;
    if (v.empty()) return out;
    out.min = *std::min_element(v.begin(), v.end());
    out.max = *std::max_element(v.begin(), v.end());
    double total = 0;
    for (std::size_t x : v) total += static_cast<double>(x);
    out.mean = total / static_cast<double>(v.size());
    return out;
  };

  std::vector<std::size_t> input_lengths, summary_lengths;
  long long input_words = 0, role_words = 0;
  long long annotated_words = 0, annotated_role_words = 0;
  bool any_annotation = false;
  for (const DocumentRecord& doc : corpus.documents) {
    std::size_t doc_words = 0;
    for (const Sentence& s : doc.sentences) {
      std::size_t n = text::word_count(s.text);
      doc_words += n;
      if (!s.roles.empty()) role_words += static_cast<long long>(n);
    }
    input_words += static_cast<long long>(doc_words);
    input_lengths.push_back(doc_words);
    for (const SummaryRecord& ref : doc.reference_summaries) {
      summary_lengths.push_back(ref.word_count());
      if (ref.sentences.empty()) continue;
      any_annotation = true;
      for (const SummarySentence& ss : ref.sentences) {
        std::size_t n = text::word_count(ss.text);
        annotated_words += static_cast<long long>(n);
        if (!ss.roles.empty()) annotated_role_words += static_cast<long long>(n);
      }
    }
  }
  stats.input_length = summarize(input_lengths);
  stats.summary_length = summarize(summary_lengths);
  stats.pct_roles_input = Rational(role_words * 100) / input_words;
  if (any_annotation && annotated_words > 0) {
    stats.pct_roles_summary = Rational(annotated_role_words * 100) / annotated_words;
  }
  return stats;
}

LengthPolicy parse_length_policy(std::string_view t) {
  if (t == "match_reference") return LengthPolicy::kMatchReference;
  if (t == "longest_reference") return LengthPolicy::kLongestReference;
  throw ValidationError("unknown length policy '" + std::string(t) + "'");
}

std::string to_string(LengthPolicy policy) {
  return policy == LengthPolicy::kMatchReference ? "match_reference" : "longest_reference";
}

LengthPolicy infer_length_policy(const Corpus& corpus) {
  for (const DocumentRecord& doc : corpus.documents) {
    if (doc.reference_summaries.size() > 1) return LengthPolicy::kLongestReference;
  }
  return LengthPolicy::kMatchReference;
}

std::size_t target_length(const DocumentRecord& doc, LengthPolicy policy) {
  if (doc.reference_summaries.empty()) {
    throw ValidationError("document '" + doc.doc_id + "' has no reference summary");
  }
  if (policy == LengthPolicy::kMatchReference) {
    return doc.reference_summaries.front().word_count();
  }
  std::size_t best = 0;
  for (const SummaryRecord& r : doc.reference_summaries) best = std::max(best, r.word_count());
  return best;
}

}  // namespace arc::corpus
