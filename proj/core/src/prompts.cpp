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
#include <stdexcept>
#include <string>
#include <string_view>

#include "arc/error.hpp"
#include "arc/judge.hpp"

namespace arc::judge {

namespace {

constexpr std::string_view kDecomposeBody = R"(Task:
Extract a set of atomic facts: statements that can be directly inferred from the argument without interpretation, assumptions, or redundancy.

Guidelines:
- Extract only explicitly stated atomic facts.
- Do not repeat facts or infer from external knowledge.
- Maintain granularity: each fact should be minimal yet complete.
- Output a valid Dictionary object where each key is "fact1", "fact2", etc., and the values are the corresponding atomic facts.
- No additional text or formatting; dictionary object only.
- Each argument must yield at least one atomic fact.

Example Output Format:
{
    "fact1": "First atomic fact",
    "fact2": "Second atomic fact",
    "fact3": "Third atomic fact"
}

Input:
{argument}

Output:
(Dictionary object only)
)";

constexpr std::string_view kFullsetBody = R"(Task:
Evaluate how well a given summary covers a provided set of arguments. Assign a score from 1 to 4 based on the extent of coverage, provide a clear explanation for your rating, and output the result in a specified JSON format.

Instructions:
- Read the provided arguments and summary carefully.
- Rate the extent to which the arguments are covered by the summary using the following scale:
  1: No arguments covered: The generated summary did not cover the highlighted arguments in the reference summary or covered them only inadequately.
  2: Few arguments covered: The generated summary adequately covered only a limited number of the highlighted arguments in the reference summary.
  3: Most arguments covered: The generated summary adequately covered most of the arguments highlighted in the reference summary.
  4: All arguments covered: The generated summary adequately covered all the highlighted arguments in the reference summary.
- Format your evaluation as a JSON object with:
  - "explanation": A concise explanation of your rating.
  - "rating": The assigned score (1 to 4).

Example Output Format:
{
   "explanation": "Place your explanation here",
   "rating": "Place your rating here"
}

Input:
- Arguments: {reference_arguments}
- Summary: {generated_summary}

Output:
Provide your evaluation in the specified JSON format.
)";

constexpr std::string_view kRoleBody = R"(Task:
Determine whether a summary fully supports a given argument or omits/contradicts key information.

Instructions:
- Output 1 if the summary fully supports the argument without omissions or contradictions.
- Output 0 if the summary fails to support the argument or contains contradictory or incorrect details (e.g., logical errors, entity mismatches).
- Respond in a JSON object with:
  - "decision": Either 1 or 0.
  - "explanation": A brief justification, noting missing or conflicting content.

Input:
Argument: {argument}
Summary: {summary}

Output Format:
Respond only with a JSON object structured as:
{
   "explanation": "<Brief reasoning for your decision>",
   "decision": <0 or 1>
}

Note: Think critically before deciding. Do not include any extra text beyond the JSON output.
)";

constexpr std::string_view kAtomicBody = R"(Task Description:
Given an argument and a summary, evaluate whether the argument is supported by the summary and return a valid tuple in the specified format.

Explanation:
Provide a brief justification for your decision, identifying any missing, contradictory, or factually incorrect details.

Return Guidelines:
- (1, "supported"): The argument is fully supported by the summary.
- (0, "missing"): The argument cannot be inferred from the summary.
- (0, "not-factual"): The summary contradicts or misrepresents the argument.

Output Format:
Respond only with a JSON object, structured as:
{
   "explanation": "<explanation placeholder>",
   "decision": (1, "supported") or (0, "missing") or (0, "not-factual")
}

Input:
Argument: {argument}
Summary: {summary}

Note: Think critically before deciding. Do not generate any extra text beyond the JSON output.
)";

constexpr std::string_view kNliBody = R"(Task:
Decide whether the hypothesis can be inferred from the premise.

Instructions:
- "entailment": the hypothesis follows from the premise alone.
- "contradiction": the premise rules the hypothesis out.
- "neutral": neither of the above.

Premise: {premise}
Hypothesis: {hypothesis}

Respond only with a JSON object structured as:
{
   "label": "entailment" or "contradiction" or "neutral"
}
)";

constexpr std::string_view kSummarizeBody =
    "Read the following text and summarize it: {document}. Summarize in "
    "{target_words} words. Summary:";

const PromptTemplate kTemplates[] = {
    {TemplateId::kDecompose, kDecomposeBody}, {TemplateId::kFullset, kFullsetBody},
    {TemplateId::kRole, kRoleBody},           {TemplateId::kAtomic, kAtomicBody},
    {TemplateId::kNli, kNliBody},             {TemplateId::kSummarize, kSummarizeBody},
};

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Length of the placeholder name at body[pos] == '{', or 0 if none.
std::size_t placeholder_at(std::string_view body, std::size_t pos) {
  std::size_t end = pos + 1;
  while (end < body.size() && is_name_char(body[end])) ++end;
  if (end == pos + 1 || end >= body.size() || body[end] != '}') return 0;
  return end - pos - 1;
}

}  // namespace

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::kDecompose: return "decompose";
    case TemplateId::kFullset: return "fullset";
    case TemplateId::kRole: return "role";
    case TemplateId::kAtomic: return "atomic";
    case TemplateId::kNli: return "nli";
    case TemplateId::kSummarize: return "summarize";
  }
  return "";
}

const PromptTemplate& prompt_template(TemplateId id) {
  for (const PromptTemplate& t : kTemplates) {
    if (t.template_id == id) return t;
  }
  throw std::logic_error("unknown template id");
}

std::vector<std::string> placeholders(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') continue;
    if (std::size_t n = placeholder_at(body, i)) {
      std::string name(body.substr(i + 1, n));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
      i += n + 1;
    }
  }
  return out;
}

std::string render_prompt(std::string_view body, const Bindings& bindings) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '{') {
      if (std::size_t n = placeholder_at(body, i)) {
        std::string name(body.substr(i + 1, n));
        auto it = bindings.find(name);
        if (it == bindings.end()) throw MissingBinding(name);
        out += it->second;
        i += n + 1;
        continue;
      }
    }
    out += body[i];
  }
  return out;
}

std::string render_prompt(TemplateId id, const Bindings& bindings) {
  return render_prompt(prompt_template(id).body, bindings);
}

Request make_request(TemplateId id, Bindings bindings) {
  Request r{id, std::move(bindings), {}};
  r.prompt = render_prompt(id, r.bindings);
  return r;
}

}  // namespace arc::judge
