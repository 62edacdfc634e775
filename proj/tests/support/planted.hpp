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

#include <algorithm>
#include <string>
#include <vector>

#include "arc/corpus.hpp"

namespace arc::testing {

// A document of `n` sentences where the sentences at `role_indices` carry
// roles cycling through issue, reason, conclusion in index order.
inline corpus::DocumentRecord planted_document(const std::string& doc_id, std::size_t n,
                                               const std::vector<int>& role_indices) {
  static const std::vector<std::string> roles{"issue", "reason", "conclusion"};
  corpus::DocumentRecord d;
  d.doc_id = doc_id;
  for (std::size_t i = 0; i < n; ++i) {
    d.sentences.push_back({static_cast<int>(i), "Sentence " + std::to_string(i) + " of " + doc_id + ".", {}, {}});
  }
  std::size_t k = 0;
  for (int idx : role_indices) d.sentences[idx].roles = {roles[k++ % roles.size()]};
  d.reference_summaries.push_back({"reference", "Reference summary of " + doc_id + ".", {}});
  return d;
}

// 21 sentences, so relative positions are multiples of 0.05. Sentences
// 0-4 and 16-20 lie in the outer 20% bands.
inline corpus::DocumentRecord edge_document(const std::string& doc_id, int edge_args,
                                            int middle_args) {
  std::vector<int> idx;
  const std::vector<int> edge{0, 20, 1, 19, 2, 18, 3, 17, 4, 16};
  for (int i = 0; i < edge_args; ++i) idx.push_back(edge[i]);
  for (int i = 0; i < middle_args; ++i) idx.push_back(5 + i);
  std::sort(idx.begin(), idx.end());
  return planted_document(doc_id, 21, idx);
}

}  // namespace arc::testing
