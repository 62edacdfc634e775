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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Unicode-aware text helpers shared by the corpus, judge and position modules.
namespace arc::text {

// Canonical composition (NFC). Invalid UTF-8 is replaced, never rejected.
std::string nfc(std::string_view utf8);

std::u32string to_utf32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

bool is_space(char32_t cp);

// A word is a maximal run of non-whitespace code points after NFC.
std::vector<std::string> words(std::string_view utf8);
std::size_t word_count(std::string_view utf8);

// Collapses every whitespace run to one ASCII space and trims both ends.
std::string normalize_whitespace(std::string_view utf8);

// ASCII lowercasing; non-ASCII bytes pass through.
std::string ascii_lower(std::string_view s);

// Half-open [begin, end) code-point range of one word inside a text.
struct WordSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<WordSpan> word_spans(std::u32string_view cps);

}  // namespace arc::text
