// Copyright 2026 The stepeval Authors.
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

#ifndef STEPEVAL_TEXTSIM_H_
#define STEPEVAL_TEXTSIM_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace stepeval {

// Decodes UTF-8 into Unicode scalar values. Malformed bytes decode to
// U+FFFD one byte at a time, so every input has a well-defined length.
std::u32string DecodeUtf8(std::string_view text);

// Simple lowercase mapping for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Code points outside those blocks are returned unchanged.
char32_t FoldChar(char32_t c);
std::u32string FoldCase(std::u32string_view text);

// Character-level edit distance (unit-cost insert / delete / substitute).
std::size_t LevenshteinDistance(std::u32string_view a, std::u32string_view b);

// UTF-8 overload: distance between the decoded code point sequences.
std::size_t LevenshteinDistance(std::string_view a, std::string_view b);

struct SimilarityOptions {
  bool case_fold = true;
};

// Normalized Levenshtein similarity:
//   1 - distance(fold(a), fold(b)) / max(|fold(a)|, |fold(b)|)
// in [0, 1]. Two empty phrases are fully similar (1.0).
double PhraseSimilarity(std::string_view a, std::string_view b,
                        const SimilarityOptions &options = {});

}  // namespace stepeval

#endif  // STEPEVAL_TEXTSIM_H_
