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

#ifndef STEPEVAL_BASELINES_H_
#define STEPEVAL_BASELINES_H_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stepeval/model.h"

namespace stepeval {

// One row of a columnar (CoNLL-U style) parse.
struct Token {
  std::string form;
  std::string lemma;
  std::string upos;
  std::size_t head = 0;  // 1-based token index; 0 marks the root
  std::string deprel;
  bool space_after = true;  // false when MISC carries SpaceAfter=No
};

struct SentenceLocus {
  std::size_t article_index = 0;   // 0-based
  std::size_t sentence_index = 0;  // 0-based

  friend auto operator<=>(const SentenceLocus &,
                          const SentenceLocus &) = default;
};

struct SentenceAnnotation {
  SentenceLocus locus;
  std::vector<Token> tokens;

  // 1-based index of the root token, 0 for an empty sentence.
  std::size_t root() const;
  // 1-based indices of the dependents of token `index`, in surface order.
  std::vector<std::size_t> Dependents(std::size_t index) const;
  // Surface text of tokens [first, last] (1-based, inclusive).
  std::string Span(std::size_t first, std::size_t last) const;
};

bool IsVerbTag(std::string_view upos);
bool IsNominalTag(std::string_view upos);

// Parses keyed by question id, then by sentence locus.
using AnnotationIndex =
    std::map<std::string, std::map<SentenceLocus, SentenceAnnotation>>;

// Reads a columnar parse file: ten tab-separated columns per token
// (ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC), sentences separated
// by blank lines. Each sentence is preceded by
//   # doc_id = <question id>
//   # locus = <article>,<sentence>        (1-based)
// A "# doc_id" line applies to every following sentence until the next one.
// Multiword ranges ("3-4") and empty nodes ("3.1") are skipped.
//
// Throws kParse (with line number) or kMissingLocusComment.
AnnotationIndex ParseAnnotations(std::string_view text,
                                 const std::string &source = "<memory>");
AnnotationIndex ParseAnnotationFile(const std::string &path);

// Heuristic annotation used when no parse is available; deliberately crude.
// Tokenizes on word/punctuation boundaries, takes the first non-auxiliary
// verb-like token as the root (falling back to a copula or auxiliary), and
// attaches the tokens after the root in a rightward chain.
SentenceAnnotation NaiveFallbackAnnotate(std::string_view sentence);

struct ExtractedTriple {
  DerivationStep step;
  double confidence = 1.0;
};

using TripleExtractor =
    std::function<std::vector<ExtractedTriple>(const SentenceAnnotation &)>;

// Built-in Ie rule. For every verb token: subjects are its nominal
// dependents on the left, objects its nominal or prepositional dependents on
// the right; each subject/object combination yields one triple. Spans are
// the dependent's subtree minus coordination, apposition, clauses and
// punctuation.
std::vector<ExtractedTriple> ExtractTriples(const SentenceAnnotation &sentence);

enum class CoreSpan { kToken, kSubtree };

struct BaselineOptions {
  // Ie: only read supporting-fact sentences.
  bool sf_only = true;
  // Annotate sentences missing from the parse index with
  // NaiveFallbackAnnotate instead of failing.
  bool fallback = false;
  CoreSpan core_span = CoreSpan::kSubtree;
  TripleExtractor extractor = ExtractTriples;
};

// Throws kMissingAnnotations for a sentence without a parse when fallback
// is disabled, or kInvalidArgument when sf_only is set but the instance has
// no supporting-fact flags. `warnings` collects skipped sentences.
Derivation BaselineIe(const Instance &instance,
                      const AnnotationIndex &annotations,
                      const BaselineOptions &options = {},
                      std::vector<std::string> *warnings = nullptr);

// <article title, root verb, first right dependent of the root> for every
// supporting-fact sentence (every sentence when the instance has no flags).
Derivation BaselineCore(const Instance &instance,
                        const AnnotationIndex &annotations,
                        const BaselineOptions &options = {},
                        std::vector<std::string> *warnings = nullptr);

}  // namespace stepeval

#endif  // STEPEVAL_BASELINES_H_
