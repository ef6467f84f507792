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

#ifndef STEPEVAL_MODEL_H_
#define STEPEVAL_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stepeval {

// Strips leading/trailing whitespace and collapses internal runs of
// whitespace to a single space. Case and punctuation are preserved.
std::string NormalizeWhitespace(std::string_view text);

// A free-form phrase. Always held in whitespace-normalized form.
class Phrase {
 public:
  Phrase() = default;
  Phrase(std::string_view text) : text_(NormalizeWhitespace(text)) {}  // NOLINT
  Phrase(const char *text) : Phrase(std::string_view(text)) {}         // NOLINT

  const std::string &text() const { return text_; }
  bool empty() const { return text_.empty(); }

  friend bool operator==(const Phrase &, const Phrase &) = default;
  friend auto operator<=>(const Phrase &, const Phrase &) = default;

 private:
  std::string text_;
};

// 0-based location of the sentence a step was derived from.
struct Provenance {
  std::size_t article_index = 0;
  std::size_t sentence_index = 0;

  friend bool operator==(const Provenance &, const Provenance &) = default;
};

// One relational fact <head, relation, tail>.
struct DerivationStep {
  Phrase head;
  Phrase relation;
  Phrase tail;
  std::optional<Provenance> provenance;

  friend bool operator==(const DerivationStep &,
                         const DerivationStep &) = default;
};

// A set of steps. Order is kept for display and deterministic iteration only.
struct Derivation {
  std::vector<DerivationStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
};

// True if both derivations hold the same multiset of (head, relation, tail)
// triples. Order and provenance are ignored.
bool SameSteps(const Derivation &a, const Derivation &b);

// The golden derivations for one question.
struct ReferenceSet {
  std::string question_id;
  std::vector<Derivation> references;
};

struct Article {
  std::string title;
  std::vector<std::string> sentences;
};

struct Instance {
  std::string question_id;
  std::string question;
  std::string answer;
  std::vector<Article> articles;
  // Per-sentence supporting-fact flags, shaped exactly like `articles`.
  std::optional<std::vector<std::vector<bool>>> supporting_fact_flags;

  bool IsSupportingFact(std::size_t article, std::size_t sentence) const;
};

enum class AnswerChoice { kCorrect, kWrong, kNeither };

struct AnnotationSubmission {
  std::string question_id;
  std::string worker_id;
  AnswerChoice chosen_answer = AnswerChoice::kCorrect;
  Derivation derivation;
};

enum class AnswerabilityLabel { kYes, kLikely, kNo };

std::string_view LabelName(AnswerabilityLabel label);

struct AnswerabilityJudgement {
  std::string question_id;
  std::string worker_id;
  AnswerabilityLabel label = AnswerabilityLabel::kYes;
};

// Normalizes every phrase and checks structural invariants. When `context`
// is given, provenance indices are bounds-checked against its articles.
// Duplicate steps are kept; a note is appended to `warnings` if non-null.
//
// Throws Error with kEmptyDerivation, kEmptyField or kProvenanceOutOfBounds.
Derivation ValidateDerivation(const Derivation &raw,
                              const Instance *context = nullptr,
                              std::vector<std::string> *warnings = nullptr);

// Step-count frequencies over every derivation in `corpus`.
struct StepCountHistogram {
  std::map<std::size_t, std::size_t> exact;
  std::size_t two = 0;
  std::size_t three = 0;
  std::size_t four_or_more = 0;
  // Derivations with fewer than two steps; outside the 2 / 3 / >=4 buckets.
  std::size_t fewer_than_two = 0;
  std::size_t total = 0;
};

StepCountHistogram DerivationStepCountHistogram(
    const std::vector<ReferenceSet> &corpus);

}  // namespace stepeval

#endif  // STEPEVAL_MODEL_H_
