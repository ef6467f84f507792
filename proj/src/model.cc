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

#include "stepeval/model.h"

#include <algorithm>
#include <tuple>

#include "stepeval/error.h"

namespace stepeval {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

bool SameSteps(const Derivation &a, const Derivation &b) {
  if (a.size() != b.size()) return false;
  auto keys = [](const Derivation &d) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    out.reserve(d.size());
    for (const auto &s : d.steps) {
      out.emplace_back(s.head.text(), s.relation.text(), s.tail.text());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return keys(a) == keys(b);
}

bool Instance::IsSupportingFact(std::size_t article,
                                std::size_t sentence) const {
  if (!supporting_fact_flags) return false;
  const auto &flags = *supporting_fact_flags;
  if (article >= flags.size() || sentence >= flags[article].size()) {
    return false;
  }
  return flags[article][sentence];
}

std::string_view LabelName(AnswerabilityLabel label) {
  switch (label) {
    case AnswerabilityLabel::kYes: return "Yes";
    case AnswerabilityLabel::kLikely: return "Likely";
    case AnswerabilityLabel::kNo: return "No";
  }
  return "No";
}

Derivation ValidateDerivation(const Derivation &raw, const Instance *context,
                              std::vector<std::string> *warnings) {
  if (raw.empty()) {
    throw Error(ErrorCode::kEmptyDerivation, "derivation has no steps");
  }
  Derivation out;
  out.steps.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const DerivationStep &in = raw.steps[i];
    DerivationStep step;
    step.head = Phrase(in.head.text());
    step.relation = Phrase(in.relation.text());
    step.tail = Phrase(in.tail.text());
    step.provenance = in.provenance;
    const std::string locus = "step " + std::to_string(i);
    if (step.head.empty()) {
      throw Error(ErrorCode::kEmptyField, "blank head in step " +
                  std::to_string(i), locus + " head");
    }
    if (step.relation.empty()) {
      throw Error(ErrorCode::kEmptyField, "blank relation in step " +
                  std::to_string(i), locus + " relation");
    }
    if (step.tail.empty()) {
      throw Error(ErrorCode::kEmptyField, "blank tail in step " +
                  std::to_string(i), locus + " tail");
    }
    if (context != nullptr && step.provenance) {
      const Provenance &p = *step.provenance;
      if (p.article_index >= context->articles.size() ||
          p.sentence_index >=
              context->articles[p.article_index].sentences.size()) {
        throw Error(ErrorCode::kProvenanceOutOfBounds,
                    "step " + std::to_string(i) + " points to article " +
                        std::to_string(p.article_index + 1) + ", sentence " +
                        std::to_string(p.sentence_index + 1) +
                        " which does not exist in " + context->question_id,
                    locus);
      }
    }
    out.steps.push_back(std::move(step));
  }

  if (warnings != nullptr) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const auto &a = out.steps[i];
        const auto &b = out.steps[j];
        if (a.head == b.head && a.relation == b.relation && a.tail == b.tail) {
          warnings->push_back("step " + std::to_string(i) +
                              " duplicates step " + std::to_string(j));
          break;
        }
      }
    }
  }
  return out;
}

StepCountHistogram DerivationStepCountHistogram(
    const std::vector<ReferenceSet> &corpus) {
  StepCountHistogram h;
  for (const auto &refs : corpus) {
    for (const auto &d : refs.references) {
      const std::size_t n = d.size();
      ++h.exact[n];
      ++h.total;
      if (n < 2) {
        ++h.fewer_than_two;
      } else if (n == 2) {
        ++h.two;
      } else if (n == 3) {
        ++h.three;
      } else {
        ++h.four_or_more;
      }
    }
  }
  return h;
}

}  // namespace stepeval
