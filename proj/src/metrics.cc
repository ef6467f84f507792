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

#include "stepeval/metrics.h"

#include <string>

#include "stepeval/error.h"

namespace stepeval {

std::string_view ScorerName(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kEntity: return "entity";
    case ScorerKind::kRelation: return "relation";
    case ScorerKind::kFull: return "full";
  }
  return "full";
}

std::optional<ScorerKind> ParseScorerName(std::string_view name) {
  for (ScorerKind k : kAllScorers) {
    if (ScorerName(k) == name) return k;
  }
  return std::nullopt;
}

PhraseSimilarityFn LevenshteinPhraseSimilarity(SimilarityOptions options) {
  return [options](const Phrase &a, const Phrase &b) {
    return PhraseSimilarity(a.text(), b.text(), options);
  };
}

double StepSimilarity(const DerivationStep &d, const DerivationStep &g,
                      const Scorer &scorer) {
  const auto &s = scorer.phrase_similarity;
  switch (scorer.kind) {
    case ScorerKind::kEntity:
      return (s(d.head, g.head) + s(d.tail, g.tail)) / 2.0;
    case ScorerKind::kRelation:
      return s(d.relation, g.relation);
    case ScorerKind::kFull:
      return (s(d.head, g.head) + s(d.relation, g.relation) +
              s(d.tail, g.tail)) / 3.0;
  }
  return 0.0;
}

StepSimilarityFn MakeStepSimilarity(Scorer scorer) {
  return [scorer = std::move(scorer)](const DerivationStep &d,
                                      const DerivationStep &g) {
    return StepSimilarity(d, g, scorer);
  };
}

ScoreMatrix BuildScoreMatrix(const Derivation &predicted,
                             const Derivation &golden,
                             const StepSimilarityFn &similarity) {
  std::vector<double> values;
  values.reserve(predicted.size() * golden.size());
  for (const auto &d : predicted.steps) {
    for (const auto &g : golden.steps) values.push_back(similarity(d, g));
  }
  return ScoreMatrix::FromValues(predicted.size(), golden.size(),
                                 std::move(values));
}

AlignmentResult ScoreAgainstReference(const Derivation &predicted,
                                      const Derivation &golden,
                                      const StepSimilarityFn &similarity) {
  return BestAlignment(BuildScoreMatrix(predicted, golden, similarity));
}

double F1Score(double precision, double recall) {
  const double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

MetricReport EvaluateDerivation(const Derivation &predicted,
                                const ReferenceSet &refs,
                                const StepSimilarityFn &similarity,
                                GStarPolicy policy) {
  if (predicted.empty()) {
    throw Error(ErrorCode::kEmptyDerivation,
                "precision is undefined for an empty derivation",
                refs.question_id);
  }
  if (refs.references.empty()) {
    throw Error(ErrorCode::kEmptyReferenceSet, "no golden derivations",
                refs.question_id);
  }
  std::optional<MetricReport> best;
  for (std::size_t i = 0; i < refs.references.size(); ++i) {
    const Derivation &golden = refs.references[i];
    if (golden.empty()) {
      throw Error(ErrorCode::kEmptyDerivation,
                  "golden derivation " + std::to_string(i) + " has no steps",
                  refs.question_id);
    }
    AlignmentResult aligned = ScoreAgainstReference(predicted, golden,
                                                    similarity);
    MetricReport r;
    r.c_star = aligned.score;
    r.precision = aligned.score / static_cast<double>(predicted.size());
    r.recall = aligned.score / static_cast<double>(golden.size());
    r.f1 = F1Score(r.precision, r.recall);
    r.winning_reference_index = i;
    r.winning_alignment = std::move(aligned.alignment);

    bool better = !best.has_value();
    if (!better) {
      const auto &b = *best;
      if (policy == GStarPolicy::kAlignmentScore) {
        better = r.c_star > b.c_star || (r.c_star == b.c_star && r.f1 > b.f1);
      } else {
        better = r.f1 > b.f1 || (r.f1 == b.f1 && r.c_star > b.c_star);
      }
    }
    if (better) best = std::move(r);
  }
  return *best;
}

MetricReport EvaluateDerivation(const Derivation &predicted,
                                const ReferenceSet &refs, const Scorer &scorer,
                                GStarPolicy policy) {
  return EvaluateDerivation(predicted, refs, MakeStepSimilarity(scorer),
                            policy);
}

ScorerReports EvaluateAllScorers(const Derivation &predicted,
                                 const ReferenceSet &refs,
                                 const EvaluationOptions &options) {
  ScorerReports out;
  const PhraseSimilarityFn phrase =
      LevenshteinPhraseSimilarity(options.similarity);
  for (ScorerKind kind : kAllScorers) {
    out[kind] = EvaluateDerivation(predicted, refs, Scorer{kind, phrase},
                                   options.gstar_policy);
  }
  return out;
}

std::vector<std::vector<std::size_t>> IndexSubsets(std::size_t n,
                                                   std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::map<ScorerKind, AblatedReport> ReferenceAblation(
    const Derivation &predicted, const ReferenceSet &refs, std::size_t k,
    AblationPolicy policy, const EvaluationOptions &options) {
  const std::size_t n = refs.references.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kBadK,
                "k must be in [1, " + std::to_string(n) + "], got " +
                    std::to_string(k),
                refs.question_id);
  }
  std::vector<std::vector<std::size_t>> subsets;
  if (policy == AblationPolicy::kPrefix) {
    std::vector<std::size_t> prefix(k);
    for (std::size_t i = 0; i < k; ++i) prefix[i] = i;
    subsets.push_back(std::move(prefix));
  } else {
    subsets = IndexSubsets(n, k);
  }

  std::map<ScorerKind, AblatedReport> out;
  for (const auto &subset : subsets) {
    ReferenceSet restricted;
    restricted.question_id = refs.question_id;
    for (std::size_t i : subset) {
      restricted.references.push_back(refs.references[i]);
    }
    for (const auto &[kind, r] :
         EvaluateAllScorers(predicted, restricted, options)) {
      AblatedReport &acc = out[kind];
      acc.precision += r.precision;
      acc.recall += r.recall;
      acc.f1 += r.f1;
      acc.c_star += r.c_star;
      ++acc.subsets;
    }
  }
  for (auto &[kind, acc] : out) {
    const double m = static_cast<double>(acc.subsets);
    acc.precision /= m;
    acc.recall /= m;
    acc.f1 /= m;
    acc.c_star /= m;
  }
  return out;
}

}  // namespace stepeval
