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

#ifndef STEPEVAL_METRICS_H_
#define STEPEVAL_METRICS_H_

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string_view>

#include "stepeval/align.h"
#include "stepeval/model.h"
#include "stepeval/textsim.h"

namespace stepeval {

enum class ScorerKind { kEntity, kRelation, kFull };

inline constexpr std::array<ScorerKind, 3> kAllScorers = {
    ScorerKind::kEntity, ScorerKind::kRelation, ScorerKind::kFull};

std::string_view ScorerName(ScorerKind kind);
std::optional<ScorerKind> ParseScorerName(std::string_view name);

// s(., .) between two phrases; must return a value in [0, 1].
using PhraseSimilarityFn =
    std::function<double(const Phrase &, const Phrase &)>;

// a(., .) between two derivation steps; must return a value in [0, 1].
using StepSimilarityFn =
    std::function<double(const DerivationStep &, const DerivationStep &)>;

// Normalized Levenshtein similarity with the given options.
PhraseSimilarityFn LevenshteinPhraseSimilarity(SimilarityOptions options = {});

struct Scorer {
  ScorerKind kind = ScorerKind::kFull;
  PhraseSimilarityFn phrase_similarity = LevenshteinPhraseSimilarity();
};

// entity:   (s(h, h') + s(t, t')) / 2
// relation:  s(r, r')
// full:     (s(h, h') + s(r, r') + s(t, t')) / 3
double StepSimilarity(const DerivationStep &d, const DerivationStep &g,
                      const Scorer &scorer);

StepSimilarityFn MakeStepSimilarity(Scorer scorer);

ScoreMatrix BuildScoreMatrix(const Derivation &predicted,
                             const Derivation &golden,
                             const StepSimilarityFn &similarity);

// c(D; G) and the alignment achieving it.
AlignmentResult ScoreAgainstReference(const Derivation &predicted,
                                      const Derivation &golden,
                                      const StepSimilarityFn &similarity);

// Harmonic mean, 0 when both inputs are 0.
double F1Score(double precision, double recall);

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double c_star = 0.0;
  std::size_t winning_reference_index = 0;
  Alignment winning_alignment;
};

// How G* is chosen among the references.
//   kAlignmentScore: highest c, then highest f1, then lowest index.
//   kF1:             highest f1, then highest c, then lowest index.
enum class GStarPolicy { kAlignmentScore, kF1 };

// Throws kEmptyDerivation when `predicted` has no steps and
// kEmptyReferenceSet when there are no references.
MetricReport EvaluateDerivation(const Derivation &predicted,
                                const ReferenceSet &refs,
                                const StepSimilarityFn &similarity,
                                GStarPolicy policy = GStarPolicy::kAlignmentScore);

MetricReport EvaluateDerivation(const Derivation &predicted,
                                const ReferenceSet &refs, const Scorer &scorer,
                                GStarPolicy policy = GStarPolicy::kAlignmentScore);

using ScorerReports = std::map<ScorerKind, MetricReport>;

struct EvaluationOptions {
  SimilarityOptions similarity;
  GStarPolicy gstar_policy = GStarPolicy::kAlignmentScore;
};

// G* is selected independently for each scorer.
ScorerReports EvaluateAllScorers(const Derivation &predicted,
                                 const ReferenceSet &refs,
                                 const EvaluationOptions &options = {});

enum class AblationPolicy { kPrefix, kAllSubsetsMean };

struct AblatedReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double c_star = 0.0;
  std::size_t subsets = 0;
};

// Restricts the references to size k: the first k (kPrefix) or the mean over
// every k-subset (kAllSubsetsMean, subsets visited in lexicographic order).
//
// Throws kBadK unless 1 <= k <= refs.references.size().
std::map<ScorerKind, AblatedReport> ReferenceAblation(
    const Derivation &predicted, const ReferenceSet &refs, std::size_t k,
    AblationPolicy policy, const EvaluationOptions &options = {});

// Every k-subset of {0, ..., n-1}, in lexicographic order.
std::vector<std::vector<std::size_t>> IndexSubsets(std::size_t n,
                                                   std::size_t k);

}  // namespace stepeval

#endif  // STEPEVAL_METRICS_H_
