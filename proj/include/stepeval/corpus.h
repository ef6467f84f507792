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

#ifndef STEPEVAL_CORPUS_H_
#define STEPEVAL_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepeval/metrics.h"
#include "stepeval/model.h"

namespace stepeval {

// ---------------------------------------------------------------------------
// File I/O
//
// Instances file: JSON array of
//   {"id", "question", "answer",
//    "articles": [{"title", "sentences": [...]}, ...],
//    "sf_flags": [[bool, ...], ...]}            (sf_flags optional)
//
// Reference / prediction file: JSON object mapping id to an array of
// derivations. A derivation is an array of steps
//   [article_idx, sentence_idx, head, relation, tail]
// with 1-based, nullable indices. Prediction files hold exactly one
// derivation per id.
//
// Submissions file: JSON array of
//   {"question_id", "worker_id", "answer": "correct"|"wrong"|"neither",
//    "derivation": [steps...]}
//
// Judgements file: JSON array of
//   {"question_id", "worker_id", "label": "Yes"|"Likely"|"No"}
//
// Loaders throw Error with kIo, kParse (with line:column locus),
// kSchemaViolation (with a JSON-pointer locus), kDuplicateId, or the
// validation errors of ValidateDerivation.
// ---------------------------------------------------------------------------

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);

std::vector<Instance> ParseInstances(std::string_view json,
                                     const std::string &source = "<memory>");
std::vector<Instance> LoadInstances(const std::string &path);

enum class DerivationFileKind { kReferences, kPredictions };

// Keyed by question id; std::map keeps iteration in id order.
struct DerivationSet {
  std::map<std::string, ReferenceSet> entries;
  std::vector<std::string> warnings;

  std::size_t size() const { return entries.size(); }
};

// `context`, when given, is used to bounds-check provenance of ids that it
// contains.
DerivationSet ParseDerivations(std::string_view json, DerivationFileKind kind,
                               const std::string &source = "<memory>",
                               const std::vector<Instance> *context = nullptr);
DerivationSet LoadDerivations(const std::string &path, DerivationFileKind kind,
                              const std::vector<Instance> *context = nullptr);

// Serializes back to the reference/prediction schema (2-space indent,
// ids in sorted order, trailing newline).
std::string DerivationsToJson(const DerivationSet &set);

std::vector<AnnotationSubmission> ParseSubmissions(
    std::string_view json, const std::string &source = "<memory>");
std::vector<AnnotationSubmission> LoadSubmissions(const std::string &path);

std::vector<AnswerabilityJudgement> ParseJudgements(
    std::string_view json, const std::string &source = "<memory>");
std::vector<AnswerabilityJudgement> LoadJudgements(const std::string &path);

std::vector<ReferenceSet> ReferenceSets(const DerivationSet &set);

// ---------------------------------------------------------------------------
// Annotation filtering
// ---------------------------------------------------------------------------

enum class RetainPolicy {
  kExactlyThree,  // drop questions left with != 3 derivations
  kSampleThree,   // keep a seeded sample of 3 when more remain
};

struct FilterOptions {
  RetainPolicy retain_policy = RetainPolicy::kExactlyThree;
  std::uint64_t seed = 0;
};

struct FilterStats {
  std::size_t submissions = 0;
  std::size_t questions = 0;
  std::size_t wrong = 0;       // submissions with a wrong answer
  std::size_t neither = 0;     // submissions answering "neither"
  std::size_t not_three = 0;   // questions not left with exactly three
  std::size_t sampled = 0;     // questions cut down to three (kSampleThree)
  std::size_t non_yes = 0;     // questions without a Yes majority vote
  std::size_t retained = 0;
};

struct FilterResult {
  DerivationSet retained;
  FilterStats stats;
};

// Drops wrong / neither submissions, then questions not left with exactly
// three derivations. The result does not depend on submission order:
// references are ordered by worker id.
FilterResult FilterSubmissions(const std::vector<AnnotationSubmission> &subs,
                               const FilterOptions &options = {});

enum class Vote { kYes, kLikely, kNo, kSplit };

std::string_view VoteName(Vote vote);

// Strict-majority label, or kSplit. Throws kNoJudgements on empty input.
Vote MajorityVote(const std::vector<AnswerabilityJudgement> &judgements);

// Per-question votes over a judgement list.
std::map<std::string, Vote> MajorityVotes(
    const std::vector<AnswerabilityJudgement> &judgements);

// Keeps ids whose vote is Yes; each dropped id bumps `non_yes` if non-null.
// Throws kMissingVote for an id without a vote.
DerivationSet FilterByAnswerability(const DerivationSet &refsets,
                                    const std::map<std::string, Vote> &votes,
                                    std::size_t *non_yes = nullptr);

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

// units x raters; std::nullopt marks a missing rating. Labels are nominal.
using RatingMatrix = std::vector<std::vector<std::optional<int>>>;

struct AlphaComponents {
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  double alpha = 0.0;
  std::size_t pairable_values = 0;
  std::size_t pairable_units = 0;
};

// Krippendorff's alpha for nominal data via the coincidence matrix. Units
// with fewer than two ratings are ignored. When every pairable value carries
// the same label the expected disagreement is zero and alpha is 1.
//
// Throws kInsufficientData with fewer than two pairable units.
AlphaComponents KrippendorffAlphaComponents(const RatingMatrix &ratings);
double KrippendorffAlpha(const RatingMatrix &ratings);

// Builds the question x worker matrix from judgements (rows ordered by
// question id, columns by worker id). Throws kDuplicateId when a worker
// judges the same question twice.
RatingMatrix JudgementMatrix(const std::vector<AnswerabilityJudgement> &js);

struct AgreementReport {
  // Unset when there are too few pairable ratings.
  std::optional<double> alpha;
  // Fractions of voted units per majority label; these plus split_fraction
  // sum to 1.
  std::map<std::string, double> label_distribution;
  double split_fraction = 0.0;
  // Same labels with split units removed from the base.
  std::map<std::string, double> label_distribution_excluding_split;
  std::size_t units = 0;
};

AgreementReport ComputeAgreement(
    const std::vector<AnswerabilityJudgement> &judgements);

struct PipelineResult {
  DerivationSet retained;
  FilterStats stats;
  AgreementReport agreement;
};

// FilterSubmissions, then FilterByAnswerability over the majority votes;
// agreement is computed over every judgement.
PipelineResult RunPipeline(const std::vector<AnnotationSubmission> &subs,
                           const std::vector<AnswerabilityJudgement> &judgements,
                           const FilterOptions &options = {});

// {"filter": {...counts...}, "agreement": {...}, "histogram": {...}}
std::string PipelineStatsToJson(const PipelineResult &result);

// {"alpha", "units", "label_distribution", "split_fraction",
//  "label_distribution_excluding_split"}
std::string AgreementReportToJson(const AgreementReport &report);

// {"2", "3", ">=4", "<2", "total", "exact": {"<n>": count, ...}}
std::string HistogramToJson(const StepCountHistogram &histogram);

// ---------------------------------------------------------------------------
// Corpus evaluation
// ---------------------------------------------------------------------------

enum class Aggregate { kMacro, kMicro };

struct CorpusOptions {
  std::vector<ScorerKind> scorers{kAllScorers.begin(), kAllScorers.end()};
  EvaluationOptions evaluation;
  Aggregate aggregate = Aggregate::kMacro;
  // Missing predictions are an error instead of scoring zero.
  bool strict = false;
  // Restrict each reference set to k derivations (see ReferenceAblation).
  std::optional<std::size_t> reference_limit;
  AblationPolicy ablation_policy = AblationPolicy::kPrefix;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 1;
};

struct InstanceScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double c_star = 0.0;
  std::size_t predicted_steps = 0;
  std::size_t golden_steps = 0;
  std::optional<std::size_t> gstar;
  std::optional<Alignment> alignment;
};

struct InstanceDetail {
  std::string id;
  bool missing = false;
  std::map<ScorerKind, InstanceScore> scores;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct CorpusReport {
  Aggregate aggregate = Aggregate::kMacro;
  std::vector<ScorerKind> scorers;
  std::map<ScorerKind, Prf> totals;
  std::size_t instance_count = 0;
  std::vector<std::string> missing;
  std::vector<InstanceDetail> details;  // sorted by id
  CorpusOptions options;
};

// Throws kUnknownId for a prediction without references, and
// kMissingPrediction in strict mode.
CorpusReport EvaluateCorpus(const DerivationSet &predictions,
                            const DerivationSet &references,
                            const CorpusOptions &options = {});

std::string CorpusReportToJson(const CorpusReport &report,
                               bool include_details = true);

// One row per selected scorer in the order entity, relation, full:
// "<scorer>\t<pr>\t<rc>\t<f1>" with four decimals.
std::string CorpusReportToTsv(const CorpusReport &report);

}  // namespace stepeval

#endif  // STEPEVAL_CORPUS_H_
