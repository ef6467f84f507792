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

#include <map>
#include <set>

#include "stepeval/corpus.h"
#include "stepeval/error.h"

namespace stepeval {

AlphaComponents KrippendorffAlphaComponents(const RatingMatrix &ratings) {
  // Coincidence matrix o[c][k]: every ordered pair of values within a unit,
  // weighted by 1 / (m_u - 1).
  std::map<int, std::map<int, double>> coincidence;
  AlphaComponents out;
  for (const auto &unit : ratings) {
    std::vector<int> values;
    for (const auto &v : unit) {
      if (v) values.push_back(*v);
    }
    if (values.size() < 2) continue;
    ++out.pairable_units;
    out.pairable_values += values.size();
    const double weight = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (i != j) coincidence[values[i]][values[j]] += weight;
      }
    }
  }
  if (out.pairable_units < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "Krippendorff's alpha needs at least two units with two or "
                "more ratings");
  }

  std::map<int, double> marginal;
  double n = 0.0;
  double observed = 0.0;
  for (const auto &[c, row] : coincidence) {
    for (const auto &[k, o] : row) {
      marginal[c] += o;
      n += o;
      if (c != k) observed += o;
    }
  }
  double expected = 0.0;
  for (const auto &[c, nc] : marginal) {
    for (const auto &[k, nk] : marginal) {
      if (c != k) expected += nc * nk;
    }
  }
  out.observed_disagreement = observed / n;
  out.expected_disagreement = expected / (n * (n - 1.0));
  if (out.expected_disagreement == 0.0) {
    // A single label across all pairable values: no disagreement possible.
    out.alpha = 1.0;
  } else {
    out.alpha = 1.0 - out.observed_disagreement / out.expected_disagreement;
  }
  return out;
}

double KrippendorffAlpha(const RatingMatrix &ratings) {
  return KrippendorffAlphaComponents(ratings).alpha;
}

RatingMatrix JudgementMatrix(const std::vector<AnswerabilityJudgement> &js) {
  std::map<std::string, std::size_t> unit_index;
  std::map<std::string, std::size_t> rater_index;
  for (const auto &j : js) {
    unit_index.emplace(j.question_id, 0);
    rater_index.emplace(j.worker_id, 0);
  }
  std::size_t i = 0;
  for (auto &[id, idx] : unit_index) idx = i++;
  i = 0;
  for (auto &[id, idx] : rater_index) idx = i++;

  RatingMatrix m(unit_index.size(),
                 std::vector<std::optional<int>>(rater_index.size()));
  for (const auto &j : js) {
    auto &cell = m[unit_index[j.question_id]][rater_index[j.worker_id]];
    if (cell) {
      throw Error(ErrorCode::kDuplicateId,
                  "worker \"" + j.worker_id + "\" judged \"" + j.question_id +
                      "\" twice",
                  j.question_id);
    }
    cell = static_cast<int>(j.label);
  }
  return m;
}

AgreementReport ComputeAgreement(
    const std::vector<AnswerabilityJudgement> &judgements) {
  AgreementReport report;
  const RatingMatrix matrix = JudgementMatrix(judgements);
  try {
    report.alpha = KrippendorffAlpha(matrix);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kInsufficientData) throw;
  }
  const auto votes = MajorityVotes(judgements);
  report.units = votes.size();

  std::map<Vote, std::size_t> counts;
  for (const auto &[id, v] : votes) ++counts[v];
  const double total = static_cast<double>(votes.size());
  const double decided = total - static_cast<double>(counts[Vote::kSplit]);
  for (Vote v : {Vote::kYes, Vote::kLikely, Vote::kNo}) {
    const std::string name(VoteName(v));
    const double c = static_cast<double>(counts[v]);
    report.label_distribution[name] = total > 0 ? c / total : 0.0;
    report.label_distribution_excluding_split[name] =
        decided > 0 ? c / decided : 0.0;
  }
  report.split_fraction =
      total > 0 ? static_cast<double>(counts[Vote::kSplit]) / total : 0.0;
  return report;
}

}  // namespace stepeval
