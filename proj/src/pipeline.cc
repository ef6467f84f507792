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

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "stepeval/corpus.h"
#include "json_util.h"
#include "stepeval/error.h"

namespace stepeval {
namespace {

// Canonical text of a derivation; orders same-worker submissions.
std::string DerivationKey(const Derivation &d) {
  std::string key;
  for (const auto &s : d.steps) {
    key += s.head.text();
    key += '\x1f';
    key += s.relation.text();
    key += '\x1f';
    key += s.tail.text();
    key += '\x1e';
  }
  return key;
}

}  // namespace

FilterResult FilterSubmissions(const std::vector<AnnotationSubmission> &subs,
                               const FilterOptions &options) {
  FilterResult result;
  result.stats.submissions = subs.size();

  std::map<std::string, std::vector<const AnnotationSubmission *>> kept;
  std::set<std::string> questions;
  for (const auto &s : subs) {
    questions.insert(s.question_id);
    switch (s.chosen_answer) {
      case AnswerChoice::kWrong:
        ++result.stats.wrong;
        continue;
      case AnswerChoice::kNeither:
        ++result.stats.neither;
        continue;
      case AnswerChoice::kCorrect:
        kept[s.question_id].push_back(&s);
        break;
    }
  }
  result.stats.questions = questions.size();

  for (const std::string &id : questions) {
    auto it = kept.find(id);
    if (it == kept.end()) {
      ++result.stats.not_three;
      continue;
    }
    auto &group = it->second;
    std::sort(group.begin(), group.end(),
              [](const AnnotationSubmission *a, const AnnotationSubmission *b) {
                return std::make_tuple(a->worker_id,
                                       DerivationKey(a->derivation)) <
                       std::make_tuple(b->worker_id,
                                       DerivationKey(b->derivation));
              });
    if (group.size() > 3 &&
        options.retain_policy == RetainPolicy::kSampleThree) {
      // Seeded per question so the choice does not depend on which other
      // questions are in the file.
      std::seed_seq seq(id.begin(), id.end());
      std::mt19937_64 base(seq);
      std::mt19937_64 rng(base() ^ options.seed);
      for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t j = i + rng() % (group.size() - i);
        std::swap(group[i], group[j]);
      }
      group.resize(3);
      std::sort(group.begin(), group.end(),
                [](const AnnotationSubmission *a,
                   const AnnotationSubmission *b) {
                  return std::make_tuple(a->worker_id,
                                         DerivationKey(a->derivation)) <
                         std::make_tuple(b->worker_id,
                                         DerivationKey(b->derivation));
                });
      ++result.stats.sampled;
    }
    if (group.size() != 3) {
      ++result.stats.not_three;
      continue;
    }
    ReferenceSet refs;
    refs.question_id = id;
    for (const auto *s : group) refs.references.push_back(s->derivation);
    result.retained.entries.emplace(id, std::move(refs));
  }
  result.stats.retained = result.retained.size();
  return result;
}

std::string_view VoteName(Vote vote) {
  switch (vote) {
    case Vote::kYes: return "Yes";
    case Vote::kLikely: return "Likely";
    case Vote::kNo: return "No";
    case Vote::kSplit: return "Split";
  }
  return "Split";
}

Vote MajorityVote(const std::vector<AnswerabilityJudgement> &judgements) {
  if (judgements.empty()) {
    throw Error(ErrorCode::kNoJudgements, "no answerability judgements");
  }
  std::size_t counts[3] = {0, 0, 0};
  for (const auto &j : judgements) ++counts[static_cast<int>(j.label)];
  for (int k = 0; k < 3; ++k) {
    if (2 * counts[k] > judgements.size()) return static_cast<Vote>(k);
  }
  return Vote::kSplit;
}

std::map<std::string, Vote> MajorityVotes(
    const std::vector<AnswerabilityJudgement> &judgements) {
  std::map<std::string, std::vector<AnswerabilityJudgement>> grouped;
  for (const auto &j : judgements) grouped[j.question_id].push_back(j);
  std::map<std::string, Vote> out;
  for (const auto &[id, js] : grouped) out[id] = MajorityVote(js);
  return out;
}

DerivationSet FilterByAnswerability(const DerivationSet &refsets,
                                    const std::map<std::string, Vote> &votes,
                                    std::size_t *non_yes) {
  DerivationSet out;
  out.warnings = refsets.warnings;
  for (const auto &[id, refs] : refsets.entries) {
    auto it = votes.find(id);
    if (it == votes.end()) {
      throw Error(ErrorCode::kMissingVote,
                  "no answerability vote for \"" + id + "\"", id);
    }
    if (it->second == Vote::kYes) {
      out.entries.emplace(id, refs);
    } else if (non_yes != nullptr) {
      ++*non_yes;
    }
  }
  return out;
}

PipelineResult RunPipeline(const std::vector<AnnotationSubmission> &subs,
                           const std::vector<AnswerabilityJudgement> &judgements,
                           const FilterOptions &options) {
  PipelineResult out;
  FilterResult filtered = FilterSubmissions(subs, options);
  out.stats = filtered.stats;
  out.retained = FilterByAnswerability(filtered.retained,
                                       MajorityVotes(judgements),
                                       &out.stats.non_yes);
  out.stats.retained = out.retained.size();
  out.agreement = ComputeAgreement(judgements);
  return out;
}

std::string HistogramToJson(const StepCountHistogram &h) {
  internal::Json doc = internal::Json::object();
  doc["2"] = h.two;
  doc["3"] = h.three;
  doc[">=4"] = h.four_or_more;
  doc["<2"] = h.fewer_than_two;
  doc["total"] = h.total;
  internal::Json exact = internal::Json::object();
  for (const auto &[n, count] : h.exact) exact[std::to_string(n)] = count;
  doc["exact"] = std::move(exact);
  return doc.dump();
}

std::string AgreementReportToJson(const AgreementReport &a) {
  using internal::Json;
  Json doc = Json::object();
  doc["alpha"] = a.alpha ? Json(*a.alpha) : Json(nullptr);
  doc["units"] = a.units;
  doc["label_distribution"] = a.label_distribution;
  doc["split_fraction"] = a.split_fraction;
  doc["label_distribution_excluding_split"] =
      a.label_distribution_excluding_split;
  return doc.dump(2) + "\n";
}

std::string PipelineStatsToJson(const PipelineResult &result) {
  using internal::Json;
  const FilterStats &s = result.stats;
  Json doc = Json::object();
  doc["filter"] = Json{{"submissions", s.submissions},
                       {"questions", s.questions},
                       {"wrong", s.wrong},
                       {"neither", s.neither},
                       {"not_three", s.not_three},
                       {"sampled", s.sampled},
                       {"non_yes", s.non_yes},
                       {"retained", s.retained}};
  doc["agreement"] = Json::parse(AgreementReportToJson(result.agreement));
  doc["histogram"] = Json::parse(HistogramToJson(
      DerivationStepCountHistogram(ReferenceSets(result.retained))));
  return doc.dump(2) + "\n";
}

}  // namespace stepeval
