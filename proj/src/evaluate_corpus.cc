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
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include "json_util.h"
#include "stepeval/corpus.h"
#include "stepeval/error.h"

namespace stepeval {
namespace {

using internal::Json;

InstanceScore FromReport(const MetricReport &r, std::size_t predicted_steps,
                         const ReferenceSet &refs) {
  InstanceScore s;
  s.precision = r.precision;
  s.recall = r.recall;
  s.f1 = r.f1;
  s.c_star = r.c_star;
  s.predicted_steps = predicted_steps;
  s.golden_steps = refs.references[r.winning_reference_index].size();
  s.gstar = r.winning_reference_index;
  s.alignment = r.winning_alignment;
  return s;
}

InstanceDetail EvaluateOne(const std::string &id, const Derivation *predicted,
                           const ReferenceSet &refs,
                           const CorpusOptions &options) {
  InstanceDetail detail;
  detail.id = id;
  if (predicted == nullptr) {
    detail.missing = true;
    for (ScorerKind k : options.scorers) {
      InstanceScore s;
      s.golden_steps = refs.references.empty() ? 0 : refs.references[0].size();
      detail.scores[k] = s;
    }
    return detail;
  }

  ReferenceSet restricted = refs;
  if (options.reference_limit) {
    const std::size_t k = *options.reference_limit;
    if (k < 1 || k > refs.references.size()) {
      throw Error(ErrorCode::kBadK,
                  "reference limit " + std::to_string(k) + " exceeds the " +
                      std::to_string(refs.references.size()) +
                      " references of \"" + id + "\"",
                  id);
    }
    if (options.ablation_policy == AblationPolicy::kAllSubsetsMean) {
      const auto ablated = ReferenceAblation(*predicted, refs, k,
                                             options.ablation_policy,
                                             options.evaluation);
      for (ScorerKind kind : options.scorers) {
        const AblatedReport &a = ablated.at(kind);
        InstanceScore s;
        s.precision = a.precision;
        s.recall = a.recall;
        s.f1 = a.f1;
        s.c_star = a.c_star;
        s.predicted_steps = predicted->size();
        detail.scores[kind] = s;
      }
      return detail;
    }
    restricted.references.resize(k);
  }

  const PhraseSimilarityFn phrase =
      LevenshteinPhraseSimilarity(options.evaluation.similarity);
  for (ScorerKind kind : options.scorers) {
    const MetricReport r = EvaluateDerivation(
        *predicted, restricted, Scorer{kind, phrase},
        options.evaluation.gstar_policy);
    detail.scores[kind] = FromReport(r, predicted->size(), restricted);
  }
  return detail;
}

std::string Fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

Json PrfJson(double p, double r, double f) {
  Json o = Json::object();
  o["precision"] = p;
  o["recall"] = r;
  o["f1"] = f;
  return o;
}

}  // namespace

CorpusReport EvaluateCorpus(const DerivationSet &predictions,
                            const DerivationSet &references,
                            const CorpusOptions &options) {
  if (options.scorers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no scorer selected");
  }
  if (options.aggregate == Aggregate::kMicro && options.reference_limit &&
      options.ablation_policy == AblationPolicy::kAllSubsetsMean) {
    throw Error(ErrorCode::kInvalidArgument,
                "micro aggregation is undefined for subset-averaged "
                "reference ablation");
  }
  for (const auto &[id, _] : predictions.entries) {
    if (!references.entries.contains(id)) {
      throw Error(ErrorCode::kUnknownId,
                  "prediction for \"" + id + "\" has no references", id);
    }
  }

  CorpusReport report;
  report.aggregate = options.aggregate;
  report.options = options;
  report.scorers = options.scorers;
  std::sort(report.scorers.begin(), report.scorers.end());
  report.scorers.erase(std::unique(report.scorers.begin(), report.scorers.end()),
                       report.scorers.end());
  CorpusOptions effective = options;
  effective.scorers = report.scorers;

  std::vector<const std::string *> ids;
  std::vector<const Derivation *> predicted;
  std::vector<const ReferenceSet *> refs;
  for (const auto &[id, r] : references.entries) {
    ids.push_back(&id);
    refs.push_back(&r);
    auto it = predictions.entries.find(id);
    if (it == predictions.entries.end()) {
      if (options.strict) {
        throw Error(ErrorCode::kMissingPrediction,
                    "no prediction for \"" + id + "\"", id);
      }
      predicted.push_back(nullptr);
      report.missing.push_back(id);
    } else {
      predicted.push_back(&it->second.references.front());
    }
  }
  report.instance_count = ids.size();

  // Per-instance work is independent; results land in fixed slots so the
  // report does not depend on scheduling.
  const std::size_t n = ids.size();
  report.details.resize(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        report.details[i] = EvaluateOne(*ids[i], predicted[i], *refs[i],
                                        effective);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (ScorerKind kind : report.scorers) {
    Prf total;
    if (options.aggregate == Aggregate::kMacro) {
      for (const auto &d : report.details) {
        const InstanceScore &s = d.scores.at(kind);
        total.precision += s.precision;
        total.recall += s.recall;
        total.f1 += s.f1;
      }
      if (n > 0) {
        total.precision /= static_cast<double>(n);
        total.recall /= static_cast<double>(n);
        total.f1 /= static_cast<double>(n);
      }
    } else {
      double c = 0.0, pd = 0.0, gd = 0.0;
      for (const auto &d : report.details) {
        const InstanceScore &s = d.scores.at(kind);
        c += s.c_star;
        pd += static_cast<double>(s.predicted_steps);
        gd += static_cast<double>(s.golden_steps);
      }
      total.precision = pd > 0 ? c / pd : 0.0;
      total.recall = gd > 0 ? c / gd : 0.0;
      total.f1 = F1Score(total.precision, total.recall);
    }
    report.totals[kind] = total;
  }
  return report;
}

std::string CorpusReportToJson(const CorpusReport &report,
                               bool include_details) {
  const CorpusOptions &o = report.options;
  Json doc = Json::object();
  doc["aggregate"] =
      report.aggregate == Aggregate::kMacro ? "macro" : "micro";
  Json opts = Json::object();
  opts["case_fold"] = o.evaluation.similarity.case_fold;
  opts["gstar_policy"] = o.evaluation.gstar_policy == GStarPolicy::kF1
                             ? "f1"
                             : "alignment-score";
  if (o.reference_limit) {
    opts["reference_limit"] = *o.reference_limit;
    opts["ablation_policy"] = o.ablation_policy == AblationPolicy::kPrefix
                                  ? "prefix"
                                  : "all-subsets-mean";
  } else {
    opts["reference_limit"] = nullptr;
  }
  opts["strict"] = o.strict;
  doc["options"] = std::move(opts);
  doc["instances"] = report.instance_count;
  doc["evaluated"] = report.instance_count - report.missing.size();
  doc["missing"] = report.missing;

  Json scorers = Json::object();
  for (ScorerKind k : report.scorers) {
    const Prf &t = report.totals.at(k);
    scorers[std::string(ScorerName(k))] = PrfJson(t.precision, t.recall, t.f1);
  }
  doc["scorers"] = std::move(scorers);

  if (include_details) {
    Json details = Json::array();
    for (const auto &d : report.details) {
      Json item = Json::object();
      item["id"] = d.id;
      item["missing"] = d.missing;
      Json scores = Json::object();
      for (const auto &[k, s] : d.scores) {
        Json e = PrfJson(s.precision, s.recall, s.f1);
        e["c_star"] = s.c_star;
        e["predicted_steps"] = s.predicted_steps;
        if (s.gstar) {
          e["gstar"] = *s.gstar;
          e["golden_steps"] = s.golden_steps;
        } else {
          e["gstar"] = nullptr;
        }
        if (s.alignment) {
          Json pairs = Json::array();
          for (const auto &[dj, gj] : s.alignment->pairs) {
            pairs.push_back(Json::array({dj, gj}));
          }
          e["alignment"] = std::move(pairs);
        }
        scores[std::string(ScorerName(k))] = std::move(e);
      }
      item["scores"] = std::move(scores);
      details.push_back(std::move(item));
    }
    doc["details"] = std::move(details);
  }
  return doc.dump(2) + "\n";
}

std::string CorpusReportToTsv(const CorpusReport &report) {
  std::string out;
  for (ScorerKind k : report.scorers) {
    const Prf &t = report.totals.at(k);
    out += std::string(ScorerName(k)) + "\t" + Fixed4(t.precision) + "\t" +
           Fixed4(t.recall) + "\t" + Fixed4(t.f1) + "\n";
  }
  return out;
}

}  // namespace stepeval
