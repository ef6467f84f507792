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

#include "stepeval/stepeval.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "json_util.h"
#include "stepeval/align.h"
#include "stepeval/baselines.h"
#include "stepeval/corpus.h"
#include "stepeval/error.h"
#include "stepeval/synth.h"
#include "stepeval/textsim.h"
#include "stepeval/validate.h"

struct stepeval_options {
  stepeval::CorpusOptions corpus;
  stepeval::FilterOptions filter;
  stepeval::BaselineOptions baseline;
};

struct stepeval_instances {
  std::vector<stepeval::Instance> items;
};

struct stepeval_derivations {
  stepeval::DerivationSet set;
};

struct stepeval_annotations {
  stepeval::AnnotationIndex index;
};

struct stepeval_report {
  stepeval::CorpusReport report;
};

namespace {

using stepeval::Error;
using stepeval::ErrorCode;

struct LastError {
  std::string message;
  std::string locus;
  std::string json;
};

thread_local LastError g_last_error;

stepeval_status ToStatus(ErrorCode code) {
  if (code == ErrorCode::kInternal) return STEPEVAL_ERR_INTERNAL;
  return static_cast<stepeval_status>(static_cast<int>(code) + 1);
}

void SetError(ErrorCode code, const std::string &message,
              const std::string &locus) {
  g_last_error.message = message;
  g_last_error.locus = locus;
  stepeval::internal::Json err = stepeval::internal::Json::object();
  err["code"] = std::string(stepeval::ErrorCodeName(code));
  err["message"] = message;
  err["locus"] = locus;
  stepeval::internal::Json doc = stepeval::internal::Json::object();
  doc["error"] = std::move(err);
  g_last_error.json = doc.dump(-1, ' ', false,
                               nlohmann::json::error_handler_t::replace);
}

void ClearError() {
  g_last_error.message.clear();
  g_last_error.locus.clear();
  g_last_error.json.clear();
}

template <typename F>
stepeval_status Guard(F &&body) {
  ClearError();
  try {
    body();
    return STEPEVAL_OK;
  } catch (const Error &e) {
    SetError(e.code(), e.what(), e.locus());
    return ToStatus(e.code());
  } catch (const std::bad_alloc &) {
    SetError(ErrorCode::kInternal, "out of memory", "");
  } catch (const std::exception &e) {
    SetError(ErrorCode::kInternal, e.what(), "");
  } catch (...) {
    SetError(ErrorCode::kInternal, "unknown exception", "");
  }
  return STEPEVAL_ERR_INTERNAL;
}

void Require(bool ok, const char *what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

stepeval::DerivationFileKind DerivationKind(stepeval_file_kind kind) {
  switch (kind) {
    case STEPEVAL_FILE_REFERENCES: return stepeval::DerivationFileKind::kReferences;
    case STEPEVAL_FILE_PREDICTIONS: return stepeval::DerivationFileKind::kPredictions;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "derivation files are references or predictions");
  }
}

}  // namespace

extern "C" {

const char *stepeval_version(void) { return "0.1.0"; }

const char *stepeval_status_name(stepeval_status status) {
  if (status == STEPEVAL_OK) return "Ok";
  if (status == STEPEVAL_ERR_INTERNAL) return "InternalError";
  const int index = static_cast<int>(status) - 1;
  if (index < 0 || index >= static_cast<int>(ErrorCode::kInternal)) {
    return "UnknownStatus";
  }
  return stepeval::ErrorCodeName(static_cast<ErrorCode>(index)).data();
}

int stepeval_status_is_input_error(stepeval_status status) {
  return status != STEPEVAL_OK && status != STEPEVAL_ERR_INTERNAL;
}

const char *stepeval_last_error_message(void) {
  return g_last_error.message.c_str();
}

const char *stepeval_last_error_locus(void) { return g_last_error.locus.c_str(); }

const char *stepeval_last_error_json(void) { return g_last_error.json.c_str(); }

void stepeval_string_free(char *s) { std::free(s); }

// -- options ----------------------------------------------------------------

stepeval_status stepeval_options_create(stepeval_options **out) {
  return Guard([&] {
    Require(out != nullptr, "null output pointer");
    *out = new stepeval_options();
  });
}

void stepeval_options_destroy(stepeval_options *opts) { delete opts; }

stepeval_status stepeval_options_set_scorers(stepeval_options *opts, unsigned mask) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(mask != 0 && (mask & ~static_cast<unsigned>(STEPEVAL_SCORER_ALL)) == 0,
            "scorer mask must select at least one of entity, relation, full");
    opts->corpus.scorers.clear();
    for (std::size_t i = 0; i < stepeval::kAllScorers.size(); ++i) {
      if (mask & (1u << i)) opts->corpus.scorers.push_back(stepeval::kAllScorers[i]);
    }
  });
}

stepeval_status stepeval_options_set_case_fold(stepeval_options *opts, int enabled) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    opts->corpus.evaluation.similarity.case_fold = enabled != 0;
  });
}

stepeval_status stepeval_options_set_gstar_policy(stepeval_options *opts,
                                        stepeval_gstar_policy policy) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(policy == STEPEVAL_GSTAR_ALIGNMENT_SCORE || policy == STEPEVAL_GSTAR_F1,
            "unknown G* policy");
    opts->corpus.evaluation.gstar_policy =
        policy == STEPEVAL_GSTAR_F1 ? stepeval::GStarPolicy::kF1
                               : stepeval::GStarPolicy::kAlignmentScore;
  });
}

stepeval_status stepeval_options_set_aggregate(stepeval_options *opts,
                                     stepeval_aggregate aggregate) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(aggregate == STEPEVAL_AGGREGATE_MACRO || aggregate == STEPEVAL_AGGREGATE_MICRO,
            "unknown aggregate");
    opts->corpus.aggregate = aggregate == STEPEVAL_AGGREGATE_MICRO
                                 ? stepeval::Aggregate::kMicro
                                 : stepeval::Aggregate::kMacro;
  });
}

stepeval_status stepeval_options_set_strict(stepeval_options *opts, int strict) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    opts->corpus.strict = strict != 0;
  });
}

stepeval_status stepeval_options_set_reference_limit(stepeval_options *opts, size_t k,
                                           stepeval_ablation_policy policy) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(policy == STEPEVAL_ABLATION_PREFIX ||
                policy == STEPEVAL_ABLATION_ALL_SUBSETS_MEAN,
            "unknown ablation policy");
    if (k == 0) {
      opts->corpus.reference_limit.reset();
    } else {
      opts->corpus.reference_limit = k;
    }
    opts->corpus.ablation_policy = policy == STEPEVAL_ABLATION_ALL_SUBSETS_MEAN
                                       ? stepeval::AblationPolicy::kAllSubsetsMean
                                       : stepeval::AblationPolicy::kPrefix;
  });
}

stepeval_status stepeval_options_set_threads(stepeval_options *opts, unsigned threads) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    opts->corpus.threads = threads;
  });
}

stepeval_status stepeval_options_set_retain_policy(stepeval_options *opts,
                                         stepeval_retain_policy policy,
                                         uint64_t seed) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(policy == STEPEVAL_RETAIN_EXACTLY_THREE ||
                policy == STEPEVAL_RETAIN_SAMPLE_THREE,
            "unknown retain policy");
    opts->filter.retain_policy = policy == STEPEVAL_RETAIN_SAMPLE_THREE
                                     ? stepeval::RetainPolicy::kSampleThree
                                     : stepeval::RetainPolicy::kExactlyThree;
    opts->filter.seed = seed;
  });
}

stepeval_status stepeval_options_set_core_span(stepeval_options *opts, stepeval_core_span span) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    Require(span == STEPEVAL_CORE_SPAN_SUBTREE || span == STEPEVAL_CORE_SPAN_TOKEN,
            "unknown core span");
    opts->baseline.core_span = span == STEPEVAL_CORE_SPAN_TOKEN
                                   ? stepeval::CoreSpan::kToken
                                   : stepeval::CoreSpan::kSubtree;
  });
}

stepeval_status stepeval_options_set_sf_only(stepeval_options *opts, int sf_only) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    opts->baseline.sf_only = sf_only != 0;
  });
}

stepeval_status stepeval_options_set_fallback(stepeval_options *opts, int fallback) {
  return Guard([&] {
    Require(opts != nullptr, "null options");
    opts->baseline.fallback = fallback != 0;
  });
}

// -- data files ---------------------------------------------------------------

stepeval_status stepeval_instances_load(const char *path, stepeval_instances **out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<stepeval_instances>();
    handle->items = stepeval::LoadInstances(path);
    *out = handle.release();
  });
}

size_t stepeval_instances_count(const stepeval_instances *instances) {
  return instances == nullptr ? 0 : instances->items.size();
}

void stepeval_instances_destroy(stepeval_instances *instances) { delete instances; }

stepeval_status stepeval_derivations_load(const char *path, stepeval_file_kind kind,
                                const stepeval_instances *context,
                                stepeval_derivations **out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<stepeval_derivations>();
    handle->set = stepeval::LoadDerivations(path, DerivationKind(kind),
                                       context ? &context->items : nullptr);
    *out = handle.release();
  });
}

stepeval_status stepeval_derivations_parse(const char *json, size_t length,
                                 stepeval_file_kind kind, stepeval_derivations **out) {
  return Guard([&] {
    Require(json != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<stepeval_derivations>();
    handle->set = stepeval::ParseDerivations(std::string_view(json, length),
                                        DerivationKind(kind));
    *out = handle.release();
  });
}

size_t stepeval_derivations_count(const stepeval_derivations *set) {
  return set == nullptr ? 0 : set->set.size();
}

size_t stepeval_derivations_warning_count(const stepeval_derivations *set) {
  return set == nullptr ? 0 : set->set.warnings.size();
}

const char *stepeval_derivations_warning(const stepeval_derivations *set, size_t index) {
  if (set == nullptr || index >= set->set.warnings.size()) return nullptr;
  return set->set.warnings[index].c_str();
}

stepeval_status stepeval_derivations_to_json(const stepeval_derivations *set, char **out) {
  return Guard([&] {
    Require(set != nullptr && out != nullptr, "null argument");
    *out = Dup(stepeval::DerivationsToJson(set->set));
  });
}

stepeval_status stepeval_derivations_write(const stepeval_derivations *set, const char *path) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    stepeval::WriteFile(path, stepeval::DerivationsToJson(set->set));
  });
}

stepeval_status stepeval_derivations_histogram_json(const stepeval_derivations *set,
                                          char **out) {
  return Guard([&] {
    Require(set != nullptr && out != nullptr, "null argument");
    *out = Dup(stepeval::HistogramToJson(
        stepeval::DerivationStepCountHistogram(stepeval::ReferenceSets(set->set))));
  });
}

void stepeval_derivations_destroy(stepeval_derivations *set) { delete set; }

stepeval_status stepeval_annotations_load(const char *path, stepeval_annotations **out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<stepeval_annotations>();
    handle->index = stepeval::ParseAnnotationFile(path);
    *out = handle.release();
  });
}

size_t stepeval_annotations_sentence_count(const stepeval_annotations *a) {
  if (a == nullptr) return 0;
  size_t n = 0;
  for (const auto &[id, doc] : a->index) n += doc.size();
  return n;
}

void stepeval_annotations_destroy(stepeval_annotations *a) { delete a; }

// -- evaluation ---------------------------------------------------------------

stepeval_status stepeval_evaluate(const stepeval_derivations *references,
                        const stepeval_derivations *predictions,
                        const stepeval_options *opts, stepeval_report **out) {
  return Guard([&] {
    Require(references != nullptr && predictions != nullptr && out != nullptr,
            "null argument");
    const stepeval::CorpusOptions defaults;
    auto handle = std::make_unique<stepeval_report>();
    handle->report = stepeval::EvaluateCorpus(predictions->set, references->set,
                                         opts ? opts->corpus : defaults);
    *out = handle.release();
  });
}

stepeval_status stepeval_report_get(const stepeval_report *report, stepeval_scorer scorer,
                          double *precision, double *recall, double *f1) {
  return Guard([&] {
    Require(report != nullptr, "null report");
    Require(scorer >= STEPEVAL_ENTITY && scorer <= STEPEVAL_FULL, "unknown scorer");
    const auto kind = stepeval::kAllScorers[static_cast<std::size_t>(scorer)];
    auto it = report->report.totals.find(kind);
    Require(it != report->report.totals.end(),
            "scorer was not selected for this report");
    if (precision) *precision = it->second.precision;
    if (recall) *recall = it->second.recall;
    if (f1) *f1 = it->second.f1;
  });
}

size_t stepeval_report_instance_count(const stepeval_report *report) {
  return report == nullptr ? 0 : report->report.instance_count;
}

size_t stepeval_report_missing_count(const stepeval_report *report) {
  return report == nullptr ? 0 : report->report.missing.size();
}

stepeval_status stepeval_report_to_json(const stepeval_report *report, int include_details,
                              char **out) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null argument");
    *out = Dup(stepeval::CorpusReportToJson(report->report, include_details != 0));
  });
}

stepeval_status stepeval_report_to_tsv(const stepeval_report *report, char **out) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null argument");
    *out = Dup(stepeval::CorpusReportToTsv(report->report));
  });
}

void stepeval_report_destroy(stepeval_report *report) { delete report; }

// -- baselines, pipeline, synth -----------------------------------------------

stepeval_status stepeval_run_baseline(const stepeval_instances *instances,
                            const stepeval_annotations *annotations,
                            stepeval_baseline which, const stepeval_options *opts,
                            stepeval_derivations **out, char **warnings_json) {
  return Guard([&] {
    Require(instances != nullptr && out != nullptr, "null argument");
    Require(which == STEPEVAL_BASELINE_IE || which == STEPEVAL_BASELINE_CORE,
            "unknown baseline");
    const stepeval::BaselineOptions defaults;
    const stepeval::BaselineOptions &options = opts ? opts->baseline : defaults;
    const stepeval::AnnotationIndex empty;
    const stepeval::AnnotationIndex &index = annotations ? annotations->index : empty;
    auto handle = std::make_unique<stepeval_derivations>();
    std::vector<std::string> warnings;
    for (const auto &inst : instances->items) {
      stepeval::Derivation d =
          which == STEPEVAL_BASELINE_IE
              ? stepeval::BaselineIe(inst, index, options, &warnings)
              : stepeval::BaselineCore(inst, index, options, &warnings);
      if (d.empty()) {
        warnings.push_back(inst.question_id +
                           ": no triples extracted; instance omitted");
        continue;
      }
      stepeval::ReferenceSet refs;
      refs.question_id = inst.question_id;
      refs.references.push_back(stepeval::ValidateDerivation(d, &inst));
      handle->set.entries.emplace(inst.question_id, std::move(refs));
    }
    if (warnings_json != nullptr) {
      *warnings_json = Dup(stepeval::internal::Json(warnings).dump());
    }
    handle->set.warnings = std::move(warnings);
    *out = handle.release();
  });
}

stepeval_status stepeval_run_pipeline(const char *submissions_path,
                            const char *judgements_path,
                            const stepeval_options *opts,
                            stepeval_derivations **retained, char **stats_json) {
  return Guard([&] {
    Require(submissions_path != nullptr && judgements_path != nullptr &&
                retained != nullptr,
            "null argument");
    const stepeval::FilterOptions defaults;
    const auto subs = stepeval::LoadSubmissions(submissions_path);
    const auto judgements = stepeval::LoadJudgements(judgements_path);
    stepeval::PipelineResult result =
        stepeval::RunPipeline(subs, judgements, opts ? opts->filter : defaults);
    char *stats = stats_json ? Dup(stepeval::PipelineStatsToJson(result)) : nullptr;
    auto handle = std::make_unique<stepeval_derivations>();
    handle->set = std::move(result.retained);
    *retained = handle.release();
    if (stats_json) *stats_json = stats;
  });
}

stepeval_status stepeval_agreement(const char *judgements_path, char **report_json) {
  return Guard([&] {
    Require(judgements_path != nullptr && report_json != nullptr,
            "null argument");
    const auto judgements = stepeval::LoadJudgements(judgements_path);
    *report_json = Dup(stepeval::AgreementReportToJson(
        stepeval::ComputeAgreement(judgements)));
  });
}

stepeval_status stepeval_synth(uint64_t seed, size_t instances, size_t references,
                     unsigned perturbation_mask,
                     stepeval_derivations **references_out,
                     stepeval_derivations **predictions_out, char **manifest_json) {
  return Guard([&] {
    Require(references_out != nullptr && predictions_out != nullptr,
            "null argument");
    Require(perturbation_mask != 0 && perturbation_mask < (1u << 4),
            "perturbation mask must select at least one known perturbation");
    stepeval::SynthOptions options;
    options.seed = seed;
    options.instances = instances;
    options.references = references;
    options.perturbations.clear();
    const stepeval::Perturbation order[] = {
        stepeval::Perturbation::kNone, stepeval::Perturbation::kDropStep,
        stepeval::Perturbation::kRelationEdit, stepeval::Perturbation::kPhraseNoise};
    for (unsigned bit = 0; bit < 4; ++bit) {
      if (perturbation_mask & (1u << bit)) {
        options.perturbations.push_back(order[bit]);
      }
    }
    stepeval::SynthResult result = stepeval::Synthesize(options);
    char *manifest =
        manifest_json
            ? Dup(stepeval::ExpectationsToJson(options, result.expectations))
            : nullptr;
    auto refs = std::make_unique<stepeval_derivations>();
    auto preds = std::make_unique<stepeval_derivations>();
    refs->set = std::move(result.references);
    preds->set = std::move(result.predictions);
    *references_out = refs.release();
    *predictions_out = preds.release();
    if (manifest_json) *manifest_json = manifest;
  });
}

stepeval_status stepeval_validate_file(const char *path, stepeval_file_kind kind,
                             const stepeval_instances *context,
                             char **diagnostics_json) {
  return Guard([&] {
    Require(path != nullptr, "null path");
    Require(kind >= STEPEVAL_FILE_AUTO && kind <= STEPEVAL_FILE_PIPELINE_STATS,
            "unknown file kind");
    const std::string summary =
        stepeval::ValidateFile(path, static_cast<stepeval::FileKind>(kind),
                          context ? &context->items : nullptr);
    if (diagnostics_json) *diagnostics_json = Dup(summary);
  });
}

// -- primitives ---------------------------------------------------------------

stepeval_status stepeval_levenshtein_distance(const char *a, const char *b, size_t *out) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = stepeval::LevenshteinDistance(std::string_view(a), std::string_view(b));
  });
}

stepeval_status stepeval_phrase_similarity(const char *a, const char *b, int case_fold,
                                 double *out) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    stepeval::SimilarityOptions options;
    options.case_fold = case_fold != 0;
    *out = stepeval::PhraseSimilarity(a, b, options);
  });
}

stepeval_status stepeval_best_alignment(const double *matrix, size_t rows, size_t cols,
                              size_t *pairs, size_t *pair_count,
                              double *score) {
  return Guard([&] {
    Require(rows == 0 || cols == 0 || matrix != nullptr, "null matrix");
    std::vector<double> values;
    if (rows > 0 && cols > 0) values.assign(matrix, matrix + rows * cols);
    const auto m = stepeval::ScoreMatrix::FromValues(rows, cols, std::move(values));
    const stepeval::AlignmentResult result = stepeval::BestAlignment(m);
    if (pairs != nullptr) {
      for (std::size_t i = 0; i < result.alignment.pairs.size(); ++i) {
        pairs[2 * i] = result.alignment.pairs[i].first;
        pairs[2 * i + 1] = result.alignment.pairs[i].second;
      }
    }
    if (pair_count) *pair_count = result.alignment.size();
    if (score) *score = result.score;
  });
}

stepeval_status stepeval_krippendorff_alpha(const int *labels, size_t units,
                                  size_t raters, double *alpha) {
  return Guard([&] {
    Require(alpha != nullptr, "null output pointer");
    Require(units * raters == 0 || labels != nullptr, "null labels");
    stepeval::RatingMatrix ratings(units, std::vector<std::optional<int>>(raters));
    for (std::size_t u = 0; u < units; ++u) {
      for (std::size_t r = 0; r < raters; ++r) {
        const int v = labels[u * raters + r];
        if (v >= 0) ratings[u][r] = v;
      }
    }
    *alpha = stepeval::KrippendorffAlpha(ratings);
  });
}

}  // extern "C"
