/*
 * Copyright 2026 The stepeval Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the derivation evaluation toolkit.
 *
 * Objects are opaque handles created by *_load / *_create / stepeval_run_* and
 * released with the matching *_destroy. Every fallible call returns an
 * stepeval_status; on failure the calling thread's last error (message, locus and
 * a JSON error object) is available through stepeval_last_error*(). Strings
 * returned through `char **` out-parameters are owned by the caller and must
 * be released with stepeval_string_free().
 *
 * Handles are immutable once built and may be shared across threads; an
 * stepeval_options handle must not be modified while another thread reads it.
 */
#ifndef STEPEVAL_STEPEVAL_H_
#define STEPEVAL_STEPEVAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(STEPEVAL_BUILDING_LIBRARY)
#define STEPEVAL_API __declspec(dllexport)
#else
#define STEPEVAL_API __declspec(dllimport)
#endif
#else
#define STEPEVAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stepeval_status {
  STEPEVAL_OK = 0,
  STEPEVAL_ERR_INVALID_ARGUMENT = 1,
  STEPEVAL_ERR_IO = 2,
  STEPEVAL_ERR_PARSE = 3,
  STEPEVAL_ERR_SCHEMA = 4,
  STEPEVAL_ERR_DUPLICATE_ID = 5,
  STEPEVAL_ERR_EMPTY_DERIVATION = 6,
  STEPEVAL_ERR_EMPTY_FIELD = 7,
  STEPEVAL_ERR_PROVENANCE_OUT_OF_BOUNDS = 8,
  STEPEVAL_ERR_UNKNOWN_ID = 9,
  STEPEVAL_ERR_MISSING_PREDICTION = 10,
  STEPEVAL_ERR_MISSING_VOTE = 11,
  STEPEVAL_ERR_NO_JUDGEMENTS = 12,
  STEPEVAL_ERR_MISSING_ANNOTATIONS = 13,
  STEPEVAL_ERR_MISSING_LOCUS_COMMENT = 14,
  STEPEVAL_ERR_INSUFFICIENT_DATA = 15,
  STEPEVAL_ERR_BAD_K = 16,
  STEPEVAL_ERR_SIZE_LIMIT_EXCEEDED = 17,
  STEPEVAL_ERR_INDEX_OUT_OF_BOUNDS = 18,
  STEPEVAL_ERR_DUPLICATE_INDEX = 19,
  STEPEVAL_ERR_EMPTY_MATRIX = 20,
  STEPEVAL_ERR_EMPTY_REFERENCE_SET = 21,
  STEPEVAL_ERR_INTERNAL = 99
} stepeval_status;

/* Scorer selection bits. */
enum {
  STEPEVAL_SCORER_ENTITY = 1u << 0,
  STEPEVAL_SCORER_RELATION = 1u << 1,
  STEPEVAL_SCORER_FULL = 1u << 2,
  STEPEVAL_SCORER_ALL = 7u
};

typedef enum stepeval_scorer {
  STEPEVAL_ENTITY = 0,
  STEPEVAL_RELATION = 1,
  STEPEVAL_FULL = 2
} stepeval_scorer;

typedef enum stepeval_gstar_policy {
  STEPEVAL_GSTAR_ALIGNMENT_SCORE = 0,
  STEPEVAL_GSTAR_F1 = 1
} stepeval_gstar_policy;

typedef enum stepeval_aggregate {
  STEPEVAL_AGGREGATE_MACRO = 0,
  STEPEVAL_AGGREGATE_MICRO = 1
} stepeval_aggregate;

typedef enum stepeval_retain_policy {
  STEPEVAL_RETAIN_EXACTLY_THREE = 0,
  STEPEVAL_RETAIN_SAMPLE_THREE = 1
} stepeval_retain_policy;

typedef enum stepeval_core_span {
  STEPEVAL_CORE_SPAN_SUBTREE = 0,
  STEPEVAL_CORE_SPAN_TOKEN = 1
} stepeval_core_span;

typedef enum stepeval_ablation_policy {
  STEPEVAL_ABLATION_PREFIX = 0,
  STEPEVAL_ABLATION_ALL_SUBSETS_MEAN = 1
} stepeval_ablation_policy;

typedef enum stepeval_baseline {
  STEPEVAL_BASELINE_IE = 0,
  STEPEVAL_BASELINE_CORE = 1
} stepeval_baseline;

typedef enum stepeval_file_kind {
  STEPEVAL_FILE_AUTO = 0,
  STEPEVAL_FILE_INSTANCES = 1,
  STEPEVAL_FILE_REFERENCES = 2,
  STEPEVAL_FILE_PREDICTIONS = 3,
  STEPEVAL_FILE_PARSES = 4,
  STEPEVAL_FILE_SUBMISSIONS = 5,
  STEPEVAL_FILE_JUDGEMENTS = 6,
  STEPEVAL_FILE_REPORT = 7,
  STEPEVAL_FILE_TSV_REPORT = 8,
  STEPEVAL_FILE_MANIFEST = 9,
  STEPEVAL_FILE_PIPELINE_STATS = 10
} stepeval_file_kind;

/* Perturbation bits for stepeval_synth; instances cycle through the set bits in
 * this order. */
enum {
  STEPEVAL_PERTURB_NONE = 1u << 0,
  STEPEVAL_PERTURB_DROP_STEP = 1u << 1,
  STEPEVAL_PERTURB_RELATION_EDIT = 1u << 2,
  STEPEVAL_PERTURB_PHRASE_NOISE = 1u << 3
};

typedef struct stepeval_options stepeval_options;
typedef struct stepeval_instances stepeval_instances;
typedef struct stepeval_derivations stepeval_derivations;
typedef struct stepeval_annotations stepeval_annotations;
typedef struct stepeval_report stepeval_report;

/* -- errors and strings -------------------------------------------------- */

STEPEVAL_API const char *stepeval_version(void);
STEPEVAL_API const char *stepeval_status_name(stepeval_status status);
/* Nonzero when the status reflects bad input rather than a library fault. */
STEPEVAL_API int stepeval_status_is_input_error(stepeval_status status);
STEPEVAL_API const char *stepeval_last_error_message(void);
STEPEVAL_API const char *stepeval_last_error_locus(void);
/* {"error": {"code": ..., "message": ..., "locus": ...}} */
STEPEVAL_API const char *stepeval_last_error_json(void);
STEPEVAL_API void stepeval_string_free(char *s);

/* -- options ------------------------------------------------------------- */

STEPEVAL_API stepeval_status stepeval_options_create(stepeval_options **out);
STEPEVAL_API void stepeval_options_destroy(stepeval_options *opts);
STEPEVAL_API stepeval_status stepeval_options_set_scorers(stepeval_options *opts, unsigned mask);
STEPEVAL_API stepeval_status stepeval_options_set_case_fold(stepeval_options *opts, int enabled);
STEPEVAL_API stepeval_status stepeval_options_set_gstar_policy(stepeval_options *opts,
                                                stepeval_gstar_policy policy);
STEPEVAL_API stepeval_status stepeval_options_set_aggregate(stepeval_options *opts,
                                             stepeval_aggregate aggregate);
STEPEVAL_API stepeval_status stepeval_options_set_strict(stepeval_options *opts, int strict);
/* k == 0 removes the limit. */
STEPEVAL_API stepeval_status stepeval_options_set_reference_limit(stepeval_options *opts,
                                                   size_t k,
                                                   stepeval_ablation_policy policy);
/* 0 selects the hardware concurrency. */
STEPEVAL_API stepeval_status stepeval_options_set_threads(stepeval_options *opts,
                                           unsigned threads);
STEPEVAL_API stepeval_status stepeval_options_set_retain_policy(stepeval_options *opts,
                                                 stepeval_retain_policy policy,
                                                 uint64_t seed);
STEPEVAL_API stepeval_status stepeval_options_set_core_span(stepeval_options *opts,
                                             stepeval_core_span span);
STEPEVAL_API stepeval_status stepeval_options_set_sf_only(stepeval_options *opts, int sf_only);
STEPEVAL_API stepeval_status stepeval_options_set_fallback(stepeval_options *opts, int fallback);

/* -- data files ---------------------------------------------------------- */

STEPEVAL_API stepeval_status stepeval_instances_load(const char *path, stepeval_instances **out);
STEPEVAL_API size_t stepeval_instances_count(const stepeval_instances *instances);
STEPEVAL_API void stepeval_instances_destroy(stepeval_instances *instances);

/* `context` may be NULL; when given, provenance is bounds-checked. */
STEPEVAL_API stepeval_status stepeval_derivations_load(const char *path, stepeval_file_kind kind,
                                        const stepeval_instances *context,
                                        stepeval_derivations **out);
STEPEVAL_API stepeval_status stepeval_derivations_parse(const char *json, size_t length,
                                         stepeval_file_kind kind,
                                         stepeval_derivations **out);
STEPEVAL_API size_t stepeval_derivations_count(const stepeval_derivations *set);
STEPEVAL_API size_t stepeval_derivations_warning_count(const stepeval_derivations *set);
/* Borrowed pointer, valid while `set` lives. */
STEPEVAL_API const char *stepeval_derivations_warning(const stepeval_derivations *set,
                                            size_t index);
STEPEVAL_API stepeval_status stepeval_derivations_to_json(const stepeval_derivations *set,
                                           char **out);
STEPEVAL_API stepeval_status stepeval_derivations_write(const stepeval_derivations *set,
                                         const char *path);
/* {"2": n, "3": n, ">=4": n, "<2": n, "total": n, "exact": {...}} */
STEPEVAL_API stepeval_status stepeval_derivations_histogram_json(const stepeval_derivations *set,
                                                  char **out);
STEPEVAL_API void stepeval_derivations_destroy(stepeval_derivations *set);

STEPEVAL_API stepeval_status stepeval_annotations_load(const char *path,
                                        stepeval_annotations **out);
STEPEVAL_API size_t stepeval_annotations_sentence_count(const stepeval_annotations *a);
STEPEVAL_API void stepeval_annotations_destroy(stepeval_annotations *a);

/* -- evaluation ---------------------------------------------------------- */

STEPEVAL_API stepeval_status stepeval_evaluate(const stepeval_derivations *references,
                                const stepeval_derivations *predictions,
                                const stepeval_options *opts, stepeval_report **out);
STEPEVAL_API stepeval_status stepeval_report_get(const stepeval_report *report, stepeval_scorer scorer,
                                  double *precision, double *recall,
                                  double *f1);
STEPEVAL_API size_t stepeval_report_instance_count(const stepeval_report *report);
STEPEVAL_API size_t stepeval_report_missing_count(const stepeval_report *report);
STEPEVAL_API stepeval_status stepeval_report_to_json(const stepeval_report *report,
                                      int include_details, char **out);
STEPEVAL_API stepeval_status stepeval_report_to_tsv(const stepeval_report *report, char **out);
STEPEVAL_API void stepeval_report_destroy(stepeval_report *report);

/* -- baselines, pipeline, synth ------------------------------------------ */

/* `annotations` may be NULL when the fallback annotator is enabled.
 * `warnings_json` (may be NULL) receives a JSON array of strings. Instances
 * for which the baseline produces nothing are omitted from the output. */
STEPEVAL_API stepeval_status stepeval_run_baseline(const stepeval_instances *instances,
                                    const stepeval_annotations *annotations,
                                    stepeval_baseline which,
                                    const stepeval_options *opts,
                                    stepeval_derivations **out,
                                    char **warnings_json);

/* Submission filtering, majority vote, answerability filtering and
 * agreement. `stats_json` receives the filter counts and agreement report. */
STEPEVAL_API stepeval_status stepeval_run_pipeline(const char *submissions_path,
                                    const char *judgements_path,
                                    const stepeval_options *opts,
                                    stepeval_derivations **retained,
                                    char **stats_json);

/* Majority votes, label distribution and Krippendorff's alpha for a
 * judgements file; alpha is null when fewer than two units are pairable. */
STEPEVAL_API stepeval_status stepeval_agreement(const char *judgements_path,
                                 char **report_json);

STEPEVAL_API stepeval_status stepeval_synth(uint64_t seed, size_t instances,
                             size_t references, unsigned perturbation_mask,
                             stepeval_derivations **references_out,
                             stepeval_derivations **predictions_out,
                             char **manifest_json);

/* Validates any supported file. `diagnostics_json` receives a summary on
 * success; on failure the last error describes the first problem. */
STEPEVAL_API stepeval_status stepeval_validate_file(const char *path, stepeval_file_kind kind,
                                     const stepeval_instances *context,
                                     char **diagnostics_json);

/* -- primitives ---------------------------------------------------------- */

STEPEVAL_API stepeval_status stepeval_levenshtein_distance(const char *a, const char *b,
                                            size_t *out);
STEPEVAL_API stepeval_status stepeval_phrase_similarity(const char *a, const char *b,
                                         int case_fold, double *out);
/* `matrix` is row-major rows x cols with entries in [0, 1]. `pairs` must
 * hold 2 * min(rows, cols) entries; pairs are written as (d, g) sequences. */
STEPEVAL_API stepeval_status stepeval_best_alignment(const double *matrix, size_t rows,
                                      size_t cols, size_t *pairs,
                                      size_t *pair_count, double *score);
/* `labels` is units x raters, row-major; negative entries mark missing
 * ratings. */
STEPEVAL_API stepeval_status stepeval_krippendorff_alpha(const int *labels, size_t units,
                                          size_t raters, double *alpha);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* STEPEVAL_STEPEVAL_H_ */
