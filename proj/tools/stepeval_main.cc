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

// stepeval: command-line front end over the C API in stepeval/stepeval.h.
//
// Exit status: 0 on success, 2 for bad input (usage, missing files, schema
// or validation errors), 1 for internal failures. Errors are reported on
// stderr as a single-line JSON object {"error": {"code", "message", "locus"}}.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stepeval/stepeval.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

// Thrown after the error object has been printed.
struct Failure {
  int exit_code;
};

std::string ErrorJson(std::string_view code, const std::string &message,
                      const std::string &locus) {
  nlohmann::ordered_json err = {
      {"error", {{"code", code}, {"message", message}, {"locus", locus}}}};
  return err.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

[[noreturn]] void Fail(std::string_view code, const std::string &message,
                       const std::string &locus, int exit_code = kExitInput) {
  std::cerr << ErrorJson(code, message, locus) << "\n";
  throw Failure{exit_code};
}

void Check(stepeval_status status) {
  if (status == STEPEVAL_OK) return;
  std::cerr << stepeval_last_error_json() << "\n";
  throw Failure{stepeval_status_is_input_error(status) ? kExitInput : kExitInternal};
}

bool UseColor() {
  const char *no_color = std::getenv("NO_COLOR");
  if (no_color != nullptr && no_color[0] != '\0') return false;
  return isatty(STDERR_FILENO) != 0;
}

void Warn(const std::string &message) {
  if (UseColor()) {
    std::cerr << "\033[33mwarning:\033[0m " << message << "\n";
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

void RequireReadable(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("IoError", "cannot open \"" + path + "\" for reading", path);
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string &path, std::string_view contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) Fail("IoError", "cannot write \"" + path + "\"", path);
}

struct CString {
  char *ptr = nullptr;
  ~CString() { stepeval_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

template <typename T, void (*Destroy)(T *)>
struct Handle {
  T *ptr = nullptr;
  Handle() = default;
  Handle(const Handle &) = delete;
  Handle &operator=(const Handle &) = delete;
  ~Handle() { Destroy(ptr); }
};

using Options = Handle<stepeval_options, stepeval_options_destroy>;
using Instances = Handle<stepeval_instances, stepeval_instances_destroy>;
using Derivations = Handle<stepeval_derivations, stepeval_derivations_destroy>;
using Annotations = Handle<stepeval_annotations, stepeval_annotations_destroy>;
using Report = Handle<stepeval_report, stepeval_report_destroy>;

void WarnAll(const stepeval_derivations *set) {
  for (size_t i = 0; i < stepeval_derivations_warning_count(set); ++i) {
    Warn(stepeval_derivations_warning(set, i));
  }
}

unsigned ParseMask(const std::vector<std::string> &names,
                   const std::map<std::string, unsigned> &bits,
                   const char *flag) {
  unsigned mask = 0;
  for (const auto &name : names) {
    auto it = bits.find(name);
    if (it == bits.end()) {
      Fail("InvalidArgument", std::string("unknown value \"") + name +
                                  "\" for " + flag,
           flag);
    }
    mask |= it->second;
  }
  return mask;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string refs;
  std::string preds;
  std::string instances;
  std::vector<std::string> scorers{"entity", "relation", "full"};
  std::string similarity = "casefold";
  std::string gstar = "alignment";
  std::string aggregate = "macro";
  std::size_t refs_k = 0;
  std::string ablation = "prefix";
  bool strict = false;
  bool summary = false;
  unsigned threads = 1;
  std::string format = "json";
  std::string output;
};

int RunEvaluate(const EvaluateArgs &a) {
  RequireReadable(a.refs);
  RequireReadable(a.preds);
  if (!a.instances.empty()) RequireReadable(a.instances);

  Options opts;
  Check(stepeval_options_create(&opts.ptr));
  Check(stepeval_options_set_scorers(
      opts.ptr, ParseMask(a.scorers,
                          {{"entity", STEPEVAL_SCORER_ENTITY},
                           {"relation", STEPEVAL_SCORER_RELATION},
                           {"full", STEPEVAL_SCORER_FULL}},
                          "--scorers")));
  Check(stepeval_options_set_case_fold(opts.ptr, a.similarity == "casefold"));
  Check(stepeval_options_set_gstar_policy(
      opts.ptr, a.gstar == "f1" ? STEPEVAL_GSTAR_F1 : STEPEVAL_GSTAR_ALIGNMENT_SCORE));
  Check(stepeval_options_set_aggregate(opts.ptr, a.aggregate == "micro"
                                                ? STEPEVAL_AGGREGATE_MICRO
                                                : STEPEVAL_AGGREGATE_MACRO));
  Check(stepeval_options_set_strict(opts.ptr, a.strict));
  Check(stepeval_options_set_reference_limit(
      opts.ptr, a.refs_k,
      a.ablation == "all-subsets" ? STEPEVAL_ABLATION_ALL_SUBSETS_MEAN
                                  : STEPEVAL_ABLATION_PREFIX));
  Check(stepeval_options_set_threads(opts.ptr, a.threads));

  Instances context;
  if (!a.instances.empty()) {
    Check(stepeval_instances_load(a.instances.c_str(), &context.ptr));
  }
  Derivations refs;
  Derivations preds;
  Check(stepeval_derivations_load(a.refs.c_str(), STEPEVAL_FILE_REFERENCES, context.ptr,
                             &refs.ptr));
  WarnAll(refs.ptr);
  Check(stepeval_derivations_load(a.preds.c_str(), STEPEVAL_FILE_PREDICTIONS,
                             context.ptr, &preds.ptr));
  WarnAll(preds.ptr);

  Report report;
  Check(stepeval_evaluate(refs.ptr, preds.ptr, opts.ptr, &report.ptr));
  if (stepeval_report_missing_count(report.ptr) > 0) {
    Warn(std::to_string(stepeval_report_missing_count(report.ptr)) +
         " reference id(s) without a prediction scored as zero");
  }
  CString text;
  if (a.format == "tsv") {
    Check(stepeval_report_to_tsv(report.ptr, &text.ptr));
  } else {
    Check(stepeval_report_to_json(report.ptr, !a.summary, &text.ptr));
  }
  Emit(a.output, text.str());
  return kExitOk;
}

struct BaselineArgs {
  std::string which;
  std::string instances;
  std::string parses;
  bool fallback = false;
  bool sf_only = true;
  std::string core_span = "subtree";
  std::string output;
};

int RunBaseline(const BaselineArgs &a) {
  RequireReadable(a.instances);
  if (!a.parses.empty()) RequireReadable(a.parses);
  if (a.parses.empty() && !a.fallback) {
    Fail("MissingAnnotations",
         "no parse file given; pass --parses or --fallback", "--parses");
  }
  Options opts;
  Check(stepeval_options_create(&opts.ptr));
  Check(stepeval_options_set_fallback(opts.ptr, a.fallback));
  Check(stepeval_options_set_sf_only(opts.ptr, a.sf_only));
  Check(stepeval_options_set_core_span(opts.ptr, a.core_span == "token"
                                                ? STEPEVAL_CORE_SPAN_TOKEN
                                                : STEPEVAL_CORE_SPAN_SUBTREE));
  Instances instances;
  Check(stepeval_instances_load(a.instances.c_str(), &instances.ptr));
  Annotations parses;
  if (!a.parses.empty()) {
    Check(stepeval_annotations_load(a.parses.c_str(), &parses.ptr));
  }
  Derivations out;
  CString warnings;
  Check(stepeval_run_baseline(instances.ptr, parses.ptr,
                         a.which == "core" ? STEPEVAL_BASELINE_CORE
                                           : STEPEVAL_BASELINE_IE,
                         opts.ptr, &out.ptr, &warnings.ptr));
  WarnAll(out.ptr);
  CString text;
  Check(stepeval_derivations_to_json(out.ptr, &text.ptr));
  Emit(a.output, text.str());
  return kExitOk;
}

struct PipelineArgs {
  std::string submissions;
  std::string judgements;
  std::string retain_policy = "exactly3";
  std::uint64_t seed = 0;
  std::string output;
  std::string stats;
};

int RunPipeline(const PipelineArgs &a) {
  RequireReadable(a.submissions);
  RequireReadable(a.judgements);
  Options opts;
  Check(stepeval_options_create(&opts.ptr));
  Check(stepeval_options_set_retain_policy(
      opts.ptr,
      a.retain_policy == "sample3" ? STEPEVAL_RETAIN_SAMPLE_THREE
                                   : STEPEVAL_RETAIN_EXACTLY_THREE,
      a.seed));
  Derivations retained;
  CString stats;
  Check(stepeval_run_pipeline(a.submissions.c_str(), a.judgements.c_str(),
                         opts.ptr, &retained.ptr, &stats.ptr));
  if (stepeval_derivations_count(retained.ptr) == 0) {
    Warn("no reference sets retained");
  }
  CString text;
  Check(stepeval_derivations_to_json(retained.ptr, &text.ptr));
  Emit(a.output, text.str());
  if (a.stats.empty()) {
    std::cerr << stats.str();
  } else {
    Emit(a.stats, stats.str());
  }
  return kExitOk;
}

int RunAgreement(const std::string &judgements, const std::string &output) {
  RequireReadable(judgements);
  CString text;
  Check(stepeval_agreement(judgements.c_str(), &text.ptr));
  Emit(output, text.str());
  return kExitOk;
}

int RunValidate(const std::string &path, const std::string &kind,
                const std::string &instances, const std::string &output) {
  RequireReadable(path);
  static const std::map<std::string, stepeval_file_kind> kKinds = {
      {"auto", STEPEVAL_FILE_AUTO},
      {"instances", STEPEVAL_FILE_INSTANCES},
      {"references", STEPEVAL_FILE_REFERENCES},
      {"predictions", STEPEVAL_FILE_PREDICTIONS},
      {"parses", STEPEVAL_FILE_PARSES},
      {"submissions", STEPEVAL_FILE_SUBMISSIONS},
      {"judgements", STEPEVAL_FILE_JUDGEMENTS},
      {"report", STEPEVAL_FILE_REPORT},
      {"tsv-report", STEPEVAL_FILE_TSV_REPORT},
      {"manifest", STEPEVAL_FILE_MANIFEST},
      {"pipeline-stats", STEPEVAL_FILE_PIPELINE_STATS}};
  Instances context;
  if (!instances.empty()) {
    RequireReadable(instances);
    Check(stepeval_instances_load(instances.c_str(), &context.ptr));
  }
  CString diagnostics;
  Check(stepeval_validate_file(path.c_str(), kKinds.at(kind), context.ptr,
                          &diagnostics.ptr));
  Emit(output, diagnostics.str());
  return kExitOk;
}

struct SynthArgs {
  std::uint64_t seed = 0;
  std::size_t instances = 10;
  std::size_t references = 3;
  std::vector<std::string> perturbations{"none"};
  std::string refs_out;
  std::string preds_out;
  std::string manifest;
};

int RunSynth(const SynthArgs &a) {
  const unsigned mask =
      ParseMask(a.perturbations,
                {{"none", STEPEVAL_PERTURB_NONE},
                 {"drop-step", STEPEVAL_PERTURB_DROP_STEP},
                 {"relation-edit", STEPEVAL_PERTURB_RELATION_EDIT},
                 {"phrase-noise", STEPEVAL_PERTURB_PHRASE_NOISE}},
                "--perturb");
  Derivations refs;
  Derivations preds;
  CString manifest;
  Check(stepeval_synth(a.seed, a.instances, a.references, mask, &refs.ptr,
                  &preds.ptr, &manifest.ptr));
  CString refs_text;
  CString preds_text;
  Check(stepeval_derivations_to_json(refs.ptr, &refs_text.ptr));
  Check(stepeval_derivations_to_json(preds.ptr, &preds_text.ptr));
  Emit(a.refs_out, refs_text.str());
  Emit(a.preds_out, preds_text.str());
  Emit(a.manifest, manifest.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Evaluation toolkit for step-wise explanation derivations"};
  app.set_version_flag("--version", std::string(stepeval_version()));
  app.require_subcommand(1);

  EvaluateArgs eval;
  auto *evaluate = app.add_subcommand(
      "evaluate", "Score predicted derivations against reference sets");
  evaluate->add_option("references", eval.refs, "Reference derivation file")
      ->required();
  evaluate->add_option("predictions", eval.preds, "Prediction file")
      ->required();
  evaluate->add_option("--instances", eval.instances,
                       "Instances file; enables provenance bounds checks");
  evaluate
      ->add_option("--scorers", eval.scorers,
                   "Comma-separated subset of entity,relation,full")
      ->delimiter(',')
      ->capture_default_str();
  evaluate
      ->add_option(
          "--similarity", eval.similarity,
          "Phrase similarity. Both choices are character-level Levenshtein "
          "distance over Unicode code points divided by the longer length "
          "(1 - d / max(|a|, |b|); two empty phrases score 1) on "
          "whitespace-normalized text. casefold: simple case folding first; "
          "exact: compare as written")
      ->check(CLI::IsMember({"casefold", "exact"}))
      ->capture_default_str();
  evaluate
      ->add_option("--gstar-policy", eval.gstar,
                   "Reference choice: alignment (highest c, then f1, then "
                   "first) or f1 (highest f1, then c, then first)")
      ->check(CLI::IsMember({"alignment", "f1"}))
      ->capture_default_str();
  evaluate
      ->add_option("--aggregate", eval.aggregate,
                   "macro: mean of per-instance scores; micro: pooled "
                   "alignment sums over pooled step counts")
      ->check(CLI::IsMember({"macro", "micro"}))
      ->capture_default_str();
  evaluate
      ->add_option("--refs-k", eval.refs_k,
                   "Use only k references per instance (0 = all)")
      ->capture_default_str();
  evaluate
      ->add_option("--ablation", eval.ablation,
                   "With --refs-k: prefix (first k) or all-subsets (mean "
                   "over every k-subset; macro only)")
      ->check(CLI::IsMember({"prefix", "all-subsets"}))
      ->capture_default_str();
  evaluate->add_flag("--strict", eval.strict,
                     "Fail on a reference id without a prediction instead "
                     "of scoring it zero");
  evaluate->add_flag("--summary", eval.summary,
                     "Omit per-instance details from JSON output");
  evaluate
      ->add_option("--threads", eval.threads,
                   "Worker threads (0 = all cores); output does not depend "
                   "on it")
      ->capture_default_str();
  evaluate->add_option("--format", eval.format, "Output format")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  evaluate->add_option("-o,--output", eval.output,
                       "Output file (default stdout)");

  BaselineArgs base;
  auto *baseline = app.add_subcommand(
      "baseline", "Run a heuristic derivation baseline over instances");
  baseline->add_option("which", base.which, "ie or core")
      ->required()
      ->check(CLI::IsMember({"ie", "core"}));
  baseline->add_option("instances", base.instances, "Instances file")
      ->required();
  baseline->add_option("--parses", base.parses, "Dependency parse file");
  baseline->add_flag("--fallback", base.fallback,
                     "Annotate sentences without a parse with a crude "
                     "built-in tagger instead of failing");
  baseline
      ->add_option("--sf-only", base.sf_only,
                   "ie: only read supporting-fact sentences")
      ->capture_default_str();
  baseline
      ->add_option("--core-span", base.core_span,
                   "core: tail is the root's first right dependent token or "
                   "its subtree")
      ->check(CLI::IsMember({"token", "subtree"}))
      ->capture_default_str();
  baseline->add_option("-o,--output", base.output,
                       "Prediction file to write (default stdout)");

  PipelineArgs pipe;
  auto *pipeline = app.add_subcommand(
      "pipeline",
      "Filter crowd submissions into reference sets and report agreement");
  pipeline->add_option("submissions", pipe.submissions, "Submissions file")
      ->required();
  pipeline->add_option("judgements", pipe.judgements, "Judgements file")
      ->required();
  pipeline
      ->add_option("--retain-policy", pipe.retain_policy,
                   "exactly3: keep questions with exactly three correct "
                   "submissions; sample3: also sample three from larger "
                   "groups")
      ->check(CLI::IsMember({"exactly3", "sample3"}))
      ->capture_default_str();
  pipeline->add_option("--seed", pipe.seed, "Seed for sample3")
      ->capture_default_str();
  pipeline->add_option("-o,--output", pipe.output,
                       "Retained reference file (default stdout)");
  pipeline->add_option("--stats", pipe.stats,
                       "Filter counts and agreement JSON (default stderr)");

  std::string agreement_in;
  std::string agreement_out;
  auto *agreement = app.add_subcommand(
      "agreement", "Majority votes and Krippendorff's alpha for judgements");
  agreement->add_option("judgements", agreement_in, "Judgements file")
      ->required();
  agreement->add_option("-o,--output", agreement_out,
                        "Output file (default stdout)");

  std::string validate_in;
  std::string validate_kind = "auto";
  std::string validate_instances;
  std::string validate_out;
  auto *validate = app.add_subcommand("validate", "Check any data file");
  validate->add_option("file", validate_in, "File to check")->required();
  validate
      ->add_option("--kind", validate_kind,
                   "File kind; auto guesses from extension and shape")
      ->check(CLI::IsMember({"auto", "instances", "references", "predictions",
                             "parses", "submissions", "judgements", "report",
                             "tsv-report", "manifest", "pipeline-stats"}))
      ->capture_default_str();
  validate->add_option("--instances", validate_instances,
                       "Instances file for provenance bounds checks");
  validate->add_option("-o,--output", validate_out,
                       "Diagnostics file (default stdout)");

  SynthArgs syn;
  auto *synth = app.add_subcommand(
      "synth", "Generate seeded synthetic references and perturbed predictions");
  synth->add_option("--seed", syn.seed, "RNG seed")->required();
  synth->add_option("--instances", syn.instances, "Number of instances")
      ->capture_default_str();
  synth->add_option("--references", syn.references,
                    "References per instance")
      ->capture_default_str();
  synth
      ->add_option("--perturb", syn.perturbations,
                   "Comma-separated perturbations cycled over instances: "
                   "none, drop-step, relation-edit, phrase-noise")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--refs-out", syn.refs_out, "Reference file to write")
      ->required();
  synth->add_option("--preds-out", syn.preds_out, "Prediction file to write")
      ->required();
  synth->add_option("--manifest", syn.manifest,
                    "Expectation manifest (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << ErrorJson("UsageError", e.what(), e.get_name()) << "\n";
    return kExitInput;
  }

  try {
    if (*evaluate) return RunEvaluate(eval);
    if (*baseline) return RunBaseline(base);
    if (*pipeline) return RunPipeline(pipe);
    if (*agreement) return RunAgreement(agreement_in, agreement_out);
    if (*validate) {
      return RunValidate(validate_in, validate_kind, validate_instances,
                         validate_out);
    }
    if (*synth) return RunSynth(syn);
  } catch (const Failure &f) {
    return f.exit_code;
  } catch (const std::exception &e) {
    std::cerr << ErrorJson("InternalError", e.what(), "") << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
