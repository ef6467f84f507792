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

#include "stepeval/validate.h"

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "json_util.h"
#include "stepeval/baselines.h"
#include "stepeval/corpus.h"
#include "stepeval/error.h"

namespace stepeval {
namespace {

using internal::Json;
using internal::SchemaError;

bool EndsWith(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void CheckUnit(const Json &v, const std::string &source,
               const std::string &pointer) {
  if (!v.is_number()) SchemaError(source, pointer, "expected a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) {
    SchemaError(source, pointer, "value outside [0, 1]");
  }
}

void CheckCount(const Json &v, const std::string &source,
                const std::string &pointer) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    SchemaError(source, pointer, "expected a non-negative integer");
  }
}

void CheckPrf(const Json &obj, const std::string &source,
              const std::string &pointer) {
  if (!obj.is_object()) SchemaError(source, pointer, "expected an object");
  for (const char *m : {"precision", "recall", "f1"}) {
    CheckUnit(internal::Field(obj, m, source, pointer), source,
              pointer + "/" + m);
  }
}

Json CheckReport(const Json &doc, const std::string &source) {
  if (!doc.is_object()) SchemaError(source, "", "expected an object");
  const std::string aggregate = internal::StringField(doc, "aggregate", source, "");
  if (aggregate != "macro" && aggregate != "micro") {
    SchemaError(source, "/aggregate", "expected \"macro\" or \"micro\"");
  }
  const Json &scorers = internal::Field(doc, "scorers", source, "");
  if (!scorers.is_object() || scorers.empty()) {
    SchemaError(source, "/scorers", "expected a non-empty object");
  }
  for (const auto &[name, prf] : scorers.items()) {
    if (!ParseScorerName(name)) {
      SchemaError(source, "/scorers/" + name, "unknown scorer");
    }
    CheckPrf(prf, source, "/scorers/" + name);
  }
  CheckCount(internal::Field(doc, "instances", source, ""), source, "/instances");
  if (doc.contains("details")) {
    const Json &details = doc["details"];
    if (!details.is_array()) SchemaError(source, "/details", "expected an array");
    for (std::size_t i = 0; i < details.size(); ++i) {
      const std::string p = "/details/" + std::to_string(i);
      internal::StringField(details[i], "id", source, p);
      const Json &scores = internal::Field(details[i], "scores", source, p);
      if (!scores.is_object()) SchemaError(source, p + "/scores", "expected an object");
      for (const auto &[name, s] : scores.items()) {
        CheckPrf(s, source, p + "/scores/" + name);
      }
    }
  }
  return Json{{"scorers", scorers.size()}, {"aggregate", aggregate}};
}

Json CheckManifest(const Json &doc, const std::string &source) {
  if (!doc.is_object()) SchemaError(source, "", "expected an object");
  CheckCount(internal::Field(doc, "seed", source, ""), source, "/seed");
  const Json &list = internal::Field(doc, "expectations", source, "");
  if (!list.is_array()) SchemaError(source, "/expectations", "expected an array");
  static const std::set<std::string> kMetrics = {"precision", "recall", "f1"};
  static const std::set<std::string> kRelations = {"eq1", "lt1", "le1"};
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = "/expectations/" + std::to_string(i);
    ids.insert(internal::StringField(list[i], "id", source, p));
    if (!ParseScorerName(internal::StringField(list[i], "scorer", source, p))) {
      SchemaError(source, p + "/scorer", "unknown scorer");
    }
    if (!kMetrics.count(internal::StringField(list[i], "metric", source, p))) {
      SchemaError(source, p + "/metric", "unknown metric");
    }
    if (!kRelations.count(internal::StringField(list[i], "expect", source, p))) {
      SchemaError(source, p + "/expect", "expected eq1, lt1 or le1");
    }
  }
  return Json{{"expectations", list.size()}, {"instances", ids.size()}};
}

Json CheckPipelineStats(const Json &doc, const std::string &source) {
  if (!doc.is_object()) SchemaError(source, "", "expected an object");
  const Json &filter = internal::Field(doc, "filter", source, "");
  if (!filter.is_object()) SchemaError(source, "/filter", "expected an object");
  for (const char *k : {"submissions", "questions", "wrong", "neither",
                        "not_three", "non_yes", "retained"}) {
    CheckCount(internal::Field(filter, k, source, "/filter"), source,
               std::string("/filter/") + k);
  }
  const Json &agreement = internal::Field(doc, "agreement", source, "");
  if (!agreement.is_object()) {
    SchemaError(source, "/agreement", "expected an object");
  }
  const Json &alpha = internal::Field(agreement, "alpha", source, "/agreement");
  if (!alpha.is_null() && !alpha.is_number()) {
    SchemaError(source, "/agreement/alpha", "expected a number or null");
  }
  return Json{{"retained", filter["retained"]}};
}

Json CheckTsvReport(const std::string &text, const std::string &source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string locus = source + ":" + std::to_string(line_no);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) {
      throw Error(ErrorCode::kParse, "expected 4 tab-separated fields", locus);
    }
    if (!ParseScorerName(fields[0])) {
      throw Error(ErrorCode::kSchemaViolation,
                  "unknown scorer \"" + fields[0] + "\"", locus);
    }
    if (!seen.insert(fields[0]).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "scorer \"" + fields[0] + "\" listed twice", locus);
    }
    for (std::size_t i = 1; i < 4; ++i) {
      char *end = nullptr;
      const double x = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || *end != '\0') {
        throw Error(ErrorCode::kParse, "not a number: \"" + fields[i] + "\"",
                    locus);
      }
      if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorCode::kSchemaViolation, "value outside [0, 1]", locus);
      }
    }
  }
  if (seen.empty()) {
    throw Error(ErrorCode::kSchemaViolation, "no scorer rows", source);
  }
  return Json{{"scorers", seen.size()}};
}

}  // namespace

std::string_view FileKindName(FileKind kind) {
  switch (kind) {
    case FileKind::kAuto: return "auto";
    case FileKind::kInstances: return "instances";
    case FileKind::kReferences: return "references";
    case FileKind::kPredictions: return "predictions";
    case FileKind::kParses: return "parses";
    case FileKind::kSubmissions: return "submissions";
    case FileKind::kJudgements: return "judgements";
    case FileKind::kReport: return "report";
    case FileKind::kTsvReport: return "tsv-report";
    case FileKind::kManifest: return "manifest";
    case FileKind::kPipelineStats: return "pipeline-stats";
  }
  return "auto";
}

FileKind DetectFileKind(const std::string &path, std::string_view contents) {
  if (EndsWith(path, ".conllu") || EndsWith(path, ".conll") ||
      EndsWith(path, ".parse")) {
    return FileKind::kParses;
  }
  if (EndsWith(path, ".tsv")) return FileKind::kTsvReport;
  const Json doc = internal::ParseJson(contents, path);
  if (doc.is_array()) {
    if (doc.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot tell the kind of an empty array; pass --kind", path);
    }
    const Json &first = doc.front();
    if (first.is_object()) {
      if (first.contains("articles")) return FileKind::kInstances;
      if (first.contains("label")) return FileKind::kJudgements;
      if (first.contains("derivation")) return FileKind::kSubmissions;
    }
  } else if (doc.is_object()) {
    if (doc.contains("expectations")) return FileKind::kManifest;
    if (doc.contains("filter") && doc.contains("agreement")) {
      return FileKind::kPipelineStats;
    }
    if (doc.contains("aggregate") && doc.contains("scorers")) {
      return FileKind::kReport;
    }
    bool single = !doc.empty();
    for (const auto &[id, v] : doc.items()) {
      if (!v.is_array()) {
        single = false;
        break;
      }
      if (v.size() != 1) single = false;
    }
    return single ? FileKind::kPredictions : FileKind::kReferences;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unrecognized file contents; pass --kind", path);
}

std::string ValidateFile(const std::string &path, FileKind kind,
                         const std::vector<Instance> *context) {
  const std::string text = ReadFile(path);
  if (kind == FileKind::kAuto) kind = DetectFileKind(path, text);
  Json out = Json::object();
  out["path"] = path;
  out["kind"] = std::string(FileKindName(kind));
  out["valid"] = true;
  Json warnings = Json::array();
  switch (kind) {
    case FileKind::kAuto:
      break;
    case FileKind::kInstances: {
      const auto instances = ParseInstances(text, path);
      std::size_t flagged = 0;
      std::size_t sentences = 0;
      for (const auto &inst : instances) {
        if (inst.supporting_fact_flags) ++flagged;
        for (const auto &a : inst.articles) sentences += a.sentences.size();
      }
      out["entries"] = instances.size();
      out["with_sf_flags"] = flagged;
      out["sentences"] = sentences;
      break;
    }
    case FileKind::kReferences:
    case FileKind::kPredictions: {
      const DerivationSet set = ParseDerivations(
          text,
          kind == FileKind::kReferences ? DerivationFileKind::kReferences
                                        : DerivationFileKind::kPredictions,
          path, context);
      for (const auto &w : set.warnings) warnings.push_back(w);
      out["entries"] = set.size();
      out["histogram"] = Json::parse(
          HistogramToJson(DerivationStepCountHistogram(ReferenceSets(set))));
      break;
    }
    case FileKind::kParses: {
      const AnnotationIndex index = ParseAnnotations(text, path);
      std::size_t sentences = 0;
      for (const auto &[id, doc] : index) sentences += doc.size();
      out["documents"] = index.size();
      out["sentences"] = sentences;
      break;
    }
    case FileKind::kSubmissions: {
      const auto subs = ParseSubmissions(text, path);
      std::set<std::string> questions;
      for (const auto &s : subs) questions.insert(s.question_id);
      out["entries"] = subs.size();
      out["questions"] = questions.size();
      break;
    }
    case FileKind::kJudgements: {
      const auto judgements = ParseJudgements(text, path);
      JudgementMatrix(judgements);
      out["entries"] = judgements.size();
      out["questions"] = MajorityVotes(judgements).size();
      break;
    }
    case FileKind::kReport:
      out["summary"] = CheckReport(internal::ParseJson(text, path), path);
      break;
    case FileKind::kTsvReport:
      out["summary"] = CheckTsvReport(text, path);
      break;
    case FileKind::kManifest:
      out["summary"] = CheckManifest(internal::ParseJson(text, path), path);
      break;
    case FileKind::kPipelineStats:
      out["summary"] = CheckPipelineStats(internal::ParseJson(text, path), path);
      break;
  }
  out["warnings"] = std::move(warnings);
  return out.dump(2) + "\n";
}

}  // namespace stepeval
