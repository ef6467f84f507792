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

#ifndef STEPEVAL_VALIDATE_H_
#define STEPEVAL_VALIDATE_H_

#include <string>
#include <string_view>
#include <vector>

#include "stepeval/model.h"

namespace stepeval {

enum class FileKind {
  kAuto,
  kInstances,
  kReferences,
  kPredictions,
  kParses,
  kSubmissions,
  kJudgements,
  kReport,
  kTsvReport,
  kManifest,
  kPipelineStats,
};

std::string_view FileKindName(FileKind kind);

// Guesses the kind from the extension (.conllu, .tsv) or, for JSON, from
// the top-level shape. Throws kParse for unreadable JSON and
// kInvalidArgument when nothing matches.
FileKind DetectFileKind(const std::string &path, std::string_view contents);

// Loads and checks `path` as `kind`; returns a JSON summary
// ({"path", "kind", "valid": true, ...}). Throws the loader's error on the
// first problem.
std::string ValidateFile(const std::string &path, FileKind kind,
                         const std::vector<Instance> *context = nullptr);

}  // namespace stepeval

#endif  // STEPEVAL_VALIDATE_H_
