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

#ifndef STEPEVAL_ERROR_H_
#define STEPEVAL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stepeval {

// Failure categories raised by the core library. The C API maps each one onto
// an stepeval_status value with the same name.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kSchemaViolation,
  kDuplicateId,
  kEmptyDerivation,
  kEmptyField,
  kProvenanceOutOfBounds,
  kUnknownId,
  kMissingPrediction,
  kMissingVote,
  kNoJudgements,
  kMissingAnnotations,
  kMissingLocusComment,
  kInsufficientData,
  kBadK,
  kSizeLimitExceeded,
  kIndexOutOfBounds,
  kDuplicateIndex,
  kEmptyMatrix,
  kEmptyReferenceSet,
  kInternal,
};

// Stable CamelCase name used in machine-readable error objects.
std::string_view ErrorCodeName(ErrorCode code);

// True for errors caused by bad input data rather than a library fault.
bool IsInputError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, std::string locus = {})
      : std::runtime_error(message), code_(code), locus_(std::move(locus)) {}

  ErrorCode code() const { return code_; }

  // Where the problem was found, e.g. "refs.json:12:7" or "/q1/0/3".
  const std::string &locus() const { return locus_; }

 private:
  ErrorCode code_;
  std::string locus_;
};

}  // namespace stepeval

#endif  // STEPEVAL_ERROR_H_
