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

#include "stepeval/error.h"

namespace stepeval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyDerivation: return "EmptyDerivation";
    case ErrorCode::kEmptyField: return "EmptyField";
    case ErrorCode::kProvenanceOutOfBounds: return "ProvenanceOutOfBounds";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kMissingVote: return "MissingVote";
    case ErrorCode::kNoJudgements: return "NoJudgements";
    case ErrorCode::kMissingAnnotations: return "MissingAnnotations";
    case ErrorCode::kMissingLocusComment: return "MissingLocusComment";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kBadK: return "BadK";
    case ErrorCode::kSizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::kIndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kEmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "InternalError";
}

bool IsInputError(ErrorCode code) {
  return code != ErrorCode::kInternal;
}

}  // namespace stepeval
