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

#ifndef STEPEVAL_SRC_JSON_UTIL_H_
#define STEPEVAL_SRC_JSON_UTIL_H_

// Internal helpers around nlohmann::json for the loaders. Not installed.

#include <string>
#include <string_view>

#include "json.hpp"
#include "stepeval/error.h"

namespace stepeval::internal {

using Json = nlohmann::ordered_json;

// Converts a byte offset into "line:column" (both 1-based).
std::string LineColumn(std::string_view text, std::size_t byte_offset);

// Parses `text`, mapping syntax errors to kParse with a source:line:col
// locus. Duplicate keys in the top-level object raise kDuplicateId.
Json ParseJson(std::string_view text, const std::string &source);

[[noreturn]] void SchemaError(const std::string &source,
                              const std::string &pointer,
                              const std::string &message);

const Json &Field(const Json &object, const char *name,
                  const std::string &source, const std::string &pointer);

std::string StringField(const Json &object, const char *name,
                        const std::string &source, const std::string &pointer);

}  // namespace stepeval::internal

#endif  // STEPEVAL_SRC_JSON_UTIL_H_
