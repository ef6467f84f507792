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

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json_util.h"
#include "stepeval/corpus.h"
#include "stepeval/error.h"

namespace stepeval {
namespace internal {

std::string LineColumn(std::string_view text, std::size_t byte_offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte_offset, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

Json ParseJson(std::string_view text, const std::string &source) {
  std::vector<std::set<std::string>> keys;
  std::string duplicate;
  auto callback = [&](int /*depth*/, Json::parse_event_t event,
                      Json &parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        if (!keys.empty()) keys.pop_back();
        break;
      case Json::parse_event_t::key:
        if (!keys.empty() && parsed.is_string()) {
          const std::string k = parsed.get<std::string>();
          if (!keys.back().insert(k).second && duplicate.empty()) {
            duplicate = k;
          }
        }
        break;
      default:
        break;
    }
    return true;
  };
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end(), callback);
  } catch (const Json::parse_error &e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorCode::kParse,
                "malformed JSON in " + source + ": " + e.what(),
                source + ":" + LineColumn(text, at));
  }
  if (!duplicate.empty()) {
    // Point at the second spelling of the key that is followed by a colon.
    const std::string quoted = Json(duplicate).dump();
    std::string locus = source + ":" + duplicate;
    std::size_t seen = 0;
    for (std::size_t at = text.find(quoted); at != std::string_view::npos;
         at = text.find(quoted, at + 1)) {
      std::size_t k = at + quoted.size();
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < text.size() && text[k] == ':' && ++seen == 2) {
        locus = source + ":" + LineColumn(text, at);
        break;
      }
    }
    throw Error(ErrorCode::kDuplicateId,
                "key \"" + duplicate + "\" appears more than once in " +
                    source,
                locus);
  }
  return doc;
}

void SchemaError(const std::string &source, const std::string &pointer,
                 const std::string &message) {
  throw Error(ErrorCode::kSchemaViolation, source + ": " + message,
              source + ":" + (pointer.empty() ? "/" : pointer));
}

const Json &Field(const Json &object, const char *name,
                  const std::string &source, const std::string &pointer) {
  if (!object.is_object()) SchemaError(source, pointer, "expected an object");
  auto it = object.find(name);
  if (it == object.end()) {
    SchemaError(source, pointer, std::string("missing field \"") + name + "\"");
  }
  return *it;
}

std::string StringField(const Json &object, const char *name,
                        const std::string &source,
                        const std::string &pointer) {
  const Json &v = Field(object, name, source, pointer);
  if (!v.is_string()) {
    SchemaError(source, pointer + "/" + name, "expected a string");
  }
  return v.get<std::string>();
}

}  // namespace internal

namespace {

using internal::Field;
using internal::Json;
using internal::SchemaError;
using internal::StringField;

std::string EscapePointer(const std::string &token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Re-throws a validation error with the file and JSON pointer prepended.
[[noreturn]] void Relocate(const Error &e, const std::string &source,
                           const std::string &pointer) {
  std::string locus = source + ":" + pointer;
  if (!e.locus().empty()) locus += " (" + e.locus() + ")";
  throw Error(e.code(), source + ": " + e.what(), locus);
}

std::optional<std::size_t> ParseIndex(const Json &v, const std::string &source,
                                      const std::string &pointer) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number_integer()) {
    SchemaError(source, pointer, "index must be an integer or null");
  }
  const auto i = v.get<long long>();
  if (i < 1) SchemaError(source, pointer, "indices are 1-based");
  return static_cast<std::size_t>(i - 1);
}

DerivationStep ParseStep(const Json &v, const std::string &source,
                         const std::string &pointer) {
  if (!v.is_array() || v.size() != 5) {
    SchemaError(source, pointer,
                "a step is [article_idx, sentence_idx, head, relation, tail]");
  }
  const auto article = ParseIndex(v[0], source, pointer + "/0");
  const auto sentence = ParseIndex(v[1], source, pointer + "/1");
  if (article.has_value() != sentence.has_value()) {
    SchemaError(source, pointer,
                "article and sentence indices must both be set or both null");
  }
  DerivationStep step;
  const char *names[] = {"head", "relation", "tail"};
  Phrase *fields[] = {&step.head, &step.relation, &step.tail};
  for (int k = 0; k < 3; ++k) {
    const Json &p = v[2 + k];
    if (!p.is_string()) {
      SchemaError(source, pointer + "/" + std::to_string(2 + k),
                  std::string(names[k]) + " must be a string");
    }
    *fields[k] = Phrase(p.get<std::string>());
  }
  if (article) step.provenance = Provenance{*article, *sentence};
  return step;
}

Derivation ParseRawDerivation(const Json &v, const std::string &source,
                              const std::string &pointer) {
  if (!v.is_array()) SchemaError(source, pointer, "a derivation is an array");
  Derivation d;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d.steps.push_back(ParseStep(v[i], source, pointer + "/" +
                                              std::to_string(i)));
  }
  return d;
}

Json StepToJson(const DerivationStep &s) {
  Json step = Json::array();
  if (s.provenance) {
    step.push_back(s.provenance->article_index + 1);
    step.push_back(s.provenance->sentence_index + 1);
  } else {
    step.push_back(nullptr);
    step.push_back(nullptr);
  }
  step.push_back(s.head.text());
  step.push_back(s.relation.text());
  step.push_back(s.tail.text());
  return step;
}

}  // namespace

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path, path);
  return ss.str();
}

void WriteFile(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path, path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path, path);
}

std::vector<Instance> ParseInstances(std::string_view json,
                                     const std::string &source) {
  const Json doc = internal::ParseJson(json, source);
  if (!doc.is_array()) SchemaError(source, "", "expected an array of instances");
  std::vector<Instance> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    const Json &obj = doc[i];
    Instance inst;
    inst.question_id = StringField(obj, "id", source, ptr);
    if (inst.question_id.empty()) SchemaError(source, ptr + "/id", "empty id");
    inst.question = StringField(obj, "question", source, ptr);
    inst.answer = StringField(obj, "answer", source, ptr);
    const Json &articles = Field(obj, "articles", source, ptr);
    if (!articles.is_array() || articles.empty()) {
      SchemaError(source, ptr + "/articles", "expected a non-empty array");
    }
    for (std::size_t a = 0; a < articles.size(); ++a) {
      const std::string aptr = ptr + "/articles/" + std::to_string(a);
      Article art;
      art.title = NormalizeWhitespace(
          StringField(articles[a], "title", source, aptr));
      const Json &sents = Field(articles[a], "sentences", source, aptr);
      if (!sents.is_array() || sents.empty()) {
        SchemaError(source, aptr + "/sentences",
                    "every article needs at least one sentence");
      }
      for (std::size_t s = 0; s < sents.size(); ++s) {
        if (!sents[s].is_string()) {
          SchemaError(source, aptr + "/sentences/" + std::to_string(s),
                      "expected a string");
        }
        art.sentences.push_back(sents[s].get<std::string>());
      }
      inst.articles.push_back(std::move(art));
    }
    if (auto it = obj.find("sf_flags"); it != obj.end() && !it->is_null()) {
      const Json &flags = *it;
      const std::string fptr = ptr + "/sf_flags";
      if (!flags.is_array() || flags.size() != inst.articles.size()) {
        SchemaError(source, fptr, "sf_flags must have one array per article");
      }
      std::vector<std::vector<bool>> parsed;
      for (std::size_t a = 0; a < flags.size(); ++a) {
        const Json &row = flags[a];
        if (!row.is_array() ||
            row.size() != inst.articles[a].sentences.size()) {
          SchemaError(source, fptr + "/" + std::to_string(a),
                      "sf_flags row length must match the sentence count");
        }
        std::vector<bool> r;
        for (std::size_t s = 0; s < row.size(); ++s) {
          if (!row[s].is_boolean()) {
            SchemaError(source, fptr + "/" + std::to_string(a) + "/" +
                                    std::to_string(s),
                        "expected a boolean");
          }
          r.push_back(row[s].get<bool>());
        }
        parsed.push_back(std::move(r));
      }
      inst.supporting_fact_flags = std::move(parsed);
    }
    if (!seen.insert(inst.question_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  source + ": duplicate id \"" + inst.question_id + "\"",
                  source + ":" + ptr + "/id");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> LoadInstances(const std::string &path) {
  return ParseInstances(ReadFile(path), path);
}

DerivationSet ParseDerivations(std::string_view json, DerivationFileKind kind,
                               const std::string &source,
                               const std::vector<Instance> *context) {
  const Json doc = internal::ParseJson(json, source);
  if (!doc.is_object()) {
    SchemaError(source, "", "expected an object mapping id to derivations");
  }
  std::map<std::string, const Instance *> by_id;
  if (context != nullptr) {
    for (const auto &inst : *context) by_id[inst.question_id] = &inst;
  }

  DerivationSet out;
  if (doc.empty()) out.warnings.push_back(source + ": no entries");
  for (const auto &[id, derivations] : doc.items()) {
    const std::string ptr = "/" + EscapePointer(id);
    if (id.empty()) SchemaError(source, ptr, "empty id");
    if (!derivations.is_array()) {
      SchemaError(source, ptr, "expected an array of derivations");
    }
    if (kind == DerivationFileKind::kPredictions && derivations.size() != 1) {
      SchemaError(source, ptr,
                  "prediction files carry exactly one derivation per id");
    }
    if (derivations.empty()) {
      throw Error(ErrorCode::kEmptyReferenceSet,
                  source + ": at least one reference derivation required",
                  source + ":" + ptr);
    }
    const Instance *ctx = nullptr;
    if (auto it = by_id.find(id); it != by_id.end()) ctx = it->second;

    ReferenceSet refs;
    refs.question_id = id;
    for (std::size_t i = 0; i < derivations.size(); ++i) {
      const std::string dptr = ptr + "/" + std::to_string(i);
      Derivation raw = ParseRawDerivation(derivations[i], source, dptr);
      std::vector<std::string> notes;
      try {
        refs.references.push_back(ValidateDerivation(raw, ctx, &notes));
      } catch (const Error &e) {
        Relocate(e, source, dptr);
      }
      for (const auto &n : notes) {
        out.warnings.push_back(source + ":" + dptr + ": " + n);
      }
    }
    out.entries.emplace(id, std::move(refs));
  }
  return out;
}

DerivationSet LoadDerivations(const std::string &path, DerivationFileKind kind,
                              const std::vector<Instance> *context) {
  return ParseDerivations(ReadFile(path), kind, path, context);
}

std::string DerivationsToJson(const DerivationSet &set) {
  Json doc = Json::object();
  for (const auto &[id, refs] : set.entries) {
    Json derivations = Json::array();
    for (const Derivation &d : refs.references) {
      Json steps = Json::array();
      for (const auto &s : d.steps) steps.push_back(StepToJson(s));
      derivations.push_back(std::move(steps));
    }
    doc[id] = std::move(derivations);
  }
  return doc.dump(2) + "\n";
}

std::vector<AnnotationSubmission> ParseSubmissions(std::string_view json,
                                                   const std::string &source) {
  const Json doc = internal::ParseJson(json, source);
  if (!doc.is_array()) {
    SchemaError(source, "", "expected an array of submissions");
  }
  std::vector<AnnotationSubmission> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    AnnotationSubmission s;
    s.question_id = StringField(doc[i], "question_id", source, ptr);
    s.worker_id = StringField(doc[i], "worker_id", source, ptr);
    const std::string answer = StringField(doc[i], "answer", source, ptr);
    if (answer == "correct") {
      s.chosen_answer = AnswerChoice::kCorrect;
    } else if (answer == "wrong") {
      s.chosen_answer = AnswerChoice::kWrong;
    } else if (answer == "neither") {
      s.chosen_answer = AnswerChoice::kNeither;
    } else {
      SchemaError(source, ptr + "/answer",
                  "answer must be \"correct\", \"wrong\" or \"neither\"");
    }
    const std::string dptr = ptr + "/derivation";
    Derivation raw = ParseRawDerivation(
        Field(doc[i], "derivation", source, ptr), source, dptr);
    if (s.chosen_answer == AnswerChoice::kCorrect) {
      try {
        s.derivation = ValidateDerivation(raw);
      } catch (const Error &e) {
        Relocate(e, source, dptr);
      }
    } else {
      // Discarded by the filter anyway; keep as written.
      s.derivation = std::move(raw);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AnnotationSubmission> LoadSubmissions(const std::string &path) {
  return ParseSubmissions(ReadFile(path), path);
}

std::vector<AnswerabilityJudgement> ParseJudgements(std::string_view json,
                                                    const std::string &source) {
  const Json doc = internal::ParseJson(json, source);
  if (!doc.is_array()) {
    SchemaError(source, "", "expected an array of judgements");
  }
  std::vector<AnswerabilityJudgement> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    AnswerabilityJudgement j;
    j.question_id = StringField(doc[i], "question_id", source, ptr);
    j.worker_id = StringField(doc[i], "worker_id", source, ptr);
    const std::string label = StringField(doc[i], "label", source, ptr);
    if (label == "Yes") {
      j.label = AnswerabilityLabel::kYes;
    } else if (label == "Likely") {
      j.label = AnswerabilityLabel::kLikely;
    } else if (label == "No") {
      j.label = AnswerabilityLabel::kNo;
    } else {
      SchemaError(source, ptr + "/label",
                  "label must be \"Yes\", \"Likely\" or \"No\"");
    }
    if (!seen.emplace(j.question_id, j.worker_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  source + ": worker \"" + j.worker_id +
                      "\" judged \"" + j.question_id + "\" twice",
                  source + ":" + ptr);
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<AnswerabilityJudgement> LoadJudgements(const std::string &path) {
  return ParseJudgements(ReadFile(path), path);
}

std::vector<ReferenceSet> ReferenceSets(const DerivationSet &set) {
  std::vector<ReferenceSet> out;
  out.reserve(set.size());
  for (const auto &[id, refs] : set.entries) out.push_back(refs);
  return out;
}

}  // namespace stepeval
