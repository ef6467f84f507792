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

#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "stepeval/baselines.h"
#include "stepeval/corpus.h"
#include "stepeval/error.h"
#include "test_util.h"

using stepeval::ErrorCode;
using testing_util::Fixture;

namespace {

using Row = std::tuple<std::string, std::string, std::string>;

std::vector<Row> Rows(const stepeval::Derivation &d) {
  std::vector<Row> out;
  for (const auto &s : d.steps) {
    out.emplace_back(s.head.text(), s.relation.text(), s.tail.text());
  }
  return out;
}

std::string Line(const std::string &id, const std::string &form,
                 const std::string &upos, int head, const std::string &rel,
                 const std::string &misc = "_") {
  return id + "\t" + form + "\t" + form + "\t" + upos + "\t_\t_\t" +
         std::to_string(head) + "\t" + rel + "\t_\t" + misc + "\n";
}

// "Mud formed everywhere ."
std::string SmallSentence() {
  return Line("1", "Mud", "NOUN", 2, "nsubj") +
         Line("2", "formed", "VERB", 0, "root") +
         Line("3", "everywhere", "ADV", 2, "advmod", "SpaceAfter=No") +
         Line("4", ".", "PUNCT", 2, "punct");
}

stepeval::Error ParseError(const std::string &text) {
  try {
    stepeval::ParseAnnotations(text, "p.conllu");
  } catch (const stepeval::Error &e) {
    return e;
  }
  FAIL("expected a parse failure");
  return stepeval::Error(ErrorCode::kInternal, "");
}

struct Loaded {
  std::vector<stepeval::Instance> instances = stepeval::LoadInstances(Fixture("instances.json"));
  stepeval::AnnotationIndex parses = stepeval::ParseAnnotationFile(Fixture("parses.conllu"));

  const stepeval::Instance &Get(const std::string &id) const {
    for (const auto &i : instances) {
      if (i.question_id == id) return i;
    }
    FAIL("no instance " << id);
    return instances.front();
  }
};

}  // namespace

TEST_CASE("parse file basics") {
  const auto index = stepeval::ParseAnnotations(
      "# doc_id = q\n# locus = 2,3\n" + SmallSentence() + "\n" + "# locus = 1,1\n" +
      SmallSentence());
  REQUIRE(index.size() == 1);
  const auto &doc = index.at("q");
  REQUIRE(doc.size() == 2);
  const auto &s = doc.at(stepeval::SentenceLocus{1, 2});
  CHECK(s.tokens.size() == 4);
  CHECK(s.root() == 2);
  CHECK(s.Dependents(2) == std::vector<std::size_t>{1, 3, 4});
  CHECK(s.Span(1, 4) == "Mud formed everywhere.");
  CHECK(s.Span(2, 2) == "formed");
  CHECK_FALSE(s.tokens[2].space_after);
}

TEST_CASE("parse file skips ranges and empty nodes") {
  const std::string text = "# doc_id = q\n# locus = 1,1\n" +
                           Line("1-2", "Mudformed", "_", 0, "_") +
                           SmallSentence() + Line("4.1", "x", "X", 0, "_");
  CHECK(stepeval::ParseAnnotations(text).at("q").begin()->second.tokens.size() == 4);
}

TEST_CASE("parse file errors") {
  const std::string head = "# doc_id = q\n# locus = 1,1\n";
  auto e = ParseError(head + Line("1", "a", "NOUN", 5, "x") +
                      Line("2", "b", "VERB", 0, "root"));
  CHECK(e.code() == ErrorCode::kParse);
  CHECK(e.locus() == "p.conllu:3");
  e = ParseError(head + Line("1", "a", "NOUN", 0, "root") +
                 Line("2", "b", "VERB", 0, "root"));
  CHECK(std::string(e.what()).find("2 roots") != std::string::npos);
  e = ParseError(head + Line("1", "a", "NOUN", 2, "x") +
                 Line("2", "b", "VERB", 1, "x") + Line("3", "c", "VERB", 0, "root"));
  CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  e = ParseError(head + "1\ta\ta\tNOUN\t_\t0\troot\n");
  CHECK(std::string(e.what()).find("10 tab-separated") != std::string::npos);
  e = ParseError(head + Line("2", "a", "NOUN", 0, "root"));
  CHECK(e.code() == ErrorCode::kParse);
  e = ParseError(head + Line("1", "a", "NOUN", 1, "x"));
  CHECK(std::string(e.what()).find("own head") != std::string::npos);
  e = ParseError(head + SmallSentence() + "\n" + head + SmallSentence());
  CHECK(std::string(e.what()).find("duplicate locus") != std::string::npos);
  e = ParseError("# doc_id = q\n# locus = 0,1\n" + SmallSentence());
  CHECK(e.locus() == "p.conllu:2");
  e = ParseError("# doc_id = q\n" + SmallSentence());
  CHECK(e.code() == ErrorCode::kMissingLocusComment);
  CHECK_THROWS_AS(stepeval::ParseAnnotationFile("/nonexistent.conllu"), stepeval::Error);
}

TEST_CASE("tag classes") {
  CHECK(stepeval::IsVerbTag("VERB"));
  CHECK(stepeval::IsVerbTag("AUX"));
  CHECK_FALSE(stepeval::IsVerbTag("NOUN"));
  CHECK(stepeval::IsNominalTag("PROPN"));
  CHECK(stepeval::IsNominalTag("PRON"));
  CHECK_FALSE(stepeval::IsNominalTag("ADP"));
}

TEST_CASE("triple extraction") {
  const std::string text = "# doc_id = q\n# locus = 1,2\n" +
                           Line("1", "Mud", "NOUN", 2, "nsubj") +
                           Line("2", "covered", "VERB", 0, "root") +
                           Line("3", "the", "DET", 4, "det") +
                           Line("4", "fields", "NOUN", 2, "obj") +
                           Line("5", "and", "CCONJ", 6, "cc") +
                           Line("6", "tents", "NOUN", 4, "conj");
  const auto triples = stepeval::ExtractTriples(
      stepeval::ParseAnnotations(text).at("q").begin()->second);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].step.head.text() == "Mud");
  CHECK(triples[0].step.relation.text() == "covered");
  CHECK(triples[0].step.tail.text() == "the fields");
  CHECK(triples[0].step.provenance == stepeval::Provenance{0, 1});

  // An adverb is neither subject nor object.
  const auto none = stepeval::ParseAnnotations("# doc_id = q\n# locus = 1,1\n" +
                                          SmallSentence());
  CHECK(stepeval::ExtractTriples(none.at("q").begin()->second).empty());
}

TEST_CASE("ie baseline on the fixture") {
  const Loaded data;
  std::vector<std::string> warnings;
  const auto ie = [&](const std::string &id) {
    return Rows(stepeval::BaselineIe(data.Get(id), data.parses, {}, &warnings));
  };
  CHECK(ie("q01") ==
        std::vector<Row>{{"Return to Olympus", "is",
                          "the only album by the American rock band Malfunkshun"},
                         {"Malfunkshun", "was",
                          "an American rock band formed in Seattle"}});
  CHECK(ie("q04") == std::vector<Row>{{"Lewiston", "is", "the second largest city in Maine"},
                                      {"Lewiston", "lies", "in Androscoggin County"}});
  CHECK(ie("q05") == std::vector<Row>{{"Budapest", "is", "the capital of Hungary"},
                                      {"The Danube", "flows", "through Budapest"}});
  CHECK(ie("q06") ==
        std::vector<Row>{{"Jaws", "is", "a 1975 film based on the novel by Peter Benchley"},
                         {"Peter Benchley", "wrote", "the novel"}});
  CHECK(ie("q08") == std::vector<Row>{{"Nepal", "borders", "China"},
                                      {"Nepal", "borders", "to the north"}});
  CHECK(ie("q10") ==
        std::vector<Row>{{"Marie Curie", "was awarded", "the Nobel Prize"},
                         {"Marie Curie", "was awarded", "in 1903"},
                         {"The Nobel Prize in Physics", "is awarded",
                          "by the Royal Swedish Academy of Sciences"}});
  warnings.clear();
  CHECK(ie("q09").empty());
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("ie provenance is 0-based") {
  const Loaded data;
  const auto d = stepeval::BaselineIe(data.Get("q04"), data.parses);
  REQUIRE(d.size() == 2);
  CHECK(d.steps[1].provenance == stepeval::Provenance{0, 1});
}

TEST_CASE("core baseline on the fixture") {
  const Loaded data;
  std::vector<std::string> warnings;
  const auto core = [&](const std::string &id) {
    return Rows(stepeval::BaselineCore(data.Get(id), data.parses, {}, &warnings));
  };
  CHECK(core("q02") ==
        std::vector<Row>{{"Sinister (film)", "is", "a 2012 horror film directed by Scott Derrickson"},
                         {"Scott Derrickson", "is", "an American director"}});
  CHECK(core("q04") ==
        std::vector<Row>{{"Lewiston, Maine", "is", "the second largest city in Maine"},
                         {"Lewiston, Maine", "lies", "in Androscoggin County"}});
  CHECK(core("q07") ==
        std::vector<Row>{{"Juventus F.C.", "is", "a football club based in Turin, Italy"},
                         {"Turin", "is", "a city in northern Italy"}});
  warnings.clear();
  CHECK(core("q08") == std::vector<Row>{{"Nepal", "borders", "China"}});
  CHECK(warnings.size() == 1);
  CHECK(core("q09") == std::vector<Row>{{"Glastonbury 1997", "rained", "heavily"},
                                        {"Mud", "formed", "everywhere"}});
  CHECK(core("q10") ==
        std::vector<Row>{{"Marie Curie", "awarded", "the Nobel Prize"},
                         {"Nobel Prize in Physics", "awarded",
                          "by the Royal Swedish Academy of Sciences"}});
}

TEST_CASE("core span option") {
  const Loaded data;
  stepeval::BaselineOptions o;
  o.core_span = stepeval::CoreSpan::kToken;
  const auto d = Rows(stepeval::BaselineCore(data.Get("q02"), data.parses, o));
  REQUIRE(d.size() == 2);
  CHECK(std::get<2>(d[0]) == "film");
}

TEST_CASE("missing parses") {
  const Loaded data;
  const stepeval::AnnotationIndex none;
  try {
    stepeval::BaselineIe(data.Get("q01"), none);
    FAIL("expected MissingAnnotations");
  } catch (const stepeval::Error &e) {
    CHECK(e.code() == ErrorCode::kMissingAnnotations);
  }
  CHECK_THROWS_AS(stepeval::BaselineCore(data.Get("q01"), none), stepeval::Error);
  stepeval::BaselineOptions o;
  o.fallback = true;
  std::vector<std::string> warnings;
  const auto d = Rows(stepeval::BaselineCore(data.Get("q10"), none, o, &warnings));
  REQUIRE_FALSE(d.empty());
  CHECK(d[0] == Row{"Marie Curie", "awarded", "the Nobel Prize in 1903"});
  warnings.clear();
  CHECK(stepeval::BaselineCore(data.Get("q08"), none, o, &warnings).empty());
  CHECK(warnings.size() == 2);
}

TEST_CASE("sf_only needs flags") {
  stepeval::Instance inst;
  inst.question_id = "x";
  inst.articles.push_back({"Mud", {"Mud formed everywhere."}});
  const stepeval::AnnotationIndex none;
  stepeval::BaselineOptions o;
  o.fallback = true;
  try {
    stepeval::BaselineIe(inst, none, o);
    FAIL("expected InvalidArgument");
  } catch (const stepeval::Error &e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  o.sf_only = false;
  CHECK(stepeval::BaselineIe(inst, none, o).size() == 1);
  std::vector<std::string> warnings;
  CHECK(stepeval::BaselineCore(inst, none, o, &warnings).size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("fallback annotator") {
  const auto s = stepeval::NaiveFallbackAnnotate("Mud formed everywhere.");
  REQUIRE(s.tokens.size() == 4);
  CHECK(s.tokens[1].form == "formed");
  CHECK(s.root() == 2);
  CHECK_FALSE(s.tokens[2].space_after);
  CHECK(s.Span(1, 4) == "Mud formed everywhere.");
  CHECK(stepeval::NaiveFallbackAnnotate("").tokens.empty());
  CHECK(stepeval::NaiveFallbackAnnotate("").root() == 0);
}

TEST_CASE("custom extractor") {
  const Loaded data;
  stepeval::BaselineOptions o;
  o.extractor = [](const stepeval::SentenceAnnotation &s) {
    stepeval::ExtractedTriple t;
    t.step = testing_util::Step(s.tokens.front().form, "has", "tokens");
    return std::vector<stepeval::ExtractedTriple>{t};
  };
  const auto d = stepeval::BaselineIe(data.Get("q01"), data.parses, o);
  CHECK(d.size() == 2);
  CHECK(d.steps[0].head.text() == "Return");
}
