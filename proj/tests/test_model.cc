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

#include "doctest.h"
#include "stepeval/error.h"
#include "stepeval/model.h"
#include "test_util.h"

using stepeval::Derivation;
using stepeval::ErrorCode;
using testing_util::Step;

namespace {

ErrorCode CodeOf(const Derivation &d, const stepeval::Instance *ctx = nullptr) {
  try {
    stepeval::ValidateDerivation(d, ctx);
  } catch (const stepeval::Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("whitespace normalization") {
  CHECK(stepeval::NormalizeWhitespace("  a \t b\n") == "a b");
  CHECK(stepeval::NormalizeWhitespace("") == "");
  CHECK(stepeval::NormalizeWhitespace(" \n ") == "");
  CHECK(stepeval::Phrase("an  American director") ==
        stepeval::Phrase("an American director "));
  CHECK(stepeval::Phrase("x").text() == "x");
}

TEST_CASE("validate derivation rejects empty and blank") {
  CHECK(CodeOf(Derivation{}) == ErrorCode::kEmptyDerivation);

  Derivation d;
  d.steps.push_back(Step("Scott Derrickson", "  ", "American"));
  CHECK(CodeOf(d) == ErrorCode::kEmptyField);
  try {
    stepeval::ValidateDerivation(d);
  } catch (const stepeval::Error &e) {
    CHECK(e.locus() == "step 0 relation");
  }
  d.steps[0] = Step("", "is", "x");
  CHECK(CodeOf(d) == ErrorCode::kEmptyField);
  d.steps[0] = Step("a", "is", "\t");
  CHECK(CodeOf(d) == ErrorCode::kEmptyField);
}

TEST_CASE("validate derivation checks provenance against the instance") {
  stepeval::Instance inst;
  inst.question_id = "q";
  inst.articles.push_back({"A", {"s1", "s2"}});
  Derivation d;
  d.steps.push_back(Step("a", "b", "c"));
  d.steps[0].provenance = stepeval::Provenance{0, 1};
  CHECK_NOTHROW(stepeval::ValidateDerivation(d, &inst));
  d.steps[0].provenance = stepeval::Provenance{0, 2};
  CHECK(CodeOf(d, &inst) == ErrorCode::kProvenanceOutOfBounds);
  d.steps[0].provenance = stepeval::Provenance{1, 0};
  CHECK(CodeOf(d, &inst) == ErrorCode::kProvenanceOutOfBounds);
  // Without context nothing can be checked.
  CHECK_NOTHROW(stepeval::ValidateDerivation(d));
}

TEST_CASE("duplicate steps are kept with a warning") {
  Derivation d;
  d.steps.push_back(Step("a", "b", "c"));
  d.steps.push_back(Step(" a", "b ", "c"));
  std::vector<std::string> warnings;
  const Derivation out = stepeval::ValidateDerivation(d, nullptr, &warnings);
  CHECK(out.size() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0] == "step 1 duplicates step 0");
}

TEST_CASE("normalization is idempotent") {
  Derivation d;
  d.steps.push_back(Step("  Big   Stone Gap ", "is\tdirected by", "Adriana"));
  const Derivation once = stepeval::ValidateDerivation(d);
  const Derivation twice = stepeval::ValidateDerivation(once);
  CHECK(once.steps[0].head.text() == "Big Stone Gap");
  CHECK(stepeval::SameSteps(once, twice));
}

TEST_CASE("same steps ignores order") {
  Derivation a, b;
  a.steps = {Step("a", "b", "c"), Step("d", "e", "f")};
  b.steps = {Step("d", "e", "f"), Step("a", "b", "c")};
  CHECK(stepeval::SameSteps(a, b));
  b.steps.pop_back();
  CHECK_FALSE(stepeval::SameSteps(a, b));
}

TEST_CASE("step count histogram") {
  auto make = [](std::size_t n) {
    Derivation d;
    for (std::size_t i = 0; i < n; ++i) d.steps.push_back(Step("a", "b", "c"));
    return d;
  };
  std::vector<stepeval::ReferenceSet> corpus(2);
  corpus[0].references = {make(2), make(3), make(1)};
  corpus[1].references = {make(4), make(7), make(2)};
  const auto h = stepeval::DerivationStepCountHistogram(corpus);
  CHECK(h.total == 6);
  CHECK(h.two == 2);
  CHECK(h.three == 1);
  CHECK(h.four_or_more == 2);
  CHECK(h.fewer_than_two == 1);
  CHECK(h.exact.at(2) == 2);
  CHECK(h.exact.at(7) == 1);
  CHECK(h.two + h.three + h.four_or_more + h.fewer_than_two == h.total);
}

TEST_CASE("supporting fact lookup") {
  stepeval::Instance inst;
  inst.articles.push_back({"A", {"s1", "s2"}});
  CHECK_FALSE(inst.IsSupportingFact(0, 0));
  inst.supporting_fact_flags = std::vector<std::vector<bool>>{{false, true}};
  CHECK_FALSE(inst.IsSupportingFact(0, 0));
  CHECK(inst.IsSupportingFact(0, 1));
  CHECK_FALSE(inst.IsSupportingFact(3, 0));
}

TEST_CASE("error code names") {
  CHECK(stepeval::ErrorCodeName(ErrorCode::kEmptyField) == "EmptyField");
  CHECK(stepeval::ErrorCodeName(ErrorCode::kParse) == "ParseError");
  CHECK(stepeval::IsInputError(ErrorCode::kDuplicateId));
  CHECK_FALSE(stepeval::IsInputError(ErrorCode::kInternal));
}
