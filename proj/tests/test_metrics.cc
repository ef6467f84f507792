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

#include <map>

#include "doctest.h"
#include "oracles.h"
#include "stepeval/error.h"
#include "stepeval/metrics.h"
#include "test_util.h"

using stepeval::Derivation;
using stepeval::ReferenceSet;
using stepeval::ScorerKind;
using testing_util::Step;

namespace {

Derivation Steps(std::initializer_list<const char *> heads) {
  Derivation d;
  for (const char *h : heads) d.steps.push_back(Step(h, "r", "t"));
  return d;
}

// Similarity looked up by (predicted head, golden head); 0 when absent.
stepeval::StepSimilarityFn Table(std::map<std::pair<std::string, std::string>,
                                     double> table) {
  return [table = std::move(table)](const stepeval::DerivationStep &d,
                                    const stepeval::DerivationStep &g) {
    auto it = table.find({d.head.text(), g.head.text()});
    return it == table.end() ? 0.0 : it->second;
  };
}

}  // namespace

TEST_CASE("figure-style example with a similarity stub") {
  const Derivation d = Steps({"d0", "d1", "d2"});
  ReferenceSet refs;
  refs.references.push_back(Steps({"g0", "g1", "g2", "g3", "g4"}));
  const auto sim = Table({{{"d0", "g0"}, 1.0},
                          {{"d1", "g1"}, 0.8},
                          {{"d1", "g2"}, 0.3},
                          {{"d2", "g2"}, 0.1}});
  const auto r = stepeval::EvaluateDerivation(d, refs, sim);
  CHECK(r.c_star == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(r.precision == doctest::Approx(1.9 / 3.0).epsilon(1e-12));
  CHECK(r.recall == doctest::Approx(0.38).epsilon(1e-12));
  CHECK(r.f1 == doctest::Approx(2 * (1.9 / 3) * 0.38 / (1.9 / 3 + 0.38)));
  CHECK(r.winning_alignment ==
        stepeval::Alignment{{{0, 0}, {1, 1}, {2, 2}}});
}

TEST_CASE("f1 is zero when precision and recall are zero") {
  CHECK(stepeval::F1Score(0.0, 0.0) == 0.0);
  CHECK(stepeval::F1Score(1.0, 0.0) == 0.0);
  CHECK(stepeval::F1Score(0.5, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("scorer names") {
  CHECK(stepeval::ScorerName(ScorerKind::kEntity) == "entity");
  CHECK(stepeval::ParseScorerName("relation") == ScorerKind::kRelation);
  CHECK_FALSE(stepeval::ParseScorerName("Full").has_value());
}

TEST_CASE("step similarity per scorer") {
  const auto d = Step("Scott Derrickson", "is", "American");
  const auto g = Step("Scott Derrickson", "was", "American");
  stepeval::Scorer s;
  s.kind = ScorerKind::kEntity;
  CHECK(stepeval::StepSimilarity(d, g, s) == 1.0);
  s.kind = ScorerKind::kRelation;
  CHECK(stepeval::StepSimilarity(d, g, s) == doctest::Approx(1.0 / 3.0));
  s.kind = ScorerKind::kFull;
  CHECK(stepeval::StepSimilarity(d, g, s) ==
        doctest::Approx((1.0 + 1.0 / 3.0 + 1.0) / 3.0));
}

TEST_CASE("G* selection policies") {
  // Reference 0 gives c = 1 over 4 steps, reference 1 c = 0.9 over 1 step.
  const Derivation d = Steps({"a"});
  ReferenceSet refs;
  refs.references.push_back(Steps({"x", "y", "z", "w"}));
  refs.references.push_back(Steps({"b"}));
  const auto sim = Table({{{"a", "x"}, 1.0}, {{"a", "b"}, 0.9}});
  const auto by_c = stepeval::EvaluateDerivation(d, refs, sim,
                                            stepeval::GStarPolicy::kAlignmentScore);
  CHECK(by_c.winning_reference_index == 0);
  CHECK(by_c.recall == doctest::Approx(0.25));
  const auto by_f1 = stepeval::EvaluateDerivation(d, refs, sim,
                                             stepeval::GStarPolicy::kF1);
  CHECK(by_f1.winning_reference_index == 1);
  CHECK(by_f1.f1 == doctest::Approx(0.9));

  // Equal c: the higher f1 (shorter reference) wins; full ties go to index 0.
  ReferenceSet tie;
  tie.references.push_back(Steps({"x", "y"}));
  tie.references.push_back(Steps({"x"}));
  tie.references.push_back(Steps({"x"}));
  const auto t = stepeval::EvaluateDerivation(d, tie, Table({{{"a", "x"}, 0.5}}));
  CHECK(t.winning_reference_index == 1);
}

TEST_CASE("evaluate derivation errors") {
  ReferenceSet refs;
  refs.references.push_back(Steps({"a"}));
  const auto sim = Table({});
  try {
    stepeval::EvaluateDerivation(Derivation{}, refs, sim);
    FAIL("expected EmptyDerivation");
  } catch (const stepeval::Error &e) {
    CHECK(e.code() == stepeval::ErrorCode::kEmptyDerivation);
  }
  try {
    stepeval::EvaluateDerivation(Steps({"a"}), ReferenceSet{}, sim);
    FAIL("expected EmptyReferenceSet");
  } catch (const stepeval::Error &e) {
    CHECK(e.code() == stepeval::ErrorCode::kEmptyReferenceSet);
  }
}

TEST_CASE("evaluate all scorers picks G* per scorer") {
  Derivation d;
  d.steps = {Step("Malfunkshun", "is", "a band")};
  ReferenceSet refs;
  Derivation g0, g1;
  g0.steps = {Step("Malfunkshun", "zzzz", "a band")};   // entity match
  g1.steps = {Step("q", "is", "r")};                     // relation match
  refs.references = {g0, g1};
  const auto reports = stepeval::EvaluateAllScorers(d, refs);
  CHECK(reports.at(ScorerKind::kEntity).winning_reference_index == 0);
  CHECK(reports.at(ScorerKind::kEntity).f1 == 1.0);
  CHECK(reports.at(ScorerKind::kRelation).winning_reference_index == 1);
  CHECK(reports.at(ScorerKind::kRelation).f1 == 1.0);
}

TEST_CASE("index subsets") {
  const auto s = stepeval::IndexSubsets(4, 2);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == std::vector<std::size_t>{0, 1});
  CHECK(s[1] == std::vector<std::size_t>{0, 2});
  CHECK(s.back() == std::vector<std::size_t>{2, 3});
  CHECK(stepeval::IndexSubsets(3, 3).size() == 1);
  CHECK(stepeval::IndexSubsets(5, 1).size() == 5);
  CHECK(stepeval::IndexSubsets(2, 3).empty());
}

TEST_CASE("reference ablation") {
  Derivation d;
  d.steps = {Step("a", "b", "c")};
  ReferenceSet refs;
  Derivation exact, other;
  exact.steps = {Step("a", "b", "c")};
  other.steps = {Step("x", "y", "z")};
  refs.references = {other, exact, other};

  const auto prefix1 = stepeval::ReferenceAblation(d, refs, 1,
                                              stepeval::AblationPolicy::kPrefix);
  CHECK(prefix1.at(ScorerKind::kFull).f1 == 0.0);
  CHECK(prefix1.at(ScorerKind::kFull).subsets == 1);
  const auto prefix2 = stepeval::ReferenceAblation(d, refs, 2,
                                              stepeval::AblationPolicy::kPrefix);
  CHECK(prefix2.at(ScorerKind::kFull).f1 == 1.0);

  const auto mean1 = stepeval::ReferenceAblation(
      d, refs, 1, stepeval::AblationPolicy::kAllSubsetsMean);
  CHECK(mean1.at(ScorerKind::kFull).subsets == 3);
  CHECK(mean1.at(ScorerKind::kFull).f1 == doctest::Approx(1.0 / 3.0));
  const auto mean2 = stepeval::ReferenceAblation(
      d, refs, 2, stepeval::AblationPolicy::kAllSubsetsMean);
  CHECK(mean2.at(ScorerKind::kFull).f1 == doctest::Approx(2.0 / 3.0));
  const auto all = stepeval::ReferenceAblation(d, refs, 3,
                                          stepeval::AblationPolicy::kAllSubsetsMean);
  CHECK(all.at(ScorerKind::kFull).f1 == 1.0);

  for (std::size_t bad : {std::size_t{0}, std::size_t{4}}) {
    try {
      stepeval::ReferenceAblation(d, refs, bad, stepeval::AblationPolicy::kPrefix);
      FAIL("expected BadK");
    } catch (const stepeval::Error &e) {
      CHECK(e.code() == stepeval::ErrorCode::kBadK);
    }
  }
}

TEST_CASE("metrics agree with the brute-force oracle") {
  testing_util::RandomText gen(31337);
  const std::pair<ScorerKind, oracle::Kind> kinds[] = {
      {ScorerKind::kEntity, oracle::Kind::kEntity},
      {ScorerKind::kRelation, oracle::Kind::kRelation},
      {ScorerKind::kFull, oracle::Kind::kFull}};
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = gen.Triples(1, 4);
    std::vector<std::vector<oracle::Triple>> gs;
    ReferenceSet refs;
    for (std::size_t k = 1 + gen.Below(3); k > 0; --k) {
      gs.push_back(gen.Triples(1, 4));
      refs.references.push_back(testing_util::ToDerivation(gs.back()));
    }
    const auto reports =
        stepeval::EvaluateAllScorers(testing_util::ToDerivation(d), refs);
    for (const auto &[kind, okind] : kinds) {
      const auto expected = oracle::Evaluate(d, gs, okind);
      const auto &got = reports.at(kind);
      CHECK(got.c_star == doctest::Approx(expected.c).epsilon(1e-12));
      CHECK(got.precision == doctest::Approx(expected.precision).epsilon(1e-12));
      CHECK(got.recall == doctest::Approx(expected.recall).epsilon(1e-12));
      CHECK(got.f1 == doctest::Approx(expected.f1).epsilon(1e-12));
    }
  }
}
