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

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "oracles.h"
#include "stepeval/corpus.h"
#include "stepeval/metrics.h"
#include "test_util.h"

using stepeval::ScorerKind;
using testing_util::RandomText;
using testing_util::ToDerivation;

namespace {

stepeval::ReferenceSet Refs(const std::vector<std::vector<oracle::Triple>> &gs) {
  stepeval::ReferenceSet refs;
  for (const auto &g : gs) refs.references.push_back(ToDerivation(g));
  return refs;
}

std::vector<std::vector<oracle::Triple>> RandomRefs(RandomText &rnd) {
  std::vector<std::vector<oracle::Triple>> gs;
  const std::size_t n = 1 + rnd.Below(3);
  for (std::size_t i = 0; i < n; ++i) gs.push_back(rnd.Triples(1, 5));
  return gs;
}

}  // namespace

TEST_CASE("permuting steps leaves every value unchanged") {
  RandomText rnd(101);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = rnd.Triples(1, 6);
    auto gs = RandomRefs(rnd);
    const auto before = stepeval::EvaluateAllScorers(ToDerivation(d), Refs(gs));
    std::shuffle(d.begin(), d.end(), rnd.engine());
    for (auto &g : gs) std::shuffle(g.begin(), g.end(), rnd.engine());
    const auto after = stepeval::EvaluateAllScorers(ToDerivation(d), Refs(gs));
    for (const auto &[kind, b] : before) {
      const auto &a = after.at(kind);
      CHECK(a.c_star == doctest::Approx(b.c_star).epsilon(1e-12));
      CHECK(a.precision == doctest::Approx(b.precision).epsilon(1e-12));
      CHECK(a.recall == doctest::Approx(b.recall).epsilon(1e-12));
      CHECK(a.f1 == doctest::Approx(b.f1).epsilon(1e-12));
    }
  }
}

TEST_CASE("scorers agree when every field has the same similarity") {
  RandomText rnd(202);
  const auto uniform = [&](std::size_t lo, std::size_t hi) {
    std::vector<oracle::Triple> out;
    for (const auto &t : rnd.Triples(lo, hi)) out.push_back({t.head, t.head, t.head});
    return out;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = uniform(1, 5);
    std::vector<std::vector<oracle::Triple>> gs{uniform(1, 5), uniform(1, 5)};
    const auto r = stepeval::EvaluateAllScorers(ToDerivation(d), Refs(gs));
    const auto &e = r.at(ScorerKind::kEntity);
    for (ScorerKind k : {ScorerKind::kRelation, ScorerKind::kFull}) {
      CHECK(r.at(k).precision == doctest::Approx(e.precision).epsilon(1e-12));
      CHECK(r.at(k).recall == doctest::Approx(e.recall).epsilon(1e-12));
      CHECK(r.at(k).f1 == doctest::Approx(e.f1).epsilon(1e-12));
    }
  }
}

TEST_CASE("macro totals are the mean of per-instance values") {
  RandomText rnd(303);
  for (int trial = 0; trial < 20; ++trial) {
    stepeval::DerivationSet refs, preds;
    const std::size_t n = 1 + rnd.Below(12);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "i" + std::to_string(i);
      refs.entries[id] = Refs(RandomRefs(rnd));
      if (rnd.Below(4) != 0) {
        preds.entries[id].references.push_back(ToDerivation(rnd.Triples(1, 5)));
      }
    }
    const auto report = stepeval::EvaluateCorpus(preds, refs);
    for (ScorerKind k : stepeval::kAllScorers) {
      double p = 0, r = 0, f = 0;
      for (const auto &d : report.details) {
        p += d.scores.at(k).precision;
        r += d.scores.at(k).recall;
        f += d.scores.at(k).f1;
      }
      const double count = static_cast<double>(report.details.size());
      CHECK(std::abs(report.totals.at(k).precision - p / count) <= 1e-12);
      CHECK(std::abs(report.totals.at(k).recall - r / count) <= 1e-12);
      CHECK(std::abs(report.totals.at(k).f1 - f / count) <= 1e-12);
    }
  }
}

TEST_CASE("micro totals pool alignment sums") {
  RandomText rnd(404);
  stepeval::DerivationSet refs, preds;
  for (std::size_t i = 0; i < 6; ++i) {
    const std::string id = "i" + std::to_string(i);
    refs.entries[id] = Refs(RandomRefs(rnd));
    preds.entries[id].references.push_back(ToDerivation(rnd.Triples(1, 5)));
  }
  stepeval::CorpusOptions o;
  o.aggregate = stepeval::Aggregate::kMicro;
  const auto report = stepeval::EvaluateCorpus(preds, refs, o);
  for (ScorerKind k : stepeval::kAllScorers) {
    double c = 0, nd = 0, ng = 0;
    for (const auto &d : report.details) {
      c += d.scores.at(k).c_star;
      nd += static_cast<double>(d.scores.at(k).predicted_steps);
      ng += static_cast<double>(d.scores.at(k).golden_steps);
    }
    CHECK(report.totals.at(k).precision == doctest::Approx(c / nd).epsilon(1e-12));
    CHECK(report.totals.at(k).recall == doctest::Approx(c / ng).epsilon(1e-12));
  }
}

TEST_CASE("label fractions and split fraction sum to one") {
  RandomText rnd(505);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<stepeval::AnswerabilityJudgement> js;
    const std::size_t questions = 1 + rnd.Below(10);
    for (std::size_t q = 0; q < questions; ++q) {
      const std::size_t workers = 1 + rnd.Below(5);
      for (std::size_t w = 0; w < workers; ++w) {
        js.push_back({"q" + std::to_string(q), "w" + std::to_string(w),
                      static_cast<stepeval::AnswerabilityLabel>(rnd.Below(3))});
      }
    }
    const auto report = stepeval::ComputeAgreement(js);
    double total = report.split_fraction;
    for (const auto &[label, f] : report.label_distribution) total += f;
    CHECK(std::abs(total - 1.0) <= 1e-9);
    if (report.alpha) CHECK(*report.alpha <= 1.0);
  }
}
