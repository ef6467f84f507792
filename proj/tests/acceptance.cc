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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cli_runner.h"
#include "json.hpp"
#include "oracles.h"
#include "stepeval/align.h"
#include "stepeval/corpus.h"
#include "stepeval/metrics.h"
#include "stepeval/textsim.h"
#include "test_util.h"

using nlohmann::json;
using stepeval::ScorerKind;
using testing_util::Fixture;
using testing_util::Golden;

namespace {

// Collects failed expectations for one criterion.
class Check {
 public:
  void operator()(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string s = std::to_string(failed_) + " failed:";
    for (const auto &f : failures_) s += " [" + f + "]";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t failed_ = 0;
};

struct Criterion {
  int number;
  std::string name;
  double limit_ms;  // 0 = no runtime limit
  std::function<void(Check &)> body;
};

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

stepeval::ReferenceSet Refs(const std::vector<std::vector<oracle::Triple>> &gs) {
  stepeval::ReferenceSet refs;
  for (const auto &g : gs) refs.references.push_back(testing_util::ToDerivation(g));
  return refs;
}

// --- 1 ----------------------------------------------------------------------

stepeval::Derivation Heads(std::initializer_list<const char *> heads) {
  stepeval::Derivation d;
  for (const char *h : heads) d.steps.push_back(testing_util::Step(h, "r", "t"));
  return d;
}

void FigureExample(Check &check) {
  // Three predicted steps against five golden steps; the optimal alignment
  // picks 1.0, 0.8 and 0.1.
  const stepeval::Derivation d = Heads({"d0", "d1", "d2"});
  stepeval::ReferenceSet refs;
  refs.references.push_back(Heads({"g0", "g1", "g2", "g3", "g4"}));
  const std::map<std::pair<std::string, std::string>, double> table = {
      {{"d0", "g0"}, 1.0}, {{"d1", "g1"}, 0.8}, {{"d1", "g2"}, 0.3},
      {{"d2", "g2"}, 0.1}, {{"d0", "g3"}, 0.2}};
  const stepeval::StepSimilarityFn stub = [&table](const stepeval::DerivationStep &a,
                                              const stepeval::DerivationStep &b) {
    auto it = table.find({a.head.text(), b.head.text()});
    return it == table.end() ? 0.0 : it->second;
  };
  const auto r = stepeval::EvaluateDerivation(d, refs, stub);
  const double pr = (0.1 + 1.0 + 0.8) / 3.0;
  const double rc = 0.380;
  check(std::abs(r.precision - pr) < 1e-9, "pr " + Fmt(r.precision));
  check(std::abs(r.precision - 0.6333333333) < 1e-9, "pr 0.6333");
  check(std::abs(r.recall - rc) < 1e-9, "rc " + Fmt(r.recall));
  // 2 * (1.9 / 3) * 0.38 / (1.9 / 3 + 0.38) = 1.444 / 3.04 = 0.475.
  check(std::abs(r.f1 - 1.444 / 3.04) < 1e-9, "f1 " + Fmt(r.f1));
  check(std::abs(r.f1 - 2 * pr * rc / (pr + rc)) < 1e-9, "f1 harmonic mean");
}

// --- 2 ----------------------------------------------------------------------

void AlignmentOracle(Check &check) {
  testing_util::RandomText rnd(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rnd.Below(7);
    const std::size_t cols = 1 + rnd.Below(7);
    std::vector<double> values(rows * cols);
    for (double &v : values) {
      // A quarter of the matrices are coarsely quantized to force ties.
      v = trial % 4 == 0 ? static_cast<double>(rnd.Below(4)) / 3.0 : rnd.Unit();
    }
    const auto m = stepeval::ScoreMatrix::FromValues(rows, cols, values);
    const auto best = stepeval::BestAlignment(m);
    double brute = 0.0;
    for (const auto &a : stepeval::EnumerateAlignments(rows, cols)) {
      brute = std::max(brute, stepeval::AlignmentScore(m, a));
    }
    check(best.score - brute == 0.0,
          "trial " + std::to_string(trial) + ": " + Fmt(best.score) + " vs " + Fmt(brute));
    check(stepeval::AlignmentScore(m, best.alignment) == best.score,
          "trial " + std::to_string(trial) + ": returned pairs do not sum to score");
  }
}

// --- 3 ----------------------------------------------------------------------

void MetricBounds(Check &check) {
  testing_util::RandomText rnd(33);
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = testing_util::ToDerivation(rnd.Triples(1, 6));
    std::vector<std::vector<oracle::Triple>> gs;
    const std::size_t n = 1 + rnd.Below(4);
    for (std::size_t i = 0; i < n; ++i) gs.push_back(rnd.Triples(1, 6));
    const auto refs = Refs(gs);
    const auto reports = stepeval::EvaluateAllScorers(d, refs);
    for (const auto &[kind, r] : reports) {
      const std::string tag = "trial " + std::to_string(trial) + " " +
                              std::string(stepeval::ScorerName(kind));
      const std::size_t g = refs.references[r.winning_reference_index].size();
      check(r.c_star >= 0.0, tag + " c* < 0");
      check(r.c_star <= static_cast<double>(std::min(d.size(), g)) + 1e-12,
            tag + " c* above min(|D|,|G*|)");
      check(in_unit(r.precision) && in_unit(r.recall) && in_unit(r.f1),
            tag + " value outside [0,1]");
      if (r.precision > 0.0 && r.recall > 0.0) {
        check(std::min(r.precision, r.recall) <= r.f1 + 1e-12 &&
                  r.f1 <= std::max(r.precision, r.recall) + 1e-12,
              tag + " f1 outside [min, max]");
      }
    }
  }
}

// --- 4 ----------------------------------------------------------------------

void IdentityAndMonotonicity(Check &check) {
  testing_util::RandomText rnd(44);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = rnd.Triples(1, 7);
    const auto reports =
        stepeval::EvaluateAllScorers(testing_util::ToDerivation(g), Refs({g}));
    for (const auto &[kind, r] : reports) {
      check(r.precision == 1.0 && r.recall == 1.0 && r.f1 == 1.0,
            "identity trial " + std::to_string(trial));
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = testing_util::ToDerivation(rnd.Triples(1, 5));
    std::vector<std::vector<oracle::Triple>> gs;
    std::map<ScorerKind, double> previous;
    for (std::size_t i = 0; i < 5; ++i) {
      gs.push_back(rnd.Triples(1, 5));
      for (const auto &[kind, r] : stepeval::EvaluateAllScorers(d, Refs(gs))) {
        if (previous.contains(kind)) {
          check(r.c_star >= previous[kind],
                "monotonicity trial " + std::to_string(trial));
        }
        previous[kind] = r.c_star;
      }
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<oracle::Triple>> gs;
    for (std::size_t i = 0; i < 1 + rnd.Below(3); ++i) gs.push_back(rnd.Triples(1, 5));
    auto base = rnd.Triples(0, 4);
    base.push_back(gs[0][0]);  // guarantees c* > 0
    auto padded = base;
    // Random phrases never use x/y/z, so every similarity to this step is 0.
    padded.push_back({"xyz", "zyx", "xxyy"});
    const auto refs = Refs(gs);
    const auto before = stepeval::EvaluateAllScorers(testing_util::ToDerivation(base), refs);
    const auto after = stepeval::EvaluateAllScorers(testing_util::ToDerivation(padded), refs);
    for (const auto &[kind, b] : before) {
      const auto &a = after.at(kind);
      const std::string tag = "padding trial " + std::to_string(trial);
      check(std::abs(a.c_star - b.c_star) <= 1e-12, tag + " c* changed");
      check(std::abs(a.recall - b.recall) <= 1e-12, tag + " recall changed");
      check(a.precision < b.precision, tag + " precision did not drop");
    }
  }
}

// --- 5 ----------------------------------------------------------------------

void LevenshteinExhaustive(Check &check) {
  std::vector<std::string> words{""};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == 6) continue;
    for (char c : {'a', 'b', 'c'}) words.push_back(words[i] + c);
  }
  check(words.size() == 1093, "alphabet enumeration");
  for (const auto &a : words) {
    for (const auto &b : words) {
      const std::size_t dp = stepeval::LevenshteinDistance(std::string_view(a), std::string_view(b));
      const std::size_t naive = oracle::Levenshtein(std::string_view(a), std::string_view(b));
      check(dp == naive, "\"" + a + "\" vs \"" + b + "\"");
    }
  }
}

// --- 6 ----------------------------------------------------------------------

stepeval::RatingMatrix ToMatrix(const std::vector<std::vector<int>> &u) {
  stepeval::RatingMatrix m;
  for (const auto &row : u) {
    std::vector<std::optional<int>> r;
    for (int v : row) r.push_back(v < 0 ? std::nullopt : std::optional<int>(v));
    m.push_back(r);
  }
  return m;
}

void Alpha(Check &check) {
  const std::vector<std::vector<std::vector<int>>> perfect = {
      {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}},
      {{0, 0}, {1, 1}},
      {{1, 1, -1}, {0, -1, 0}, {2, 2, 2}, {-1, 1, -1}},
      {{2, 2}, {2, 2}}};
  for (std::size_t i = 0; i < perfect.size(); ++i) {
    check(stepeval::KrippendorffAlpha(ToMatrix(perfect[i])) == 1.0,
          "perfect agreement matrix " + std::to_string(i));
  }
  // Two units rated by two raters: (A, A) and (A, B).
  const std::vector<std::vector<int>> hand = {{0, 0}, {0, 1}};
  const double got = stepeval::KrippendorffAlpha(ToMatrix(hand));
  const double want = oracle::KrippendorffAlpha(hand);
  check(std::abs(got - want) < 1e-9, "2x2 example " + Fmt(got) + " vs " + Fmt(want));
  check(std::abs(got - 0.0) < 1e-9, "2x2 example hand value 0");
}

// --- 7 ----------------------------------------------------------------------

void Pipeline(Check &check) {
  const auto subs = stepeval::LoadSubmissions(Fixture("submissions.json"));
  const auto judgements = stepeval::LoadJudgements(Fixture("judgements.json"));
  const auto result = stepeval::RunPipeline(subs, judgements);
  std::vector<std::string> ids;
  for (const auto &[id, r] : result.retained.entries) ids.push_back(id);
  // p4: a wrong answer leaves two; p5: four correct; p6: Likely majority;
  // p7: split vote. p2 and p3 keep three after dropping wrong / neither.
  check(ids == std::vector<std::string>{"p1", "p2", "p3"}, "retained ids");
  for (const auto &s : subs) {
    if (s.chosen_answer != stepeval::AnswerChoice::kCorrect) continue;
    auto it = result.retained.entries.find(s.question_id);
    if (it == result.retained.entries.end()) continue;
    bool found = false;
    for (const auto &d : it->second.references) {
      if (stepeval::SameSteps(d, s.derivation)) found = true;
    }
    check(found, s.question_id + "/" + s.worker_id + " derivation retained");
  }
  for (const auto &[id, r] : result.retained.entries) {
    check(r.references.size() == 3, id + " has three references");
  }
  const auto &st = result.stats;
  check(st.wrong == 2 && st.neither == 1 && st.not_three == 2 && st.non_yes == 2 &&
            st.retained == 3,
        "drop counts");
}

// --- 8 ----------------------------------------------------------------------

std::map<std::string, std::vector<oracle::Triple>> Triples(const std::string &text) {
  std::map<std::string, std::vector<oracle::Triple>> out;
  const json doc = json::parse(text);
  for (const auto &[id, ds] : doc.items()) {
    for (const auto &s : ds.at(0)) {
      out[id].push_back({s[2].get<std::string>(), s[3].get<std::string>(),
                         s[4].get<std::string>()});
    }
  }
  return out;
}

bool Has(const std::vector<oracle::Triple> &ts, const oracle::Triple &t) {
  for (const auto &x : ts) {
    if (x.head == t.head && x.relation == t.relation && x.tail == t.tail) return true;
  }
  return false;
}

// Macro scores recomputed with the oracle, formatted like the TSV report.
std::string OracleTsv(const std::map<std::string, std::vector<oracle::Triple>> &preds) {
  const auto refs_file = json::parse(cli::Slurp(Fixture("references.json")));
  std::string out;
  const std::pair<const char *, oracle::Kind> kinds[] = {
      {"entity", oracle::Kind::kEntity},
      {"relation", oracle::Kind::kRelation},
      {"full", oracle::Kind::kFull}};
  for (const auto &[name, kind] : kinds) {
    double p = 0, r = 0, f = 0;
    for (const auto &[id, ds] : refs_file.items()) {
      auto it = preds.find(id);
      if (it == preds.end()) continue;
      std::vector<std::vector<oracle::Triple>> gs;
      for (const auto &d : ds) {
        std::vector<oracle::Triple> g;
        for (const auto &s : d) {
          g.push_back({s[2].get<std::string>(), s[3].get<std::string>(),
                       s[4].get<std::string>()});
        }
        gs.push_back(g);
      }
      const auto s = oracle::Evaluate(it->second, gs, kind);
      p += s.precision;
      r += s.recall;
      f += s.f1;
    }
    const double n = static_cast<double>(refs_file.size());
    char line[128];
    std::snprintf(line, sizeof(line), "%s\t%.4f\t%.4f\t%.4f\n", name, p / n, r / n, f / n);
    out += line;
  }
  return out;
}

void Baselines(Check &check) {
  cli::TempDir dir;
  const std::string instances = Fixture("instances.json");
  const std::string parses = Fixture("parses.conllu");
  const struct {
    const char *which;
    const char *golden;
  } runs[] = {{"ie", "ie"}, {"core", "core"}};
  for (const auto &run : runs) {
    const std::string out = dir / (std::string(run.which) + ".json");
    const auto r = cli::Run({"baseline", run.which, instances, "--parses", parses, "-o", out});
    check(r.exit_code == 0, std::string(run.which) + " exit code");
    const std::string got = cli::Slurp(out);
    check(got == cli::Slurp(Golden(std::string(run.golden) + ".predictions.json")),
          std::string(run.which) + " predictions snapshot");
    const auto score = cli::Run({"evaluate", Fixture("references.json"), out, "--format", "tsv"});
    check(score.exit_code == 0, std::string(run.which) + " evaluate exit code");
    const std::string golden_scores =
        cli::Slurp(Golden(std::string(run.golden) + ".scores.tsv"));
    check(score.out == golden_scores, std::string(run.which) + " scores snapshot");
    check(OracleTsv(Triples(got)) == golden_scores,
          std::string(run.which) + " snapshot scores agree with the oracle");
  }
  // The snapshots themselves hold the hand-traced extractions.
  const auto ie = Triples(cli::Slurp(Golden("ie.predictions.json")));
  check(!ie.contains("q09"), "ie omits q09");
  check(ie.size() == 9, "ie covers nine instances");
  check(Has(ie.at("q01"), {"Return to Olympus", "is",
                           "the only album by the American rock band Malfunkshun"}),
        "ie q01 step 1");
  check(Has(ie.at("q05"), {"The Danube", "flows", "through Budapest"}), "ie q05");
  check(Has(ie.at("q10"), {"Marie Curie", "was awarded", "in 1903"}), "ie q10");
  const auto core = Triples(cli::Slurp(Golden("core.predictions.json")));
  check(core.size() == 10, "core covers all instances");
  check(Has(core.at("q02"), {"Sinister (film)", "is",
                             "a 2012 horror film directed by Scott Derrickson"}),
        "core q02 uses the title");
  check(core.at("q08").size() == 1, "core q08 skips the verbless sentence");
  check(Has(core.at("q09"), {"Mud", "formed", "everywhere"}), "core q09");
}

// --- 9 ----------------------------------------------------------------------

void Determinism(Check &check) {
  const std::string refs = Fixture("references.json");
  const std::string preds = Fixture("predictions.json");
  const std::string instances = Fixture("instances.json");
  const std::string parses = Fixture("parses.conllu");
  const std::string subs = Fixture("submissions.json");
  const std::string judg = Fixture("judgements.json");
  const std::string max_threads =
      std::to_string(std::max(64u, 4 * std::thread::hardware_concurrency()));

  // Each command may write files named out1, out2, ...; stdout, stderr and
  // the files are compared across two runs.
  const std::vector<std::vector<std::string>> commands = {
      {"evaluate", refs, preds},
      {"evaluate", refs, preds, "--format", "tsv", "--threads", "0"},
      {"evaluate", refs, preds, "--threads", max_threads, "-o", "@out1"},
      {"evaluate", refs, preds, "--aggregate", "micro", "--similarity", "exact"},
      {"evaluate", refs, preds, "--refs-k", "2", "--ablation", "all-subsets", "--threads", "0"},
      {"evaluate", refs, preds, "--gstar-policy", "f1", "--summary"},
      {"baseline", "ie", instances, "--parses", parses},
      {"baseline", "core", instances, "--parses", parses, "-o", "@out1"},
      {"baseline", "core", instances, "--fallback", "--core-span", "token"},
      {"pipeline", subs, judg, "-o", "@out1", "--stats", "@out2"},
      {"pipeline", subs, judg, "--retain-policy", "sample3", "--seed", "5"},
      {"agreement", judg},
      {"validate", refs},
      {"validate", parses, "--instances", instances},
      {"synth", "--seed", "8", "--perturb", "none,drop-step,relation-edit,phrase-noise",
       "--refs-out", "@out1", "--preds-out", "@out2", "--manifest", "@out3"},
      {"synth", "--seed", "8", "--refs-out", "@out1", "--preds-out", "@out2"},
  };
  for (const auto &cmd : commands) {
    std::string label;
    for (const auto &a : cmd) label += (label.empty() ? "" : " ") + a.substr(a.rfind('/') + 1);
    std::vector<std::string> captured[2];
    for (int run = 0; run < 2; ++run) {
      cli::TempDir dir;
      std::vector<std::string> args;
      std::vector<std::string> files;
      for (const auto &a : cmd) {
        if (a.rfind("@", 0) == 0) {
          files.push_back(dir / a.substr(1));
          args.push_back(files.back());
        } else {
          args.push_back(a);
        }
      }
      const auto r = cli::Run(args);
      check(r.exit_code == 0, label + ": exit " + std::to_string(r.exit_code));
      captured[run] = {r.out, r.err};
      for (const auto &f : files) captured[run].push_back(cli::Slurp(f));
    }
    check(captured[0] == captured[1], label + ": outputs differ between runs");
  }
  // Thread count never shows in the output.
  const auto one = cli::Run({"evaluate", refs, preds, "--threads", "1"});
  const auto many = cli::Run({"evaluate", refs, preds, "--threads", max_threads});
  const auto all = cli::Run({"evaluate", refs, preds, "--threads", "0"});
  check(one.out == many.out && one.out == all.out, "thread counts change evaluate output");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked alignment example", 1.0, FigureExample},
      {2, "alignment equals brute-force maximum", 10000.0, AlignmentOracle},
      {3, "metric bounds", 10000.0, MetricBounds},
      {4, "identity and monotonicity", 5000.0, IdentityAndMonotonicity},
      {5, "Levenshtein exhaustive cross-check", 30000.0, LevenshteinExhaustive},
      {6, "Krippendorff alpha", 0.0, Alpha},
      {7, "annotation pipeline rules", 0.0, Pipeline},
      {8, "baselines end to end", 0.0, Baselines},
      {9, "CLI determinism", 0.0, Determinism},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception &e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    bool ok = check.ok();
    std::string note;
    if (c.limit_ms > 0.0 && ms >= c.limit_ms) {
      ok = false;
      std::ostringstream limit;
      limit << " over the " << c.limit_ms << " ms limit";
      note = limit.str();
    }
    line << (ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.name
         << " (" << ms << " ms)" << note;
    if (!check.ok()) line << " " << check.Summary();
    std::printf("%s\n", line.str().c_str());
    if (!ok) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
