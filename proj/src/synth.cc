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

#include "stepeval/synth.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "json_util.h"
#include "stepeval/error.h"

namespace stepeval {
namespace {

constexpr const char *kSyllables[] = {
    "ka", "ro", "mi", "ten", "lor", "va", "shi", "dun", "bel", "ya",
    "gor", "fi", "nam", "ur", "zel", "po", "qua", "rin", "set", "ho"};
constexpr std::size_t kSyllableCount = std::size(kSyllables);

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, n); plain modulo keeps the stream portable across
  // standard library implementations.
  std::size_t Below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::string Word() {
    std::string w;
    const std::size_t parts = 2 + Below(2);
    for (std::size_t i = 0; i < parts; ++i) w += kSyllables[Below(kSyllableCount)];
    return w;
  }

  std::string Phrase(std::size_t min_words, std::size_t max_words) {
    const std::size_t n = min_words + Below(max_words - min_words + 1);
    std::string p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) p += ' ';
      p += Word();
    }
    return p;
  }

  // One or two random character edits; never returns the input.
  std::string Edit(const std::string &text) {
    std::string out = text;
    const std::size_t edits = 1 + Below(2);
    for (std::size_t e = 0; e < edits; ++e) {
      const char letter = static_cast<char>('a' + Below(26));
      const std::size_t op = out.size() > 1 ? Below(3) : Below(2);
      const std::size_t at = Below(out.size());
      if (op == 0) {
        out[at] = out[at] == letter ? (letter == 'z' ? 'a' : letter + 1) : letter;
      } else if (op == 1) {
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), letter);
      } else {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(at));
      }
    }
    if (out == text) out += 'x';
    return out;
  }

  template <typename T>
  void Shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }

 private:
  std::mt19937_64 rng_;
};

// Draws until `make` yields a phrase not yet used in this instance.
template <typename Make>
std::string Fresh(std::set<std::string> &used, Make make) {
  while (true) {
    std::string p = make();
    if (used.insert(p).second) return p;
  }
}

void Expect(std::vector<Expectation> &out, const std::string &id,
            Perturbation p, const char *scorer, const char *metric,
            const char *relation) {
  out.push_back(Expectation{id, p, scorer, metric, relation});
}

}  // namespace

std::string_view PerturbationName(Perturbation p) {
  switch (p) {
    case Perturbation::kNone: return "none";
    case Perturbation::kDropStep: return "drop-step";
    case Perturbation::kRelationEdit: return "relation-edit";
    case Perturbation::kPhraseNoise: return "phrase-noise";
  }
  return "none";
}

std::optional<Perturbation> ParsePerturbationName(std::string_view name) {
  for (Perturbation p : {Perturbation::kNone, Perturbation::kDropStep,
                         Perturbation::kRelationEdit,
                         Perturbation::kPhraseNoise}) {
    if (PerturbationName(p) == name) return p;
  }
  return std::nullopt;
}

SynthResult Synthesize(const SynthOptions &options) {
  if (options.references < 1 || options.min_steps < 2 ||
      options.max_steps < options.min_steps || options.perturbations.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "synth needs >= 1 reference, min_steps >= 2, "
                "max_steps >= min_steps and at least one perturbation");
  }
  Generator gen(options.seed);
  SynthResult result;
  char id_buf[32];
  for (std::size_t i = 0; i < options.instances; ++i) {
    std::snprintf(id_buf, sizeof(id_buf), "synth-%05zu", i + 1);
    const std::string id = id_buf;
    // Every phrase is unique within its instance, so no step can score a
    // perfect match against anything but its own copy.
    std::set<std::string> used;
    ReferenceSet refs;
    refs.question_id = id;
    for (std::size_t r = 0; r < options.references; ++r) {
      Derivation d;
      const std::size_t steps =
          options.min_steps + gen.Below(options.max_steps - options.min_steps + 1);
      for (std::size_t s = 0; s < steps; ++s) {
        DerivationStep step;
        step.head = stepeval::Phrase(Fresh(used, [&] { return gen.Phrase(1, 3); }));
        step.relation = stepeval::Phrase(
            Fresh(used, [&] { return "is " + gen.Phrase(1, 2); }));
        step.tail = stepeval::Phrase(Fresh(used, [&] { return gen.Phrase(1, 3); }));
        d.steps.push_back(std::move(step));
      }
      refs.references.push_back(std::move(d));
    }

    const Perturbation p =
        options.perturbations[i % options.perturbations.size()];
    Derivation pred = refs.references.front();
    switch (p) {
      case Perturbation::kNone:
        break;
      case Perturbation::kDropStep:
        pred.steps.erase(pred.steps.begin() +
                         static_cast<std::ptrdiff_t>(gen.Below(pred.size())));
        break;
      case Perturbation::kRelationEdit: {
        auto &rel = pred.steps[gen.Below(pred.size())].relation;
        const std::string original = rel.text();
        rel = stepeval::Phrase(Fresh(used, [&] { return gen.Edit(original); }));
        break;
      }
      case Perturbation::kPhraseNoise: {
        const std::size_t forced = gen.Below(pred.size());
        for (std::size_t s = 0; s < pred.size(); ++s) {
          if (s != forced && gen.Below(2) == 0) continue;
          for (stepeval::Phrase *field : {&pred.steps[s].head, &pred.steps[s].tail}) {
            const std::string original = field->text();
            *field = stepeval::Phrase(Fresh(used, [&] { return gen.Edit(original); }));
          }
        }
        break;
      }
    }
    gen.Shuffle(pred.steps);

    switch (p) {
      case Perturbation::kNone:
        for (const char *s : {"entity", "relation", "full"}) {
          for (const char *m : {"precision", "recall", "f1"}) {
            Expect(result.expectations, id, p, s, m, "eq1");
          }
        }
        break;
      case Perturbation::kDropStep:
        for (const char *s : {"entity", "relation", "full"}) {
          Expect(result.expectations, id, p, s, "precision", "eq1");
          Expect(result.expectations, id, p, s, "recall", "lt1");
          Expect(result.expectations, id, p, s, "f1", "lt1");
        }
        break;
      case Perturbation::kRelationEdit:
        for (const char *m : {"precision", "recall", "f1"}) {
          Expect(result.expectations, id, p, "entity", m, "eq1");
          Expect(result.expectations, id, p, "relation", m, "lt1");
          Expect(result.expectations, id, p, "full", m, "lt1");
        }
        break;
      case Perturbation::kPhraseNoise:
        for (const char *m : {"precision", "recall", "f1"}) {
          Expect(result.expectations, id, p, "entity", m, "lt1");
          Expect(result.expectations, id, p, "relation", m, "eq1");
          Expect(result.expectations, id, p, "full", m, "lt1");
        }
        break;
    }

    ReferenceSet prediction;
    prediction.question_id = id;
    prediction.references.push_back(std::move(pred));
    result.predictions.entries.emplace(id, std::move(prediction));
    result.references.entries.emplace(id, std::move(refs));
  }
  return result;
}

std::string ExpectationsToJson(const SynthOptions &options,
                               const std::vector<Expectation> &expectations) {
  using internal::Json;
  Json doc = Json::object();
  doc["seed"] = options.seed;
  doc["instances"] = options.instances;
  doc["references"] = options.references;
  Json perturbations = Json::array();
  for (Perturbation p : options.perturbations) {
    perturbations.push_back(std::string(PerturbationName(p)));
  }
  doc["perturbations"] = std::move(perturbations);
  Json list = Json::array();
  for (const auto &e : expectations) {
    Json item = Json::object();
    item["id"] = e.id;
    item["perturbation"] = std::string(PerturbationName(e.perturbation));
    item["scorer"] = e.scorer;
    item["metric"] = e.metric;
    item["expect"] = e.relation;
    list.push_back(std::move(item));
  }
  doc["expectations"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace stepeval
