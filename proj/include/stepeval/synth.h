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

#ifndef STEPEVAL_SYNTH_H_
#define STEPEVAL_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stepeval/corpus.h"

namespace stepeval {

enum class Perturbation {
  kNone,
  kDropStep,          // remove one step from the copied reference
  kRelationEdit,      // character edits inside one relation phrase
  kPhraseNoise,       // character edits inside heads and tails
};

std::string_view PerturbationName(Perturbation p);
std::optional<Perturbation> ParsePerturbationName(std::string_view name);

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t instances = 10;
  std::size_t references = 3;
  std::size_t min_steps = 2;
  std::size_t max_steps = 4;
  // Cycled across instances; instance i receives perturbations[i % size].
  std::vector<Perturbation> perturbations{Perturbation::kNone};
};

// What a perturbation must do to a metric, relative to a perfect score.
struct Expectation {
  std::string id;
  Perturbation perturbation = Perturbation::kNone;
  std::string scorer;    // "entity", "relation", "full"
  std::string metric;    // "precision", "recall", "f1"
  std::string relation;  // "eq1" (== 1), "lt1" (< 1), "le1" (<= 1)
};

struct SynthResult {
  DerivationSet references;
  DerivationSet predictions;
  std::vector<Expectation> expectations;
};

// Random reference derivations plus one prediction per instance, copied
// from the first reference and then perturbed. Fully determined by the
// options; no global RNG state is touched.
SynthResult Synthesize(const SynthOptions &options);

std::string ExpectationsToJson(const SynthOptions &options,
                               const std::vector<Expectation> &expectations);

}  // namespace stepeval

#endif  // STEPEVAL_SYNTH_H_
