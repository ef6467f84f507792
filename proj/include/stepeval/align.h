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

#ifndef STEPEVAL_ALIGN_H_
#define STEPEVAL_ALIGN_H_

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace stepeval {

// Dense |D| x |G| matrix of step similarities, row-major.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  // Takes ownership of `values` (row-major, rows * cols entries). Throws
  // kInvalidArgument when the size does not match or an entry is outside
  // [0, 1].
  static ScoreMatrix FromValues(std::size_t rows, std::size_t cols,
                                std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double at(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double &at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<const double> values() const { return values_; }

  ScoreMatrix Transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// A one-to-one partial pairing of predicted (d) and golden (g) step indices,
// kept sorted by d index.
struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const Alignment &, const Alignment &) = default;
};

// Sum of the matrix entries selected by `alignment`. The entries are added
// in ascending order, so two alignments picking the same multiset of values
// score bit-identically.
//
// Throws kIndexOutOfBounds or kDuplicateIndex.
double AlignmentScore(const ScoreMatrix &matrix, const Alignment &alignment);

// Largest side accepted by EnumerateAlignments.
inline constexpr std::size_t kMaxEnumerationSide = 8;

// Visits every maximal one-to-one pairing between n_d rows and n_g columns
// exactly once. Used as the brute-force reference for BestAlignment.
//
// Throws kSizeLimitExceeded when either side exceeds kMaxEnumerationSide.
void ForEachAlignment(std::size_t n_d, std::size_t n_g,
                      const std::function<void(const Alignment &)> &visit);

std::vector<Alignment> EnumerateAlignments(std::size_t n_d, std::size_t n_g);

struct AlignmentResult {
  Alignment alignment;
  double score = 0.0;
};

// Maximum-weight one-to-one alignment by the Hungarian method on the
// zero-padded square matrix. Among alignments with the optimal score the
// lexicographically smallest pair list is returned; padding pairs are
// dropped.
//
// Throws kEmptyMatrix.
AlignmentResult BestAlignment(const ScoreMatrix &matrix);

}  // namespace stepeval

#endif  // STEPEVAL_ALIGN_H_
