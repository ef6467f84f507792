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

#include "stepeval/align.h"

#include <algorithm>
#include <limits>
#include <string>

#include "stepeval/error.h"

namespace stepeval {
namespace {

// Hungarian method (shortest augmenting path with potentials) maximizing the
// total weight of a perfect matching on an n x n matrix. Returns the column
// assigned to each row.
std::vector<std::size_t> HungarianMax(const std::vector<double> &weights,
                                      std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; index 0 is the virtual source column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cost = -weights[(i0 - 1) * n + (j - 1)];
        const double cur = cost - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

double SortedSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

// Optimal score over the rows and columns not yet taken.
double OptimalValue(const ScoreMatrix &matrix,
                    const std::vector<bool> &row_free,
                    const std::vector<bool> &col_free) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    if (row_free[r]) rows.push_back(r);
  }
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    if (col_free[c]) cols.push_back(c);
  }
  if (rows.empty() || cols.empty()) return 0.0;
  const std::size_t n = std::max(rows.size(), cols.size());
  std::vector<double> square(n * n, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      square[i * n + j] = matrix.at(rows[i], cols[j]);
    }
  }
  const std::vector<std::size_t> assign = HungarianMax(square, n);
  std::vector<double> picked;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (assign[i] < cols.size()) picked.push_back(square[i * n + assign[i]]);
  }
  return SortedSum(std::move(picked));
}

void Enumerate(std::size_t row, std::size_t n_d, std::size_t n_g,
               std::size_t target, std::vector<bool> &col_used,
               Alignment &current,
               const std::function<void(const Alignment &)> &visit) {
  const std::size_t remaining_rows = n_d - row;
  if (current.size() == target) {
    visit(current);
    return;
  }
  if (current.size() + remaining_rows < target) return;
  for (std::size_t c = 0; c < n_g; ++c) {
    if (col_used[c]) continue;
    col_used[c] = true;
    current.pairs.emplace_back(row, c);
    Enumerate(row + 1, n_d, n_g, target, col_used, current, visit);
    current.pairs.pop_back();
    col_used[c] = false;
  }
  // Leave this row unmatched; only possible while enough rows remain.
  Enumerate(row + 1, n_d, n_g, target, col_used, current, visit);
}

}  // namespace

ScoreMatrix ScoreMatrix::FromValues(std::size_t rows, std::size_t cols,
                                    std::vector<double> values) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument,
                "score matrix expects " + std::to_string(rows * cols) +
                    " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score matrix entries must lie in [0, 1]");
    }
  }
  ScoreMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.values_ = std::move(values);
  return m;
}

ScoreMatrix ScoreMatrix::Transposed() const {
  ScoreMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

double AlignmentScore(const ScoreMatrix &matrix, const Alignment &alignment) {
  std::vector<bool> row_seen(matrix.rows(), false);
  std::vector<bool> col_seen(matrix.cols(), false);
  std::vector<double> picked;
  picked.reserve(alignment.size());
  for (const auto &[d, g] : alignment.pairs) {
    if (d >= matrix.rows() || g >= matrix.cols()) {
      throw Error(ErrorCode::kIndexOutOfBounds,
                  "pair (" + std::to_string(d) + ", " + std::to_string(g) +
                      ") outside " + std::to_string(matrix.rows()) + "x" +
                      std::to_string(matrix.cols()) + " matrix");
    }
    if (row_seen[d] || col_seen[g]) {
      throw Error(ErrorCode::kDuplicateIndex,
                  "alignment is not one-to-one at pair (" + std::to_string(d) +
                      ", " + std::to_string(g) + ")");
    }
    row_seen[d] = true;
    col_seen[g] = true;
    picked.push_back(matrix.at(d, g));
  }
  return SortedSum(std::move(picked));
}

void ForEachAlignment(std::size_t n_d, std::size_t n_g,
                      const std::function<void(const Alignment &)> &visit) {
  if (n_d > kMaxEnumerationSide || n_g > kMaxEnumerationSide) {
    throw Error(ErrorCode::kSizeLimitExceeded,
                "alignment enumeration limited to " +
                    std::to_string(kMaxEnumerationSide) + " steps per side");
  }
  std::vector<bool> col_used(n_g, false);
  Alignment current;
  Enumerate(0, n_d, n_g, std::min(n_d, n_g), col_used, current, visit);
}

std::vector<Alignment> EnumerateAlignments(std::size_t n_d, std::size_t n_g) {
  std::vector<Alignment> out;
  ForEachAlignment(n_d, n_g, [&out](const Alignment &a) { out.push_back(a); });
  return out;
}

AlignmentResult BestAlignment(const ScoreMatrix &matrix) {
  if (matrix.empty()) {
    throw Error(ErrorCode::kEmptyMatrix, "cannot align an empty matrix");
  }
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  std::vector<bool> row_free(rows, true);
  std::vector<bool> col_free(cols, true);
  const double optimum = OptimalValue(matrix, row_free, col_free);
  const double tolerance = 1e-12 * std::max(1.0, optimum);

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion. This yields the lexicographically smallest optimal
  // pair list.
  AlignmentResult result;
  std::vector<double> fixed_values;
  std::size_t free_cols = cols;
  for (std::size_t r = 0; r < rows && free_cols > 0; ++r) {
    row_free[r] = false;
    const double fixed = SortedSum(fixed_values);
    for (std::size_t c = 0; c < cols; ++c) {
      if (!col_free[c]) continue;
      col_free[c] = false;
      const double rest = OptimalValue(matrix, row_free, col_free);
      if (fixed + matrix.at(r, c) + rest >= optimum - tolerance) {
        result.alignment.pairs.emplace_back(r, c);
        fixed_values.push_back(matrix.at(r, c));
        --free_cols;
        break;
      }
      col_free[c] = true;
    }
  }
  result.score = AlignmentScore(matrix, result.alignment);
  return result;
}

}  // namespace stepeval
