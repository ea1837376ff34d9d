// Copyright 2026 The mlrl Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mlrl {

using DenseVector = std::vector<double>;

// Symmetric matrix storing only its lower triangle, row by row. Element (r, c)
// with r >= c lives at r * (r + 1) / 2 + c. The layout is identical to the
// column-major upper-triangular packing used by Lapack ('U').
class PackedSymmetric {
 public:
  PackedSymmetric() = default;
  explicit PackedSymmetric(std::size_t order)
      : order_(order), entries_(packed_size(order), 0.0) {}
  PackedSymmetric(std::size_t order, std::vector<double> entries);

  static constexpr std::size_t packed_size(std::size_t order) {
    return order * (order + 1) / 2;
  }
  static constexpr std::size_t index(std::size_t row, std::size_t col) {
    return row >= col ? row * (row + 1) / 2 + col : col * (col + 1) / 2 + row;
  }

  static PackedSymmetric identity(std::size_t order);

  std::size_t order() const { return order_; }

  double operator()(std::size_t row, std::size_t col) const {
    return entries_[index(row, col)];
  }
  double& operator()(std::size_t row, std::size_t col) {
    return entries_[index(row, col)];
  }

  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }

  bool operator==(const PackedSymmetric&) const = default;

 private:
  std::size_t order_ = 0;
  std::vector<double> entries_;
};

// Solves coefficients * x = ordinates with a pivoted symmetric indefinite
// (Bunch-Kaufman) factorization. Throws SingularSystem on a zero pivot.
DenseVector solve_symmetric(const PackedSymmetric& coefficients,
                            std::span<const double> ordinates);

// Same as above for (coefficients + diag(diagonal_addend)). The input matrix is
// left untouched; this is how the L2 regularization enters the solve.
DenseVector solve_symmetric(const PackedSymmetric& coefficients,
                            std::span<const double> diagonal_addend,
                            std::span<const double> ordinates);

DenseVector sym_mat_vec(const PackedSymmetric& matrix,
                        std::span<const double> vector);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace mlrl
