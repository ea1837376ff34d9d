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

#include "mlrl/numeric.hpp"

#include <cmath>
#include <string>

#include "mlrl/error.hpp"

extern "C" {
void dspsv_(const char* uplo, const int* n, const int* nrhs, double* ap,
            int* ipiv, double* b, const int* ldb, int* info);
}

namespace mlrl {

PackedSymmetric::PackedSymmetric(std::size_t order, std::vector<double> entries)
    : order_(order), entries_(std::move(entries)) {
  if (entries_.size() != packed_size(order_)) {
    throw DimensionMismatch("packed symmetric matrix of order " +
                            std::to_string(order_) + " needs " +
                            std::to_string(packed_size(order_)) +
                            " entries, got " + std::to_string(entries_.size()));
  }
}

PackedSymmetric PackedSymmetric::identity(std::size_t order) {
  PackedSymmetric result(order);
  for (std::size_t i = 0; i < order; ++i) result(i, i) = 1.0;
  return result;
}

namespace {

DenseVector solve_packed_in_place(std::vector<double>& packed,
                                  std::span<const double> ordinates) {
  const int n = static_cast<int>(ordinates.size());
  DenseVector solution(ordinates.begin(), ordinates.end());
  if (n == 0) return solution;
  const int nrhs = 1;
  int info = 0;
  std::vector<int> pivots(n);
  dspsv_("U", &n, &nrhs, packed.data(), pivots.data(), solution.data(), &n,
         &info);
  if (info > 0) {
    throw SingularSystem("zero pivot at position " + std::to_string(info) +
                         " of a symmetric system of order " +
                         std::to_string(n));
  }
  if (info < 0) {
    throw Error("dspsv rejected argument " + std::to_string(-info));
  }
  for (double v : solution) {
    if (!std::isfinite(v)) {
      throw SingularSystem("non-finite solution of a symmetric system");
    }
  }
  return solution;
}

void check_order(const PackedSymmetric& matrix, std::size_t length,
                 const char* what) {
  if (matrix.order() != length) {
    throw DimensionMismatch(std::string(what) + ": matrix of order " +
                            std::to_string(matrix.order()) +
                            " combined with vector of length " +
                            std::to_string(length));
  }
}

}  // namespace

DenseVector solve_symmetric(const PackedSymmetric& coefficients,
                            std::span<const double> ordinates) {
  check_order(coefficients, ordinates.size(), "solve_symmetric");
  std::vector<double> packed(coefficients.entries().begin(),
                             coefficients.entries().end());
  return solve_packed_in_place(packed, ordinates);
}

DenseVector solve_symmetric(const PackedSymmetric& coefficients,
                            std::span<const double> diagonal_addend,
                            std::span<const double> ordinates) {
  check_order(coefficients, ordinates.size(), "solve_symmetric");
  check_order(coefficients, diagonal_addend.size(), "solve_symmetric");
  std::vector<double> packed(coefficients.entries().begin(),
                             coefficients.entries().end());
  for (std::size_t i = 0; i < diagonal_addend.size(); ++i) {
    packed[PackedSymmetric::index(i, i)] += diagonal_addend[i];
  }
  return solve_packed_in_place(packed, ordinates);
}

DenseVector sym_mat_vec(const PackedSymmetric& matrix,
                        std::span<const double> vector) {
  check_order(matrix, vector.size(), "sym_mat_vec");
  const std::size_t n = vector.size();
  DenseVector result(n, 0.0);
  const auto entries = matrix.entries();
  std::size_t k = 0;
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < r; ++c, ++k) {
      acc += entries[k] * vector[c];
      result[c] += entries[k] * vector[r];
    }
    acc += entries[k++] * vector[r];
    result[r] += acc;
  }
  return result;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot: lengths " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace mlrl
