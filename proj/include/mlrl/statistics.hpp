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

#include "mlrl/losses.hpp"
#include "mlrl/numeric.hpp"

namespace mlrl {

// Weighted sums of gradient vectors and Hessian matrices over a set of covered
// examples.
class StatSum {
 public:
  StatSum() = default;
  explicit StatSum(std::size_t label_count)
      : gradients_(label_count, 0.0), hessians_(label_count) {}

  std::size_t label_count() const { return gradients_.size(); }

  const DenseVector& sum_gradients() const { return gradients_; }
  const PackedSymmetric& sum_hessians() const { return hessians_; }
  double covered_weight() const { return covered_weight_; }

  // Adds weight * stats. O(L^2).
  void add(std::span<const double> gradients,
           std::span<const double> packed_hessians, double weight);
  void add(const ExampleStats& stats, double weight) {
    add(stats.gradients, stats.hessians.entries(), weight);
  }

  void clear();

  bool operator==(const StatSum&) const = default;

 private:
  friend StatSum subtract_from_total(const StatSum& total,
                                     const StatSum& partial);

  DenseVector gradients_;
  PackedSymmetric hessians_;
  double covered_weight_ = 0.0;
};

StatSum add_example(StatSum sum, const ExampleStats& stats, double weight);

// total - partial, where partial was accumulated over a subset of total's
// examples. Throws NegativeWeight if partial carries more weight than total.
StatSum subtract_from_total(const StatSum& total, const StatSum& partial);

}  // namespace mlrl
