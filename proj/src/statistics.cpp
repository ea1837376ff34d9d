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

#include "mlrl/statistics.hpp"

#include <algorithm>
#include <string>

#include "mlrl/error.hpp"

namespace mlrl {

void StatSum::add(std::span<const double> gradients,
                  std::span<const double> packed_hessians, double weight) {
  if (gradients.size() != gradients_.size() ||
      packed_hessians.size() != hessians_.entries().size()) {
    throw DimensionMismatch("cannot add statistics for " +
                            std::to_string(gradients.size()) +
                            " labels to a sum over " +
                            std::to_string(gradients_.size()));
  }
  if (weight < 0.0) throw NegativeWeight("example weight must not be negative");
  if (weight == 0.0) return;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    gradients_[i] += weight * gradients[i];
  }
  auto h = hessians_.entries();
  for (std::size_t i = 0; i < packed_hessians.size(); ++i) {
    h[i] += weight * packed_hessians[i];
  }
  covered_weight_ += weight;
}

void StatSum::clear() {
  std::fill(gradients_.begin(), gradients_.end(), 0.0);
  auto h = hessians_.entries();
  std::fill(h.begin(), h.end(), 0.0);
  covered_weight_ = 0.0;
}

StatSum add_example(StatSum sum, const ExampleStats& stats, double weight) {
  sum.add(stats, weight);
  return sum;
}

StatSum subtract_from_total(const StatSum& total, const StatSum& partial) {
  if (total.label_count() != partial.label_count()) {
    throw DimensionMismatch("cannot subtract sums over different label counts");
  }
  if (partial.covered_weight_ > total.covered_weight_) {
    throw NegativeWeight("partial sum carries more weight (" +
                         std::to_string(partial.covered_weight_) +
                         ") than the total (" +
                         std::to_string(total.covered_weight_) + ")");
  }
  StatSum result = total;
  for (std::size_t i = 0; i < result.gradients_.size(); ++i) {
    result.gradients_[i] -= partial.gradients_[i];
  }
  auto h = result.hessians_.entries();
  const auto p = partial.hessians_.entries();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] -= p[i];
  result.covered_weight_ -= partial.covered_weight_;
  return result;
}

}  // namespace mlrl
