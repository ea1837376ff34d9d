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

#include <cstdint>
#include <span>
#include <string_view>

#include "mlrl/numeric.hpp"

namespace mlrl {

// Ground-truth label values are stored as -1 (irrelevant) and +1 (relevant).
using LabelValue = std::int8_t;

enum class LossKind {
  // log(1 + sum_l exp(-y_l f_l)); couples all labels.
  example_wise_logistic,
  // sum_l log(1 + exp(-y_l f_l)); independent per label.
  label_wise_logistic,
};

class LossFunction {
 public:
  constexpr explicit LossFunction(LossKind kind) : kind_(kind) {}

  constexpr LossKind kind() const { return kind_; }
  constexpr bool decomposable() const {
    return kind_ == LossKind::label_wise_logistic;
  }

  std::string_view name() const;
  static LossFunction parse(std::string_view name);

  bool operator==(const LossFunction&) const = default;

 private:
  LossKind kind_;
};

// First and second derivatives of the loss for one example, with respect to
// the ensemble's current scores.
struct ExampleStats {
  DenseVector gradients;
  PackedSymmetric hessians;
};

double loss_value(LossFunction loss, std::span<const LabelValue> truth,
                  std::span<const double> scores);

ExampleStats example_stats(LossFunction loss,
                           std::span<const LabelValue> truth,
                           std::span<const double> scores);

// Writes the statistics into preallocated storage; used in the training loop
// to avoid reallocating per example.
void example_stats_into(LossFunction loss, std::span<const LabelValue> truth,
                        std::span<const double> scores,
                        std::span<double> gradients,
                        std::span<double> packed_hessians);

}  // namespace mlrl
