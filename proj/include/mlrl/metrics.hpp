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

#include "mlrl/dataset.hpp"

namespace mlrl {

// Percentages in [0, 100].
struct EvalResult {
  double subset_zero_one = 0.0;
  double hamming = 0.0;
  std::size_t example_count = 0;

  bool operator==(const EvalResult&) const = default;
};

double subset_zero_one(const LabelMatrix& truth, const LabelMatrix& predicted);
double hamming(const LabelMatrix& truth, const LabelMatrix& predicted);
EvalResult evaluate(const LabelMatrix& truth, const LabelMatrix& predicted);

}  // namespace mlrl
