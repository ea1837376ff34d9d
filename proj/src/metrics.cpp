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

#include "mlrl/metrics.hpp"

#include <string>

#include "mlrl/error.hpp"

namespace mlrl {

namespace {

void check_shapes(const LabelMatrix& truth, const LabelMatrix& predicted) {
  if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols()) {
    throw ShapeMismatch("truth is " + std::to_string(truth.rows()) + "x" +
                        std::to_string(truth.cols()) + ", prediction is " +
                        std::to_string(predicted.rows()) + "x" +
                        std::to_string(predicted.cols()));
  }
  if (truth.rows() == 0 || truth.cols() == 0) {
    throw ShapeMismatch("cannot evaluate an empty label matrix");
  }
}

}  // namespace

double subset_zero_one(const LabelMatrix& truth, const LabelMatrix& predicted) {
  check_shapes(truth, predicted);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < truth.rows(); ++r) {
    for (std::size_t c = 0; c < truth.cols(); ++c) {
      if (truth(r, c) != predicted(r, c)) {
        ++wrong;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(truth.rows());
}

double hamming(const LabelMatrix& truth, const LabelMatrix& predicted) {
  check_shapes(truth, predicted);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < truth.rows(); ++r) {
    for (std::size_t c = 0; c < truth.cols(); ++c) {
      wrong += truth(r, c) != predicted(r, c);
    }
  }
  return 100.0 * static_cast<double>(wrong) /
         static_cast<double>(truth.rows() * truth.cols());
}

EvalResult evaluate(const LabelMatrix& truth, const LabelMatrix& predicted) {
  return {subset_zero_one(truth, predicted), hamming(truth, predicted),
          truth.rows()};
}

}  // namespace mlrl
