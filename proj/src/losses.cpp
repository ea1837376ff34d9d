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

#include "mlrl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlrl/error.hpp"

namespace mlrl {

std::string_view LossFunction::name() const {
  switch (kind_) {
    case LossKind::example_wise_logistic:
      return "exwlog";
    case LossKind::label_wise_logistic:
      return "lwlog";
  }
  return "unknown";
}

LossFunction LossFunction::parse(std::string_view name) {
  if (name == "exwlog") return LossFunction(LossKind::example_wise_logistic);
  if (name == "lwlog") return LossFunction(LossKind::label_wise_logistic);
  throw InvalidArgument("unknown loss '" + std::string(name) +
                        "' (expected exwlog or lwlog)");
}

namespace {

void check_lengths(std::span<const LabelValue> truth,
                   std::span<const double> scores) {
  if (truth.size() != scores.size()) {
    throw DimensionMismatch("truth has " + std::to_string(truth.size()) +
                            " labels, scores have " +
                            std::to_string(scores.size()));
  }
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// 1 / (1 + exp(-z)) without overflow.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double loss_value(LossFunction loss, std::span<const LabelValue> truth,
                  std::span<const double> scores) {
  check_lengths(truth, scores);
  if (loss.decomposable()) {
    double sum = 0.0;
    for (std::size_t l = 0; l < truth.size(); ++l) {
      sum += softplus(-truth[l] * scores[l]);
    }
    return sum;
  }
  // Shift exponents by max(0, max_l z_l) so that none exceeds zero.
  double shift = 0.0;
  for (std::size_t l = 0; l < truth.size(); ++l) {
    shift = std::max(shift, -truth[l] * scores[l]);
  }
  double sum = std::exp(-shift);
  for (std::size_t l = 0; l < truth.size(); ++l) {
    sum += std::exp(-truth[l] * scores[l] - shift);
  }
  return shift + std::log(sum);
}

void example_stats_into(LossFunction loss, std::span<const LabelValue> truth,
                        std::span<const double> scores,
                        std::span<double> gradients,
                        std::span<double> packed_hessians) {
  check_lengths(truth, scores);
  const std::size_t n = truth.size();
  if (gradients.size() != n ||
      packed_hessians.size() != PackedSymmetric::packed_size(n)) {
    throw DimensionMismatch("example_stats: output storage does not match " +
                            std::to_string(n) + " labels");
  }

  if (loss.decomposable()) {
    std::fill(packed_hessians.begin(), packed_hessians.end(), 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      const double p = sigmoid(-truth[l] * scores[l]);
      gradients[l] = -truth[l] * p;
      packed_hessians[PackedSymmetric::index(l, l)] = p * (1.0 - p);
    }
    return;
  }

  // With z_l = -y_l f_l and p_l = exp(z_l) / (1 + sum_k exp(z_k)):
  //   g_l  = -y_l p_l
  //   h_ll = p_l (1 - p_l)
  //   h_lk = -y_l y_k p_l p_k   (l != k)
  double shift = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    shift = std::max(shift, -truth[l] * scores[l]);
  }
  double denominator = std::exp(-shift);
  for (std::size_t l = 0; l < n; ++l) {
    gradients[l] = std::exp(-truth[l] * scores[l] - shift);
    denominator += gradients[l];
  }
  // gradients temporarily holds y_l p_l, the signed probability
  for (std::size_t l = 0; l < n; ++l) {
    gradients[l] = truth[l] * (gradients[l] / denominator);
  }
  std::size_t k = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      packed_hessians[k++] = -gradients[r] * gradients[c];
    }
    const double p = std::abs(gradients[r]);
    packed_hessians[k++] = p * (1.0 - p);
  }
  for (std::size_t l = 0; l < n; ++l) gradients[l] = -gradients[l];
}

ExampleStats example_stats(LossFunction loss,
                           std::span<const LabelValue> truth,
                           std::span<const double> scores) {
  ExampleStats stats{DenseVector(truth.size()), PackedSymmetric(truth.size())};
  example_stats_into(loss, truth, scores, stats.gradients,
                     stats.hessians.entries());
  return stats;
}

}  // namespace mlrl
