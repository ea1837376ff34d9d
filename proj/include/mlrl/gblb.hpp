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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mlrl/numeric.hpp"
#include "mlrl/statistics.hpp"

namespace mlrl {

// How many bins labels may be grouped into when evaluating a candidate rule.
class BinConfig {
 public:
  enum class Strategy {
    // Equal-width bins, separately for negative and positive criteria.
    equal_width,
    // One bin per label with a non-zero criterion. Reproduces the exact solve;
    // used to validate the aggregation path.
    singleton,
  };

  // Budget as a fraction of the label count, in (0, 1].
  static BinConfig fraction(double fraction);
  // Budget as an absolute bin count, >= 1.
  static BinConfig count(std::size_t bins);
  static BinConfig singleton();

  // Parses "FRACTION" (contains '.' or 'e') or "INT".
  static BinConfig parse(const std::string& text);

  Strategy strategy() const { return strategy_; }
  bool is_fraction() const { return is_fraction_; }
  double budget() const { return budget_; }

  // max(1, ceil(fraction * L)) or the absolute count.
  std::size_t resolve(std::size_t label_count) const;

  std::string to_string() const;

  bool operator==(const BinConfig&) const = default;

 private:
  BinConfig(Strategy strategy, bool is_fraction, double budget)
      : strategy_(strategy), is_fraction_(is_fraction), budget_(budget) {}

  Strategy strategy_;
  bool is_fraction_;
  double budget_;
};

// Assignment of labels to bins. Bin indices are 0-based: negative bins are
// [0, negative_bin_count), positive bins follow. Labels with a zero criterion
// are assigned kZero and are excluded from every bin.
struct BinMapping {
  static constexpr std::uint32_t kZero = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> assignment;
  std::size_t negative_bin_count = 0;
  std::size_t positive_bin_count = 0;

  std::size_t label_count() const { return assignment.size(); }
  std::size_t bin_count() const {
    return negative_bin_count + positive_bin_count;
  }
  // Label indices per bin (including empty bins), in label order.
  std::vector<std::vector<std::size_t>> bins() const;
  // Indices of non-empty bins, ascending. These define the order of the
  // reduced system and of the scores passed to expand_head.
  std::vector<std::size_t> non_empty_bins() const;

  bool operator==(const BinMapping&) const = default;
};

struct AggregatedStats {
  DenseVector gradients;
  PackedSymmetric hessians;
  // Diagonal of the aggregated regularization matrix, l2 * |B_k|.
  DenseVector regularization;
  std::vector<std::size_t> bin_sizes;
};

// c_l = -g_l / (h_ll + l2), the optimal score for label l in isolation.
DenseVector criteria(const StatSum& sum, double l2_weight);

BinMapping map_to_bins(std::span<const double> criteria,
                       const BinConfig& config);

// Sums gradients, Hessians and regularization over the labels of each
// non-empty bin. Within-bin off-diagonal Hessians enter the bin's diagonal
// entry twice (once per ordering), so that the reduced quadratic objective
// equals the full objective under the constraint of equal scores per bin.
AggregatedStats aggregate(const BinMapping& mapping, const StatSum& sum,
                          double l2_weight);

// Scatters one score per non-empty bin back to all labels; zero-criterion
// labels receive 0.
DenseVector expand_head(const BinMapping& mapping,
                        std::span<const double> bin_scores);

}  // namespace mlrl
