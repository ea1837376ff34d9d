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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mlrl/dataset.hpp"
#include "mlrl/gblb.hpp"
#include "mlrl/losses.hpp"
#include "mlrl/rules.hpp"
#include "mlrl/statistics.hpp"

namespace mlrl {

struct TrainConfig {
  std::size_t rule_count = 5000;
  double shrinkage = 0.3;
  double l2_weight = 1.0;
  // Absent: every candidate is evaluated with the exact L-dimensional solve.
  std::optional<BinConfig> bins;
  // Fraction of attributes drawn per rule; absent means sqrt(A) / A.
  std::optional<double> feature_sample_fraction;
  bool instance_sampling = true;
  std::uint64_t seed = 1;
  LossFunction loss{LossKind::example_wise_logistic};
  // Worker threads for the per-attribute candidate scans.
  std::size_t threads = 1;

  void validate() const;
  std::size_t sampled_attribute_count(std::size_t attribute_count) const;
};

struct CandidateEvaluation {
  // One score per label, or one per non-empty bin when `mapping` is set.
  DenseVector scores;
  // g.p + 0.5 p.H.p on the (possibly aggregated) statistics; lower is better.
  double quality = 0.0;
  std::optional<BinMapping> mapping;

  // Scores per label.
  DenseVector head() const;
};

// Solves (H + R) p = -g for the candidate's summed statistics and rates the
// solution. With a bin configuration the labels are first grouped by their
// criteria and the system is solved in the reduced dimension.
CandidateEvaluation evaluate_candidate(const StatSum& stats, double l2_weight,
                                       const std::optional<BinConfig>& bins);

struct TrainTiming {
  double total_seconds = 0.0;
  // Time spent inside evaluate_candidate. For parallel attribute scans only the
  // slowest worker of each scan counts.
  double candidate_eval_seconds = 0.0;
  std::uint64_t candidate_evaluations = 0;

  TrainTiming& operator+=(const TrainTiming& other);
};

// Called for every evaluated refinement with the body accepted so far, the
// candidate condition and the statistics it was evaluated on.
using CandidateObserver = std::function<void(
    std::span<const Condition> body, const Condition& condition,
    const StatSum& stats)>;

// Greedy top-down rule search over a fixed training view. Holds the current
// per-example gradients and Hessians and presorted attribute orders.
class RuleInducer {
 public:
  RuleInducer(const DatasetView& data, const TrainConfig& config);

  // Recomputes the statistics of all examples from `scores` (N x L, indexed by
  // view position).
  void set_scores(std::span<const double> scores);
  // Recomputes the statistics of the given view positions only.
  void update_scores(std::span<const std::size_t> positions,
                     std::span<const double> scores);

  struct Result {
    Rule rule;
    // View positions covered by the rule body, weighted or not.
    std::vector<std::size_t> covered;
    double quality = 0.0;
  };

  // Induces one rule. `weights` has one entry per view position;
  // `attributes` lists the attribute indices that may appear in conditions.
  Result refine(std::span<const double> weights,
                std::span<const std::size_t> attributes,
                const CandidateObserver* observer = nullptr);

  // Exact solve over all examples with unit weights.
  Result default_rule();

  const TrainTiming& timing() const { return timing_; }

  std::span<const double> example_gradients(std::size_t position) const;
  std::span<const double> example_hessians(std::size_t position) const;

 private:
  struct ScanResult;

  CandidateEvaluation timed_evaluate(const StatSum& stats,
                                     const std::optional<BinConfig>& bins,
                                     TrainTiming& timing) const;
  StatSum covered_sum(std::span<const double> weights,
                      const std::vector<std::uint8_t>& covered) const;
  ScanResult scan_numerical(std::size_t attribute,
                            std::span<const double> weights,
                            const std::vector<std::uint8_t>& covered,
                            const StatSum& total,
                            std::span<const Condition> body,
                            const CandidateObserver* observer,
                            TrainTiming& timing) const;
  ScanResult scan_nominal(std::size_t attribute,
                          std::span<const double> weights,
                          const std::vector<std::uint8_t>& covered,
                          const StatSum& total, std::size_t total_count,
                          std::span<const Condition> body,
                          const CandidateObserver* observer,
                          TrainTiming& timing) const;

  DatasetView data_;
  TrainConfig config_;
  std::size_t label_count_;
  std::size_t packed_size_;
  std::vector<double> gradients_;
  std::vector<double> hessians_;
  // Per numerical attribute: view positions in ascending order of value.
  std::vector<std::vector<std::size_t>> sorted_;
  TrainTiming timing_;
};

// Induces a single rule given the ensemble's current scores (N x L, indexed by
// view position). Empty `weights` means unit weights; empty `attributes` means
// all attributes.
Rule refine_rule(const DatasetView& data, std::span<const double> scores,
                 const TrainConfig& config, std::span<const double> weights = {},
                 std::span<const std::size_t> attributes = {});

struct TrainResult {
  Ensemble ensemble;
  TrainTiming timing;
};

TrainResult train(const DatasetView& data, const TrainConfig& config);

}  // namespace mlrl
