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
#include <string>
#include <vector>

#include "json.hpp"
#include "mlrl/metrics.hpp"

namespace mlrl {

struct FoldReport {
  EvalResult metrics;
  double total_train_seconds = 0.0;
  double candidate_eval_seconds = 0.0;
  std::uint64_t candidate_evaluations = 0;
  std::size_t train_examples = 0;

  bool operator==(const FoldReport&) const = default;
};

struct DatasetSummary {
  std::string name;
  std::size_t examples = 0;
  std::size_t attributes = 0;
  std::size_t labels = 0;

  bool operator==(const DatasetSummary&) const = default;
};

struct RunReport {
  nlohmann::json config = nlohmann::json::object();
  DatasetSummary dataset;
  std::vector<FoldReport> folds;

  EvalResult mean_metrics() const;
  double mean_total_train_seconds() const;
  double mean_candidate_eval_seconds() const;

  bool operator==(const RunReport&) const = default;
};

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& json);

// Only the deterministic part of the report: per-fold and mean metrics.
nlohmann::json metrics_section(const RunReport& report);

// Fixed-width table, percentages with two decimals.
std::string summary_table(const RunReport& report);

struct FoldComparison {
  double speedup = 0.0;            // train time a / train time b
  double candidate_eval_speedup = 0.0;
  double subset_zero_one_delta = 0.0;  // b - a, percentage points
  double hamming_delta = 0.0;
};

struct Comparison {
  std::vector<FoldComparison> folds;
  // Ratio of mean train times and difference of mean metrics.
  FoldComparison average;
};

// Throws IncompatibleReports unless both runs share dataset and fold layout.
Comparison compare_runs(const RunReport& a, const RunReport& b);
nlohmann::json comparison_to_json(const Comparison& comparison);
std::string comparison_table(const Comparison& comparison);

}  // namespace mlrl
