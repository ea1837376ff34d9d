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
#include <iosfwd>
#include <optional>
#include <string>

#include "mlrl/dataset.hpp"
#include "mlrl/induction.hpp"
#include "mlrl/report.hpp"

namespace mlrl {

enum class DataFormat { arff, csv, synth };

struct SynthSpec {
  std::size_t examples = 0;
  std::size_t attributes = 0;
  std::size_t labels = 0;
  double label_correlation = 0.0;
};

struct ExperimentOptions {
  std::string data_path;
  DataFormat format = DataFormat::arff;
  std::optional<std::size_t> label_count;
  std::optional<std::string> label_xml;
  std::optional<std::string> label_prefix;
  SynthSpec synth;
  Imputation imputation = Imputation::none;
  TrainConfig train;
  // 1 trains on all examples and evaluates on the training data.
  std::size_t folds = 10;
  std::string report_path;
  // Ensemble of the first fold; JSON if the path ends in .json, text otherwise.
  std::string model_path;
};

Dataset load_dataset(const ExperimentOptions& options);

nlohmann::json config_echo(const ExperimentOptions& options,
                           std::size_t label_count);

// Cross-validates the configured learner. Progress goes to `log`; the JSON
// report and the model are written when their paths are set.
RunReport run_experiment(const ExperimentOptions& options, std::ostream& log);

// Runs the experiment on an already loaded dataset.
RunReport run_experiment(const Dataset& dataset,
                         const ExperimentOptions& options, std::ostream& log);

}  // namespace mlrl
