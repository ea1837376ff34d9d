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

#include "mlrl/experiment.hpp"

#include <fstream>
#include <ostream>

#include "mlrl/error.hpp"
#include "mlrl/metrics.hpp"
#include "mlrl/rules.hpp"

namespace mlrl {

Dataset load_dataset(const ExperimentOptions& options) {
  const LoadOptions load{options.imputation};
  switch (options.format) {
    case DataFormat::synth:
      return synth_dataset(options.synth.examples, options.synth.attributes,
                           options.synth.labels, options.synth.label_correlation,
                           options.train.seed);
    case DataFormat::csv:
      if (options.label_prefix) {
        return load_csv(options.data_path, *options.label_prefix, load);
      }
      if (!options.label_count) {
        throw InvalidArgument("CSV data needs --labels N or --label-prefix");
      }
      return load_csv(options.data_path, *options.label_count, load);
    case DataFormat::arff:
      break;
  }
  ArffLabels labels;
  if (options.label_xml) {
    labels = load_label_xml(*options.label_xml);
  } else if (options.label_count) {
    labels = *options.label_count;
  }
  return load_arff(options.data_path, labels, load);
}

nlohmann::json config_echo(const ExperimentOptions& options,
                           std::size_t label_count) {
  const auto& train = options.train;
  nlohmann::json config{
      {"loss", std::string(train.loss.name())},
      {"rules", train.rule_count},
      {"shrinkage", train.shrinkage},
      {"l2", train.l2_weight},
      {"bins", train.bins ? train.bins->to_string() : "none"},
      {"bagging", train.instance_sampling},
      {"folds", options.folds},
      {"seed", train.seed},
      {"threads", train.threads},
  };
  if (train.bins) config["resolved_bins"] = train.bins->resolve(label_count);
  if (train.feature_sample_fraction) {
    config["feature_sample"] = *train.feature_sample_fraction;
  } else {
    config["feature_sample"] = "sqrt";
  }
  return config;
}

namespace {

LabelMatrix predict(const Ensemble& ensemble, const DatasetView& view) {
  const Dataset& dataset = *view.dataset;
  LabelMatrix predicted(view.size(), dataset.label_count());
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto labels = discretize(predict_scores(ensemble, dataset.row(view.example(i))));
    std::copy(labels.begin(), labels.end(), predicted.row(i).begin());
  }
  return predicted;
}

LabelMatrix truth(const DatasetView& view) {
  const Dataset& dataset = *view.dataset;
  LabelMatrix result(view.size(), dataset.label_count());
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto row = dataset.labels.row(view.example(i));
    std::copy(row.begin(), row.end(), result.row(i).begin());
  }
  return result;
}

void write_model(const Ensemble& ensemble, const Dataset& dataset,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model to " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    out << ensemble_to_json(ensemble, dataset.attributes).dump(1) << '\n';
  } else {
    write_rules_text(ensemble, dataset.attributes, out);
  }
}

}  // namespace

RunReport run_experiment(const ExperimentOptions& options, std::ostream& log) {
  const Dataset dataset = load_dataset(options);
  return run_experiment(dataset, options, log);
}

RunReport run_experiment(const Dataset& dataset,
                         const ExperimentOptions& options, std::ostream& log) {
  options.train.validate();
  if (options.folds < 1) throw InvalidFoldCount("fold count must be positive");

  RunReport report;
  report.config = config_echo(options, dataset.label_count());
  report.dataset = {dataset.name, dataset.example_count(),
                    dataset.attribute_count(), dataset.label_count()};

  std::vector<Fold> folds;
  if (options.folds == 1) {
    folds.push_back({full_view(dataset), full_view(dataset)});
  } else {
    folds = kfold_split(dataset, options.folds, options.train.seed);
  }

  for (std::size_t f = 0; f < folds.size(); ++f) {
    TrainConfig config = options.train;
    config.seed = options.train.seed + f;
    const auto trained = train(folds[f].train, config);

    FoldReport fold;
    fold.metrics = evaluate(truth(folds[f].test), predict(trained.ensemble, folds[f].test));
    fold.total_train_seconds = trained.timing.total_seconds;
    fold.candidate_eval_seconds = trained.timing.candidate_eval_seconds;
    fold.candidate_evaluations = trained.timing.candidate_evaluations;
    fold.train_examples = folds[f].train.size();
    report.folds.push_back(fold);

    log << "fold " << (f + 1) << "/" << folds.size()
        << ": subset01=" << fold.metrics.subset_zero_one
        << " hamming=" << fold.metrics.hamming
        << " train=" << fold.total_train_seconds << "s"
        << " eval=" << fold.candidate_eval_seconds << "s\n";

    if (f == 0 && !options.model_path.empty()) {
      write_model(trained.ensemble, dataset, options.model_path);
    }
  }

  if (!options.report_path.empty()) {
    std::ofstream out(options.report_path);
    if (!out) throw Error("cannot write report to " + options.report_path);
    out << report_to_json(report).dump(2) << '\n';
  }
  return report;
}

}  // namespace mlrl
