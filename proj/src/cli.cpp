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

#include "mlrl/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlrl/error.hpp"
#include "mlrl/experiment.hpp"
#include "mlrl/report.hpp"

namespace mlrl::cli {

namespace {

constexpr const char* kUsage =
    "usage: mlrl [run] --data PATH [options] | mlrl compare A.json B.json\n";

// Parses the arguments; returns false when help was requested and printed.
bool parse(CLI::App& app, int argc, const char* const* argv, std::ostream& out) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  }
  return true;
}

SynthSpec parse_synth(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  for (std::string part; std::getline(stream, part, ',');) parts.push_back(part);
  if (parts.size() != 4) {
    throw CLI::ValidationError("--synth", "expected n,a,l,corr");
  }
  try {
    return {std::stoul(parts[0]), std::stoul(parts[1]), std::stoul(parts[2]),
            std::stod(parts[3])};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--synth", "expected n,a,l,corr");
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int run_compare(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Compare two run reports (speedup = time of A / time of B)",
               "mlrl compare"};
  std::string report_a, report_b, out_path;
  app.add_option("report_a", report_a, "Baseline report (JSON)")->required();
  app.add_option("report_b", report_b, "Report to compare (JSON)")->required();
  app.add_option("--out", out_path, "Write the comparison as JSON");
  if (!parse(app, argc, argv, out)) return kSuccess;

  const auto comparison = compare_runs(report_from_json(read_json(report_a)),
                                       report_from_json(read_json(report_b)));
  out << comparison_table(comparison);
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw Error("cannot write " + out_path);
    file << comparison_to_json(comparison).dump(2) << '\n';
  }
  return kSuccess;
}

int run_experiment_command(int argc, const char* const* argv, std::ostream& out,
                           std::ostream& err) {
  CLI::App app{"Train and cross-validate a multi-label boosted rule ensemble",
               "mlrl"};
  ExperimentOptions options;
  std::string format, synth, loss = "exwlog", bins = "none", impute = "none";
  std::size_t labels = 0;
  std::string labels_xml;
  std::string label_prefix;
  double feature_sample = 0.0;
  bool no_bagging = false;

  app.add_option("--data", options.data_path, "Dataset file (ARFF or CSV)");
  auto* labels_opt = app.add_option("--labels", labels,
                                    "Number of label attributes (trailing)");
  app.add_option("--labels-xml", labels_xml, "Label XML file naming the labels")
      ->excludes(labels_opt);
  app.add_option("--label-prefix", label_prefix,
                 "CSV label columns: name prefix");
  app.add_option("--format", format, "arff, csv or synth (default: by extension)")
      ->check(CLI::IsMember({"arff", "csv", "synth"}));
  app.add_option("--synth", synth, "Synthetic dataset n,a,l,corr");
  app.add_option("--loss", loss, "exwlog or lwlog")
      ->check(CLI::IsMember({"exwlog", "lwlog"}));
  app.add_option("--rules", options.train.rule_count, "Number of rules")
      ->check(CLI::PositiveNumber);
  app.add_option("--shrinkage", options.train.shrinkage, "Shrinkage in (0,1]");
  app.add_option("--l2", options.train.l2_weight, "L2 regularization weight");
  app.add_option("--bins", bins, "none, a fraction of the labels, or a count");
  app.add_option("--feature-sample", feature_sample,
                 "Fraction of attributes per rule (default sqrt(A)/A)");
  app.add_flag("--no-bagging", no_bagging, "Disable bootstrap sampling");
  app.add_option("--folds", options.folds, "Cross-validation folds")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", options.train.seed, "Random seed");
  app.add_option("--impute", impute, "none or meanmode")
      ->check(CLI::IsMember({"none", "meanmode"}));
  app.add_option("--out", options.report_path, "JSON report path");
  app.add_option("--model", options.model_path,
                 "Write the first fold's ensemble (.json or text)");
  app.add_option("--threads", options.train.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  if (!parse(app, argc, argv, out)) return kSuccess;

  if (format.empty()) {
    if (!synth.empty()) {
      format = "synth";
    } else {
      const auto& path = options.data_path;
      format = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0
                   ? "csv"
                   : "arff";
    }
  }
  if (format == "synth") {
    if (synth.empty()) throw CLI::RequiredError("--synth");
    options.format = DataFormat::synth;
    options.synth = parse_synth(synth);
  } else {
    if (options.data_path.empty()) throw CLI::RequiredError("--data");
    options.format = format == "csv" ? DataFormat::csv : DataFormat::arff;
  }
  if (labels > 0) options.label_count = labels;
  if (!labels_xml.empty()) options.label_xml = labels_xml;
  if (!label_prefix.empty()) options.label_prefix = label_prefix;
  options.imputation = impute == "meanmode" ? Imputation::mean_mode : Imputation::none;
  options.train.loss = LossFunction::parse(loss);
  options.train.instance_sampling = !no_bagging;
  if (feature_sample > 0.0) options.train.feature_sample_fraction = feature_sample;
  try {
    if (bins != "none") options.train.bins = BinConfig::parse(bins);
    options.train.validate();
  } catch (const InvalidArgument& e) {
    throw CLI::ValidationError(e.what());
  }

  const auto report = run_experiment(options, err);
  const auto table = summary_table(report);
  out << table;
  if (!options.report_path.empty()) {
    std::ofstream summary(options.report_path + ".txt");
    summary << table;
  }
  return kSuccess;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  const bool compare = argc > 1 && std::string(argv[1]) == "compare";
  const bool run = argc > 1 && std::string(argv[1]) == "run";
  try {
    if (compare) return run_compare(argc - 1, argv + 1, out);
    if (run) return run_experiment_command(argc - 1, argv + 1, out, err);
    return run_experiment_command(argc, argv, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << kUsage;
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace mlrl::cli
