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

#include <sstream>

#include "doctest.h"
#include "mlrl/error.hpp"
#include "mlrl/experiment.hpp"
#include "mlrl/report.hpp"

using namespace mlrl;

namespace {

RunReport make_report(std::vector<double> train_seconds, double subset = 20.0) {
  RunReport report;
  report.config = {{"rules", 10}};
  report.dataset = {"toy", 20, 3, 2};
  for (double seconds : train_seconds) {
    report.folds.push_back({{subset, subset / 4, 10}, seconds, seconds / 2, 100, 10});
  }
  return report;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("JSON round trip is lossless") {
  auto report = make_report({1.0 / 3, 2.5});
  report.folds[1].metrics.subset_zero_one = 100.0 / 7;
  const auto text = report_to_json(report).dump(2);
  const auto back = report_from_json(nlohmann::json::parse(text));
  CHECK(back == report);

  const auto json = report_to_json(report);
  CHECK(json.at("metrics").at("folds").size() == 2);
  CHECK(json.at("metrics").at("mean").at("hamming").get<double>() ==
        doctest::Approx(5.0));
  CHECK(json.at("timing").at("folds")[0].at("candidate_eval_seconds").get<double>() ==
        1.0 / 6);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("summary table uses two decimals for metrics") {
  const auto table = summary_table(make_report({1.0}, 100.0 / 3));
  CHECK(table.find("33.33") != std::string::npos);
  CHECK(table.find("8.33") != std::string::npos);
  CHECK(table.find("mean") != std::string::npos);
}

TEST_CASE("comparisons") {
  const auto a = make_report({100, 100});
  const auto same = compare_runs(a, a);
  CHECK(same.average.speedup == 1.0);
  CHECK(same.average.subset_zero_one_delta == 0.0);
  CHECK(same.average.hamming_delta == 0.0);

  const auto b = make_report({50, 50}, 22.0);
  const auto faster = compare_runs(a, b);
  CHECK(faster.folds.size() == 2);
  CHECK(faster.folds[0].speedup == 2.0);
  CHECK(faster.average.speedup == 2.0);
  CHECK(faster.average.candidate_eval_speedup == 2.0);
  CHECK(faster.average.subset_zero_one_delta == doctest::Approx(2.0));

  const auto json = comparison_to_json(faster);
  CHECK(json.at("average").at("speedup").get<double>() == 2.0);
  CHECK(comparison_table(faster).find("2.00") != std::string::npos);

  CHECK_THROWS_AS(compare_runs(a, make_report({50})), IncompatibleReports);
  auto other = make_report({50, 50});
  other.dataset.name = "other";
  CHECK_THROWS_AS(compare_runs(a, other), IncompatibleReports);
}

TEST_CASE("configuration echo resolves the bin budget") {
  ExperimentOptions options;
  options.train.bins = BinConfig::fraction(0.04);
  const auto echo = config_echo(options, 14);
  CHECK(echo.at("bins") == "0.04");
  CHECK(echo.at("resolved_bins") == 1);
  CHECK(echo.at("rules") == 5000);
  CHECK(echo.at("feature_sample") == "sqrt");
}

TEST_CASE("experiments report every fold") {
  const auto d = synth_dataset(60, 4, 3, 0.5, 3);
  ExperimentOptions options;
  options.train.rule_count = 8;
  options.folds = 3;
  std::ostringstream log;
  const auto report = run_experiment(d, options, log);
  REQUIRE(report.folds.size() == 3);
  std::size_t tested = 0;
  for (const auto& fold : report.folds) {
    tested += fold.metrics.example_count;
    CHECK(fold.candidate_eval_seconds <= fold.total_train_seconds);
    CHECK(fold.metrics.hamming <= fold.metrics.subset_zero_one);
  }
  CHECK(tested == 60);
  CHECK(report.dataset.examples == 60);

  options.folds = 1;
  const auto whole = run_experiment(d, options, log);
  CHECK(whole.folds.size() == 1);
  CHECK(whole.folds[0].metrics.example_count == 60);
  CHECK(whole.folds[0].train_examples == 60);

  options.folds = 61;
  CHECK_THROWS_AS(run_experiment(d, options, log), InvalidFoldCount);
}

}  // TEST_SUITE
