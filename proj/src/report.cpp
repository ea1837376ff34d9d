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

#include "mlrl/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

#include "mlrl/error.hpp"

namespace mlrl {

namespace {

double ratio(double numerator, double denominator) {
  if (denominator > 0.0) return numerator / denominator;
  return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

}  // namespace

EvalResult RunReport::mean_metrics() const {
  EvalResult mean;
  if (folds.empty()) return mean;
  for (const auto& fold : folds) {
    mean.subset_zero_one += fold.metrics.subset_zero_one;
    mean.hamming += fold.metrics.hamming;
    mean.example_count += fold.metrics.example_count;
  }
  mean.subset_zero_one /= static_cast<double>(folds.size());
  mean.hamming /= static_cast<double>(folds.size());
  return mean;
}

double RunReport::mean_total_train_seconds() const {
  double sum = 0.0;
  for (const auto& fold : folds) sum += fold.total_train_seconds;
  return folds.empty() ? 0.0 : sum / static_cast<double>(folds.size());
}

double RunReport::mean_candidate_eval_seconds() const {
  double sum = 0.0;
  for (const auto& fold : folds) sum += fold.candidate_eval_seconds;
  return folds.empty() ? 0.0 : sum / static_cast<double>(folds.size());
}

nlohmann::json metrics_section(const RunReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& m = report.folds[f].metrics;
    folds.push_back({{"fold", f + 1},
                     {"subset_zero_one", m.subset_zero_one},
                     {"hamming", m.hamming},
                     {"example_count", m.example_count}});
  }
  const auto mean = report.mean_metrics();
  return {{"folds", std::move(folds)},
          {"mean",
           {{"subset_zero_one", mean.subset_zero_one},
            {"hamming", mean.hamming},
            {"example_count", mean.example_count}}}};
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json timing_folds = nlohmann::json::array();
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& fold = report.folds[f];
    timing_folds.push_back({{"fold", f + 1},
                            {"total_train_seconds", fold.total_train_seconds},
                            {"candidate_eval_seconds", fold.candidate_eval_seconds},
                            {"candidate_evaluations", fold.candidate_evaluations},
                            {"train_examples", fold.train_examples}});
  }
  return {{"config", report.config},
          {"dataset",
           {{"name", report.dataset.name},
            {"examples", report.dataset.examples},
            {"attributes", report.dataset.attributes},
            {"labels", report.dataset.labels}}},
          {"metrics", metrics_section(report)},
          {"timing",
           {{"folds", std::move(timing_folds)},
            {"mean",
             {{"total_train_seconds", report.mean_total_train_seconds()},
              {"candidate_eval_seconds", report.mean_candidate_eval_seconds()}}}}}};
}

RunReport report_from_json(const nlohmann::json& json) {
  RunReport report;
  try {
    report.config = json.at("config");
    const auto& dataset = json.at("dataset");
    report.dataset.name = dataset.at("name").get<std::string>();
    report.dataset.examples = dataset.at("examples").get<std::size_t>();
    report.dataset.attributes = dataset.at("attributes").get<std::size_t>();
    report.dataset.labels = dataset.at("labels").get<std::size_t>();
    const auto& metrics = json.at("metrics").at("folds");
    const auto& timing = json.at("timing").at("folds");
    if (metrics.size() != timing.size()) {
      throw ParseError("report has " + std::to_string(metrics.size()) +
                       " metric folds but " + std::to_string(timing.size()) +
                       " timing folds");
    }
    for (std::size_t f = 0; f < metrics.size(); ++f) {
      FoldReport fold;
      fold.metrics.subset_zero_one = metrics[f].at("subset_zero_one").get<double>();
      fold.metrics.hamming = metrics[f].at("hamming").get<double>();
      fold.metrics.example_count = metrics[f].at("example_count").get<std::size_t>();
      fold.total_train_seconds = timing[f].at("total_train_seconds").get<double>();
      fold.candidate_eval_seconds =
          timing[f].at("candidate_eval_seconds").get<double>();
      fold.candidate_evaluations =
          timing[f].at("candidate_evaluations").get<std::uint64_t>();
      fold.train_examples = timing[f].at("train_examples").get<std::size_t>();
      report.folds.push_back(fold);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string summary_table(const RunReport& report) {
  std::ostringstream out;
  out << "dataset " << report.dataset.name << ": " << report.dataset.examples
      << " examples, " << report.dataset.attributes << " attributes, "
      << report.dataset.labels << " labels\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %10s %10s %12s %12s %10s\n", "fold",
                "subset01", "hamming", "train[s]", "eval[s]", "eval%");
  out << line;
  const auto row = [&](const std::string& name, const EvalResult& m,
                       double train, double eval) {
    std::snprintf(line, sizeof(line), "%-6s %10s %10s %12s %12s %10s\n",
                  name.c_str(), fixed(m.subset_zero_one, 2).c_str(),
                  fixed(m.hamming, 2).c_str(), fixed(train, 3).c_str(),
                  fixed(eval, 3).c_str(),
                  fixed(train > 0.0 ? 100.0 * eval / train : 0.0, 1).c_str());
    out << line;
  };
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& fold = report.folds[f];
    row(std::to_string(f + 1), fold.metrics, fold.total_train_seconds,
        fold.candidate_eval_seconds);
  }
  row("mean", report.mean_metrics(), report.mean_total_train_seconds(),
      report.mean_candidate_eval_seconds());
  return out.str();
}

Comparison compare_runs(const RunReport& a, const RunReport& b) {
  if (!(a.dataset == b.dataset)) {
    throw IncompatibleReports("reports were produced on different datasets");
  }
  if (a.folds.size() != b.folds.size()) {
    throw IncompatibleReports("fold counts differ: " +
                              std::to_string(a.folds.size()) + " vs " +
                              std::to_string(b.folds.size()));
  }
  if (a.folds.empty()) throw IncompatibleReports("reports contain no folds");
  Comparison comparison;
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    const auto& x = a.folds[f];
    const auto& y = b.folds[f];
    if (x.metrics.example_count != y.metrics.example_count ||
        x.train_examples != y.train_examples) {
      throw IncompatibleReports("fold " + std::to_string(f + 1) +
                                " has different example counts");
    }
    comparison.folds.push_back(
        {ratio(x.total_train_seconds, y.total_train_seconds),
         ratio(x.candidate_eval_seconds, y.candidate_eval_seconds),
         y.metrics.subset_zero_one - x.metrics.subset_zero_one,
         y.metrics.hamming - x.metrics.hamming});
  }
  const auto mean_a = a.mean_metrics();
  const auto mean_b = b.mean_metrics();
  comparison.average = {
      ratio(a.mean_total_train_seconds(), b.mean_total_train_seconds()),
      ratio(a.mean_candidate_eval_seconds(), b.mean_candidate_eval_seconds()),
      mean_b.subset_zero_one - mean_a.subset_zero_one,
      mean_b.hamming - mean_a.hamming};
  return comparison;
}

nlohmann::json comparison_to_json(const Comparison& comparison) {
  const auto entry = [](const FoldComparison& c) {
    return nlohmann::json{{"speedup", c.speedup},
                          {"candidate_eval_speedup", c.candidate_eval_speedup},
                          {"subset_zero_one_delta", c.subset_zero_one_delta},
                          {"hamming_delta", c.hamming_delta}};
  };
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t f = 0; f < comparison.folds.size(); ++f) {
    auto item = entry(comparison.folds[f]);
    item["fold"] = f + 1;
    folds.push_back(std::move(item));
  }
  return {{"folds", std::move(folds)}, {"average", entry(comparison.average)}};
}

std::string comparison_table(const Comparison& comparison) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %10s %12s %12s %12s\n", "fold",
                "speedup", "eval-speedup", "d-subset01", "d-hamming");
  out << line;
  const auto row = [&](const std::string& name, const FoldComparison& c) {
    std::snprintf(line, sizeof(line), "%-8s %10s %12s %12s %12s\n", name.c_str(),
                  fixed(c.speedup, 2).c_str(),
                  fixed(c.candidate_eval_speedup, 2).c_str(),
                  fixed(c.subset_zero_one_delta, 2).c_str(),
                  fixed(c.hamming_delta, 2).c_str());
    out << line;
  };
  for (std::size_t f = 0; f < comparison.folds.size(); ++f) {
    row(std::to_string(f + 1), comparison.folds[f]);
  }
  row("average", comparison.average);
  return out.str();
}

}  // namespace mlrl
