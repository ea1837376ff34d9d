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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mlrl/dataset.hpp"
#include "mlrl/error.hpp"

using namespace mlrl;

namespace {

const std::string kFixtures = MLRL_FIXTURES;

Dataset arff(const std::string& text, const ArffLabels& labels,
             const LoadOptions& options = {}) {
  std::istringstream in(text);
  return parse_arff(in, labels, options);
}

Dataset csv(const std::string& text, const CsvLabels& labels,
            const LoadOptions& options = {}) {
  std::istringstream in(text);
  return parse_csv(in, labels, options);
}

Dataset round_trip(const Dataset& dataset) {
  std::ostringstream out;
  write_csv(dataset, out);
  return csv(out.str(), dataset.label_count());
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("dense ARFF fixture") {
  const auto d = load_arff(kFixtures + "/dense.arff", std::size_t{2});
  CHECK(d.name == "toy");
  CHECK(d.example_count() == 3);
  CHECK(d.attribute_count() == 2);
  CHECK(d.label_count() == 2);
  CHECK(d.features == std::vector<double>{0.5, 1.5, -2, 3, 7.25, 0});
  CHECK(d.labels.row(0)[0] == 1);
  CHECK(d.labels.row(0)[1] == -1);
  CHECK(d.labels.row(1)[0] == -1);
  CHECK(d.labels.row(2)[1] == 1);
  CHECK(d.label_names == std::vector<std::string>{"y1", "y2"});
}

TEST_CASE("sparse ARFF fixture with a label XML file") {
  const auto names = load_label_xml(kFixtures + "/labels.xml");
  CHECK(names == std::vector<std::string>{"lab1", "lab2"});
  const auto d = load_arff(kFixtures + "/sparse.arff", names);
  CHECK(d.attribute_count() == 3);
  CHECK(d.features == std::vector<double>{1.5, 0, 0, 0, 2, -1, 0, 0, 0});
  CHECK(d.labels.row(0)[0] == 1);
  CHECK(d.labels.row(0)[1] == -1);
  CHECK(d.labels.row(1)[0] == -1);
  CHECK(d.labels.row(1)[1] == 1);
  CHECK(d.labels.row(2)[0] == -1);
  // Same result from the trailing label count.
  CHECK(load_arff(kFixtures + "/sparse.arff", std::size_t{2}) == d);
}

TEST_CASE("ARFF label placement from the relation marker") {
  const auto d = arff(
      "@relation 'scene: -C 2'\n"
      "@attribute a {0,1}\n@attribute b {0,1}\n@attribute x numeric\n"
      "@data\n1,0,0.5\n0,1,1.5\n",
      std::monostate{});
  CHECK(d.label_names == std::vector<std::string>{"a", "b"});
  CHECK(d.attribute_count() == 1);
  CHECK(d.features == std::vector<double>{0.5, 1.5});
  CHECK_THROWS_AS(arff("@relation r\n@attribute x numeric\n@attribute y {0,1}\n@data\n1,1\n",
                       std::monostate{}),
                  ParseError);
}

TEST_CASE("ARFF nominal features and quoting") {
  const auto d = arff(
      "@relation r\n"
      "@attribute 'the color' {red, 'dark blue'}\n@attribute y {0,1}\n"
      "@data\n'dark blue',1\nred,0\n",
      std::size_t{1});
  CHECK(d.attributes[0].name == "the color");
  CHECK(d.attributes[0].kind == AttributeKind::nominal);
  CHECK(d.attributes[0].categories == std::vector<std::string>{"red", "dark blue"});
  CHECK(d.features == std::vector<double>{1, 0});
}

TEST_CASE("ARFF errors") {
  const std::string header = "@relation r\n@attribute x numeric\n@attribute y {0,1}\n";
  CHECK_THROWS_AS(arff(header + "@data\n", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(arff(header + "@data\n1,2\n", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(arff(header + "@data\nabc,1\n", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(arff(header + "@data\n1,1,1\n", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(arff(header + "@data\n1,?\n", std::size_t{1}), MissingValueError);
  CHECK_THROWS_AS(arff(header + "@data\n1,1\n", std::size_t{2}), ParseError);
  CHECK_THROWS_AS(arff(header + "@data\n1,1\n", std::vector<std::string>{"z"}), ParseError);
  try {
    arff(header + "@data\n1,0\n2,7\n", std::size_t{1});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }
}

TEST_CASE("missing features are rejected or imputed") {
  const std::string text =
      "@relation r\n@attribute x numeric\n@attribute c {a,b}\n@attribute y {0,1}\n"
      "@data\n1,b,1\n?,b,0\n3,?,1\n4,a,0\n";
  try {
    arff(text, std::size_t{1});
    FAIL("expected missing values to be rejected");
  } catch (const MissingValueError& e) {
    const std::string message = e.what();
    CHECK(message.find("example 1, attribute 'x'") != std::string::npos);
    CHECK(message.find("example 2, attribute 'c'") != std::string::npos);
  }
  const auto d = arff(text, std::size_t{1}, {Imputation::mean_mode});
  CHECK(d.feature(1, 0) == doctest::Approx(8.0 / 3));
  CHECK(d.feature(2, 1) == 1.0);
}

TEST_CASE("CSV with label columns and a nominal feature") {
  const auto d = load_csv(kFixtures + "/nominal.csv", std::size_t{2});
  CHECK(d.name == "nominal");
  CHECK(d.attribute_count() == 2);
  CHECK(d.label_count() == 2);
  CHECK(d.attributes[0].kind == AttributeKind::numerical);
  CHECK(d.attributes[1].kind == AttributeKind::nominal);
  CHECK(d.attributes[1].categories == std::vector<std::string>{"red", "blue"});
  CHECK(d.features == std::vector<double>{1.0, 0, 2.5, 1, 3.0, 0});
  CHECK(load_csv(kFixtures + "/nominal.csv", std::string("y")) == d);
}

TEST_CASE("CSV errors") {
  CHECK_THROWS_AS(csv("", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(csv("x,y\n", std::size_t{1}), ParseError);
  CHECK_THROWS_AS(csv("x,y\n1,0\n", std::string("z")), ParseError);
  CHECK_THROWS_AS(csv("x,y\n1,0,3\n", std::size_t{1}), ParseError);
  try {
    csv("x,y\n1,0\n2,2\n", std::size_t{1});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(csv("x,y\n1,yes\n", std::size_t{1}), ParseError);
}

TEST_CASE("CSV round trip") {
  const auto nominal = load_csv(kFixtures + "/nominal.csv", std::size_t{2});
  auto reloaded = round_trip(nominal);
  reloaded.name = nominal.name;
  CHECK(reloaded == nominal);

  auto synthetic = synth_dataset(50, 4, 3, 0.5, 9);
  auto again = round_trip(synthetic);
  again.name = synthetic.name;
  CHECK(again == synthetic);
}

TEST_CASE("synthetic datasets") {
  CHECK_THROWS_AS(synth_dataset(0, 2, 2, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(synth_dataset(5, 2, 2, 1.5, 1), InvalidArgument);
  const auto a = synth_dataset(100, 5, 4, 0.3, 7);
  CHECK(a == synth_dataset(100, 5, 4, 0.3, 7));
  CHECK_FALSE(a == synth_dataset(100, 5, 4, 0.3, 8));
  CHECK(std::all_of(a.features.begin(), a.features.end(),
                    [](double v) { return v >= 0.0 && v < 1.0; }));

  const auto correlated = synth_dataset(500, 6, 5, 1.0, 3);
  for (std::size_t l = 1; l < 5; ++l) {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < 500; ++i) {
      agree += correlated.labels(i, 0) == correlated.labels(i, l);
    }
    CHECK(static_cast<double>(agree) / 500.0 >= 0.99);
  }
}

TEST_CASE("k-fold splits") {
  const auto d = synth_dataset(10, 2, 2, 0.5, 1);
  const auto singletons = kfold_split(d, 10, 4);
  CHECK(singletons.size() == 10);
  for (const auto& fold : singletons) {
    CHECK(fold.test.size() == 1);
    CHECK(fold.train.size() == 9);
  }

  const auto big = synth_dataset(103, 2, 2, 0.5, 1);
  const auto folds = kfold_split(big, 7, 11);
  std::multiset<std::size_t> seen;
  for (const auto& fold : folds) {
    CHECK(fold.test.size() + fold.train.size() == 103);
    CHECK(std::is_sorted(fold.test.indices.begin(), fold.test.indices.end()));
    seen.insert(fold.test.indices.begin(), fold.test.indices.end());
    std::vector<std::size_t> overlap;
    std::set_intersection(fold.test.indices.begin(), fold.test.indices.end(),
                          fold.train.indices.begin(), fold.train.indices.end(),
                          std::back_inserter(overlap));
    CHECK(overlap.empty());
  }
  CHECK(seen.size() == 103);
  for (std::size_t i = 0; i < 103; ++i) CHECK(seen.count(i) == 1);

  const auto same = kfold_split(big, 7, 11);
  for (std::size_t f = 0; f < 7; ++f) CHECK(same[f].test.indices == folds[f].test.indices);

  CHECK_THROWS_AS(kfold_split(d, 1, 1), InvalidFoldCount);
  CHECK_THROWS_AS(kfold_split(d, 11, 1), InvalidFoldCount);
}

}  // TEST_SUITE
