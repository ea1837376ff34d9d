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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlrl/losses.hpp"
#include "mlrl/numeric.hpp"
#include "mlrl/schema.hpp"
#include "json.hpp"

namespace mlrl {

enum class Operator { leq, gt, eq, neq };

std::string_view to_string(Operator op);
Operator parse_operator(std::string_view text);

// attribute <op> threshold. For nominal attributes the threshold is a category
// index.
struct Condition {
  std::size_t attribute = 0;
  Operator op = Operator::leq;
  double threshold = 0.0;

  bool satisfied_by(double value) const;

  bool operator==(const Condition&) const = default;
};

struct Rule {
  std::vector<Condition> body;  // empty body covers every example
  DenseVector head;

  bool operator==(const Rule&) const = default;
};

struct Ensemble {
  std::size_t label_count = 0;
  std::vector<Rule> rules;

  void add(Rule rule);

  bool operator==(const Ensemble&) const = default;
};

// Throws MissingValue if a referenced attribute value is NaN.
bool covers(const Rule& rule, std::span<const double> example);

DenseVector predict_scores(const Ensemble& ensemble,
                           std::span<const double> example);

// +1 where score > 0, -1 otherwise (including exact zeros).
std::vector<LabelValue> discretize(std::span<const double> scores);

// Checks operators against attribute kinds and category ranges.
void validate(const Ensemble& ensemble, std::span<const Attribute> attributes);

// One rule per line: IF <cond> & <cond> THEN (s1,...,sL). The empty body is
// written as TRUE.
void write_rules_text(const Ensemble& ensemble,
                      std::span<const Attribute> attributes, std::ostream& out);

nlohmann::json ensemble_to_json(const Ensemble& ensemble,
                                std::span<const Attribute> attributes);

struct Model {
  std::vector<Attribute> attributes;
  Ensemble ensemble;
};

Model model_from_json(const nlohmann::json& json);

}  // namespace mlrl
