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

#include "mlrl/rules.hpp"

#include <cmath>
#include <ostream>

#include "mlrl/error.hpp"
#include "mlrl/format.hpp"

namespace mlrl {

std::string_view to_string(Operator op) {
  switch (op) {
    case Operator::leq:
      return "<=";
    case Operator::gt:
      return ">";
    case Operator::eq:
      return "=";
    case Operator::neq:
      return "!=";
  }
  return "?";
}

Operator parse_operator(std::string_view text) {
  if (text == "<=") return Operator::leq;
  if (text == ">") return Operator::gt;
  if (text == "=") return Operator::eq;
  if (text == "!=") return Operator::neq;
  throw ParseError("unknown operator '" + std::string(text) + "'");
}

bool Condition::satisfied_by(double value) const {
  switch (op) {
    case Operator::leq:
      return value <= threshold;
    case Operator::gt:
      return value > threshold;
    case Operator::eq:
      return value == threshold;
    case Operator::neq:
      return value != threshold;
  }
  return false;
}

void Ensemble::add(Rule rule) {
  if (rule.head.size() != label_count) {
    throw DimensionMismatch("rule head has " + std::to_string(rule.head.size()) +
                            " scores, ensemble predicts " +
                            std::to_string(label_count) + " labels");
  }
  rules.push_back(std::move(rule));
}

bool covers(const Rule& rule, std::span<const double> example) {
  for (const auto& condition : rule.body) {
    if (condition.attribute >= example.size()) {
      throw DimensionMismatch("condition references attribute " +
                              std::to_string(condition.attribute) +
                              " of an example with " +
                              std::to_string(example.size()));
    }
    const double value = example[condition.attribute];
    if (std::isnan(value)) {
      throw MissingValue("value of attribute " +
                         std::to_string(condition.attribute) + " is missing");
    }
    if (!condition.satisfied_by(value)) return false;
  }
  return true;
}

DenseVector predict_scores(const Ensemble& ensemble,
                           std::span<const double> example) {
  DenseVector scores(ensemble.label_count, 0.0);
  for (const auto& rule : ensemble.rules) {
    if (!covers(rule, example)) continue;
    for (std::size_t l = 0; l < scores.size(); ++l) scores[l] += rule.head[l];
  }
  return scores;
}

std::vector<LabelValue> discretize(std::span<const double> scores) {
  std::vector<LabelValue> labels(scores.size());
  for (std::size_t l = 0; l < scores.size(); ++l) {
    labels[l] = scores[l] > 0.0 ? +1 : -1;
  }
  return labels;
}

void validate(const Ensemble& ensemble, std::span<const Attribute> attributes) {
  for (const auto& rule : ensemble.rules) {
    if (rule.head.size() != ensemble.label_count) {
      throw DimensionMismatch("rule head length differs from label count");
    }
    for (const auto& condition : rule.body) {
      if (condition.attribute >= attributes.size()) {
        throw InvalidArgument("condition references unknown attribute " +
                              std::to_string(condition.attribute));
      }
      const auto& attribute = attributes[condition.attribute];
      const bool numerical_op =
          condition.op == Operator::leq || condition.op == Operator::gt;
      if (numerical_op != (attribute.kind == AttributeKind::numerical)) {
        throw InvalidArgument("operator " + std::string(to_string(condition.op)) +
                              " does not apply to attribute '" +
                              attribute.name + "'");
      }
      if (!numerical_op &&
          (condition.threshold < 0 ||
           condition.threshold >= static_cast<double>(attribute.categories.size()) ||
           condition.threshold != std::floor(condition.threshold))) {
        throw InvalidArgument("category index out of range for attribute '" +
                              attribute.name + "'");
      }
    }
  }
}

void write_rules_text(const Ensemble& ensemble,
                      std::span<const Attribute> attributes, std::ostream& out) {
  for (const auto& rule : ensemble.rules) {
    out << "IF ";
    if (rule.body.empty()) out << "TRUE";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      const auto& condition = rule.body[i];
      if (i > 0) out << " & ";
      const auto& attribute = attributes[condition.attribute];
      out << attribute.name << ' ' << to_string(condition.op) << ' ';
      if (attribute.kind == AttributeKind::nominal) {
        out << '"'
            << attribute.categories[static_cast<std::size_t>(condition.threshold)]
            << '"';
      } else {
        out << format_double(condition.threshold);
      }
    }
    out << " THEN (";
    for (std::size_t l = 0; l < rule.head.size(); ++l) {
      if (l > 0) out << ',';
      out << format_double(rule.head[l]);
    }
    out << ")\n";
  }
}

nlohmann::json ensemble_to_json(const Ensemble& ensemble,
                                std::span<const Attribute> attributes) {
  nlohmann::json json;
  json["label_count"] = ensemble.label_count;
  auto& schema = json["attributes"] = nlohmann::json::array();
  for (const auto& attribute : attributes) {
    nlohmann::json entry{{"name", attribute.name},
                         {"kind", attribute.kind == AttributeKind::nominal
                                      ? "nominal"
                                      : "numerical"}};
    if (attribute.kind == AttributeKind::nominal) {
      entry["categories"] = attribute.categories;
    }
    schema.push_back(std::move(entry));
  }
  auto& rules = json["rules"] = nlohmann::json::array();
  for (const auto& rule : ensemble.rules) {
    nlohmann::json body = nlohmann::json::array();
    for (const auto& condition : rule.body) {
      body.push_back({{"attribute", condition.attribute},
                      {"operator", to_string(condition.op)},
                      {"threshold", condition.threshold}});
    }
    rules.push_back({{"body", std::move(body)}, {"head", rule.head}});
  }
  return json;
}

Model model_from_json(const nlohmann::json& json) {
  Model model;
  try {
    for (const auto& entry : json.at("attributes")) {
      Attribute attribute;
      attribute.name = entry.at("name").get<std::string>();
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "nominal") {
        attribute.kind = AttributeKind::nominal;
        attribute.categories =
            entry.at("categories").get<std::vector<std::string>>();
      } else if (kind != "numerical") {
        throw ParseError("unknown attribute kind '" + kind + "'");
      }
      model.attributes.push_back(std::move(attribute));
    }
    model.ensemble.label_count = json.at("label_count").get<std::size_t>();
    for (const auto& entry : json.at("rules")) {
      Rule rule;
      for (const auto& condition : entry.at("body")) {
        rule.body.push_back(
            {condition.at("attribute").get<std::size_t>(),
             parse_operator(condition.at("operator").get<std::string>()),
             condition.at("threshold").get<double>()});
      }
      rule.head = entry.at("head").get<DenseVector>();
      model.ensemble.add(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
  validate(model.ensemble, model.attributes);
  return model;
}

}  // namespace mlrl
