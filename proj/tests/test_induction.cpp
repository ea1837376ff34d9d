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
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mlrl/error.hpp"
#include "mlrl/induction.hpp"
#include "oracles.hpp"

using namespace mlrl;

namespace {

const LossFunction kExampleWise{LossKind::example_wise_logistic};

StatSum make_sum(const DenseVector& g, const oracle::Matrix& h) {
  StatSum sum(g.size());
  PackedSymmetric packed(g.size());
  for (std::size_t r = 0; r < g.size(); ++r) {
    for (std::size_t c = 0; c <= r; ++c) packed(r, c) = h[r][c];
  }
  sum.add(g, packed.entries(), 1.0);
  return sum;
}

StatSum random_sum(std::size_t labels, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 2.0);
  StatSum sum(labels);
  for (int i = 0; i < 6; ++i) {
    std::vector<LabelValue> y(labels);
    DenseVector f(labels);
    for (std::size_t l = 0; l < labels; ++l) {
      y[l] = rng() % 2 ? 1 : -1;
      f[l] = normal(rng);
    }
    sum.add(example_stats(kExampleWise, y, f), 1.0);
  }
  return sum;
}

// Quality of the exact solve, computed with dense elimination.
double oracle_quality(const StatSum& sum, double lambda) {
  const std::size_t n = sum.label_count();
  oracle::Matrix h(n, std::vector<double>(n)), regularized;
  DenseVector minus_g(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) h[r][c] = sum.sum_hessians()(r, c);
    minus_g[r] = -sum.sum_gradients()[r];
  }
  regularized = h;
  for (std::size_t r = 0; r < n; ++r) regularized[r][r] += lambda;
  const auto p = oracle::gauss_solve(regularized, minus_g);
  const auto hp = oracle::mat_vec(h, p);
  double q = 0.0;
  for (std::size_t r = 0; r < n; ++r) q += -p[r] * minus_g[r] + 0.5 * p[r] * hp[r];
  return q;
}

Dataset numeric_dataset(std::vector<std::vector<double>> rows,
                        std::vector<std::vector<int>> labels) {
  Dataset d;
  for (std::size_t a = 0; a < rows[0].size(); ++a) {
    d.attributes.push_back({"x" + std::to_string(a + 1), AttributeKind::numerical, {}});
  }
  for (std::size_t l = 0; l < labels[0].size(); ++l) d.label_names.push_back("y" + std::to_string(l + 1));
  d.labels = LabelMatrix(rows.size(), labels[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.features.insert(d.features.end(), rows[i].begin(), rows[i].end());
    for (std::size_t l = 0; l < labels[i].size(); ++l) d.labels(i, l) = static_cast<LabelValue>(labels[i][l]);
  }
  return d;
}

double training_loss(const Dataset& d, const Ensemble& ensemble, LossFunction loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.example_count(); ++i) {
    total += loss_value(loss, d.labels.row(i), predict_scores(ensemble, d.row(i)));
  }
  return total;
}

TrainConfig exact_config(std::size_t rules) {
  TrainConfig config;
  config.rule_count = rules;
  config.instance_sampling = false;
  config.feature_sample_fraction = 1.0;
  return config;
}

}  // namespace

TEST_SUITE("induction") {

TEST_CASE("configuration defaults and validation") {
  const TrainConfig config;
  CHECK(config.rule_count == 5000);
  CHECK(config.shrinkage == 0.3);
  CHECK(config.l2_weight == 1.0);
  CHECK_FALSE(config.bins.has_value());
  CHECK(config.instance_sampling);
  CHECK(config.sampled_attribute_count(20) == 5);
  CHECK(config.sampled_attribute_count(16) == 4);
  CHECK(config.sampled_attribute_count(1) == 1);
  TrainConfig half;
  half.feature_sample_fraction = 0.5;
  CHECK(half.sampled_attribute_count(20) == 10);
  CHECK(half.sampled_attribute_count(3) == 2);

  TrainConfig bad;
  bad.shrinkage = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = TrainConfig{};
  bad.rule_count = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = TrainConfig{};
  bad.feature_sample_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = TrainConfig{};
  bad.threads = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("candidate evaluation examples") {
  const auto single = evaluate_candidate(make_sum({-0.5}, {{0.25}}), 1.0, std::nullopt);
  CHECK(single.scores[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(single.quality == doctest::Approx(-0.18).epsilon(1e-14));
  CHECK_FALSE(single.mapping.has_value());

  const auto zero = evaluate_candidate(make_sum({0, 0}, {{1, 0.5}, {0.5, 1}}), 1.0, std::nullopt);
  CHECK(zero.scores == DenseVector{0, 0});
  CHECK(zero.quality == 0.0);

  CHECK_THROWS_AS(evaluate_candidate(make_sum({1, 1}, {{0, 0}, {0, 0}}), 0.0, std::nullopt),
                  SingularSystem);
}

TEST_CASE("singleton bins reproduce the exact evaluation") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sum = random_sum(1 + trial % 10, rng);
    const auto exact = evaluate_candidate(sum, 1.0, std::nullopt);
    const auto binned = evaluate_candidate(sum, 1.0, BinConfig::singleton());
    REQUIRE(binned.mapping.has_value());
    const auto head = binned.head();
    for (std::size_t l = 0; l < head.size(); ++l) {
      CHECK(std::abs(head[l] - exact.scores[l]) <= 1e-10);
    }
    CHECK(std::abs(binned.quality - exact.quality) <= 1e-10);
    CHECK(exact.quality == doctest::Approx(oracle_quality(sum, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("binned quality is never better than the exact one") {
  // The binned head is a constrained optimum of the regularized model, so its
  // regularized objective cannot beat the exact head.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t labels = 2 + trial % 9;
    const auto sum = random_sum(labels, rng);
    const double lambda = 1.0;
    const auto objective = [&](const DenseVector& p) {
      const auto hp = sym_mat_vec(sum.sum_hessians(), p);
      return dot(p, sum.sum_gradients()) + 0.5 * dot(p, hp) + 0.5 * lambda * dot(p, p);
    };
    const auto exact = evaluate_candidate(sum, lambda, std::nullopt);
    for (std::size_t bins : {1, 2, 3}) {
      const auto binned = evaluate_candidate(sum, lambda, BinConfig::count(bins));
      CHECK(objective(binned.head()) >= objective(exact.scores) - 1e-10);
    }
  }
}

TEST_CASE("stronger aligned gradients give lower quality") {
  const oracle::Matrix h{{0.5, 0.1}, {0.1, 0.5}};
  const auto weak = evaluate_candidate(make_sum({-0.2, 0.1}, h), 1.0, std::nullopt);
  const auto strong = evaluate_candidate(make_sum({-0.4, 0.2}, h), 1.0, std::nullopt);
  CHECK(strong.quality < weak.quality);
}

TEST_CASE("a separating attribute yields a midpoint condition") {
  const auto d = numeric_dataset({{1}, {2}, {3}, {4}}, {{1, -1}, {1, -1}, {-1, 1}, {-1, 1}});
  const auto view = full_view(d);
  const auto config = exact_config(2);
  const std::vector<double> scores(8, 0.0);
  const auto rule = refine_rule(view, scores, config);

  // Exhaustive enumeration of all single conditions with batch statistics.
  double best_quality = std::numeric_limits<double>::infinity();
  Condition best;
  for (double threshold : {1.5, 2.5, 3.5}) {
    for (auto op : {Operator::leq, Operator::gt}) {
      const Condition condition{0, op, threshold};
      StatSum sum(2);
      for (std::size_t i = 0; i < 4; ++i) {
        if (!condition.satisfied_by(d.feature(i, 0))) continue;
        sum.add(example_stats(kExampleWise, d.labels.row(i), DenseVector{0, 0}), 1.0);
      }
      const double q = oracle_quality(sum, 1.0);
      if (q < best_quality - 1e-12) {
        best_quality = q;
        best = condition;
      }
    }
  }
  REQUIRE(rule.body.size() == 1);
  CHECK(rule.body[0] == best);
  CHECK(rule.body[0] == Condition{0, Operator::leq, 2.5});
  CHECK(rule.head[0] > 0.0);
  CHECK(rule.head[1] < 0.0);
}

TEST_CASE("a separating nominal attribute yields an equality condition") {
  Dataset d = numeric_dataset({{0}, {1}, {2}, {1}}, {{1, -1}, {-1, 1}, {1, -1}, {-1, 1}});
  d.attributes[0] = {"color", AttributeKind::nominal, {"red", "blue", "green"}};
  const auto rule = refine_rule(full_view(d), std::vector<double>(8, 0.0), exact_config(2));
  REQUIRE(rule.body.size() == 1);
  CHECK(rule.body[0] == Condition{0, Operator::eq, 1});
}

TEST_CASE("constant features leave the body empty") {
  const auto d = numeric_dataset({{5, 1}, {5, 1}, {5, 1}}, {{1, -1}, {-1, -1}, {1, 1}});
  const auto view = full_view(d);
  const auto config = exact_config(2);
  const std::vector<double> scores(6, 0.0);
  const auto rule = refine_rule(view, scores, config);
  CHECK(rule.body.empty());

  StatSum total(2);
  for (std::size_t i = 0; i < 3; ++i) {
    total.add(example_stats(kExampleWise, d.labels.row(i), DenseVector{0, 0}), 1.0);
  }
  const auto exact = evaluate_candidate(total, 1.0, std::nullopt);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(rule.head[l] == doctest::Approx(0.3 * exact.scores[l]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(train(view, config), DegenerateData);
  CHECK(train(view, exact_config(1)).ensemble.rules.size() == 1);
}

TEST_CASE("refinement never worsens the empty-body quality") {
  const auto d = synth_dataset(120, 6, 4, 0.4, 3);
  const auto view = full_view(d);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    TrainConfig config = exact_config(2);
    if (trial % 2) config.bins = BinConfig::count(2);
    RuleInducer inducer(view, config);
    std::vector<double> scores(120 * 4);
    for (auto& s : scores) s = normal(rng);
    inducer.set_scores(scores);
    std::vector<double> weights(120);
    for (auto& w : weights) w = static_cast<double>(rng() % 3);
    StatSum total(4);
    for (std::size_t p = 0; p < 120; ++p) {
      total.add(inducer.example_gradients(p), inducer.example_hessians(p), weights[p]);
    }
    const double empty = evaluate_candidate(total, 1.0, config.bins).quality;
    const std::vector<std::size_t> attributes{0, 1, 2, 3, 4, 5};
    const auto result = inducer.refine(weights, attributes);
    CHECK(result.quality <= empty);
    for (auto p : result.covered) CHECK(covers(result.rule, d.row(p)));
  }
}

TEST_CASE("incremental statistics match batch recomputation") {
  auto d = synth_dataset(80, 4, 3, 0.5, 8);
  // One nominal attribute built from the first feature.
  d.attributes[3] = {"bucket", AttributeKind::nominal, {"a", "b", "c"}};
  for (std::size_t i = 0; i < 80; ++i) {
    d.features[i * 4 + 3] = std::floor(d.feature(i, 0) * 3.0);
  }
  const auto view = full_view(d);
  TrainConfig config = exact_config(2);
  RuleInducer inducer(view, config);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<double> scores(80 * 3);
  for (auto& s : scores) s = normal(rng);
  inducer.set_scores(scores);
  std::vector<double> weights(80);
  for (auto& w : weights) w = static_cast<double>(rng() % 3);

  std::size_t checked = 0;
  double worst = 0.0;
  const CandidateObserver observer = [&](std::span<const Condition> body,
                                         const Condition& condition, const StatSum& stats) {
    if (checked++ % 3 != 0) return;
    StatSum batch(3);
    for (std::size_t p = 0; p < 80; ++p) {
      const auto row = d.row(p);
      const bool in_body = std::all_of(body.begin(), body.end(), [&](const Condition& c) {
        return c.satisfied_by(row[c.attribute]);
      });
      if (in_body && condition.satisfied_by(row[condition.attribute])) {
        batch.add(inducer.example_gradients(p), inducer.example_hessians(p), weights[p]);
      }
    }
    for (std::size_t l = 0; l < 3; ++l) {
      worst = std::max(worst, std::abs(batch.sum_gradients()[l] - stats.sum_gradients()[l]));
    }
    const auto a = batch.sum_hessians().entries();
    const auto b = stats.sum_hessians().entries();
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(batch.covered_weight() == doctest::Approx(stats.covered_weight()));
  };
  const std::vector<std::size_t> attributes{0, 1, 2, 3};
  inducer.refine(weights, attributes, &observer);
  CHECK(checked > 100);
  CHECK(worst <= 1e-9);
}

TEST_CASE("training starts with the default rule") {
  const auto d = synth_dataset(60, 3, 3, 0.5, 2);
  const auto result = train(full_view(d), exact_config(1));
  REQUIRE(result.ensemble.rules.size() == 1);
  CHECK(result.ensemble.rules[0].body.empty());
  CHECK(result.timing.candidate_evaluations == 1);
}

TEST_CASE("training loss decreases on an XOR-style problem") {
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<int>> labels;
  for (int rep = 0; rep < 5; ++rep) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        rows.push_back({a + 0.1 * rep, b + 0.05 * rep});
        labels.push_back({(a ^ b) ? 1 : -1, (a && b) ? 1 : -1});
      }
    }
  }
  const auto d = numeric_dataset(rows, labels);
  for (auto loss : {kExampleWise, LossFunction{LossKind::label_wise_logistic}}) {
    auto config = exact_config(25);
    config.loss = loss;
    const auto ensemble = train(full_view(d), config).ensemble;
    double previous = training_loss(d, Ensemble{2, {}}, loss);
    Ensemble prefix{2, {}};
    for (std::size_t k = 0; k < ensemble.rules.size(); ++k) {
      prefix.add(ensemble.rules[k]);
      const double current = training_loss(d, prefix, loss);
      if (k < 10) {
        CHECK(current < previous);
      } else {
        CHECK(current <= previous + 1e-12);
      }
      previous = current;
    }
  }
}

TEST_CASE("singleton bins train the same ensemble as the exact solve") {
  const auto d = synth_dataset(100, 5, 4, 0.3, 12);
  TrainConfig config;
  config.rule_count = 15;
  config.seed = 4;
  const auto exact = train(full_view(d), config).ensemble;
  config.bins = BinConfig::singleton();
  const auto binned = train(full_view(d), config).ensemble;
  REQUIRE(exact.rules.size() == binned.rules.size());
  for (std::size_t r = 0; r < exact.rules.size(); ++r) {
    CHECK(exact.rules[r].body == binned.rules[r].body);
    for (std::size_t l = 0; l < 4; ++l) {
      CHECK(std::abs(exact.rules[r].head[l] - binned.rules[r].head[l]) <= 1e-10);
    }
  }
}

TEST_CASE("training is deterministic across thread counts") {
  const auto d = synth_dataset(150, 8, 5, 0.5, 21);
  TrainConfig config;
  config.rule_count = 20;
  config.seed = 9;
  config.bins = BinConfig::count(2);
  const auto reference = train(full_view(d), config);
  CHECK(reference.timing.candidate_eval_seconds <= reference.timing.total_seconds);
  for (std::size_t threads : {2, 3, 8}) {
    config.threads = threads;
    const auto parallel = train(full_view(d), config);
    CHECK(parallel.ensemble == reference.ensemble);
    CHECK(parallel.timing.candidate_evaluations == reference.timing.candidate_evaluations);
    CHECK(parallel.timing.candidate_eval_seconds <= parallel.timing.total_seconds);
  }
  config.threads = 1;
  config.seed = 10;
  CHECK_FALSE(train(full_view(d), config).ensemble == reference.ensemble);
}

TEST_CASE("training on a fold view") {
  const auto d = synth_dataset(90, 4, 3, 0.5, 5);
  const auto folds = kfold_split(d, 3, 1);
  TrainConfig config;
  config.rule_count = 10;
  const auto result = train(folds[0].train, config);
  CHECK(result.ensemble.rules.size() == 10);
  CHECK(result.ensemble.label_count == 3);
}

}  // TEST_SUITE
