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

#include "mlrl/induction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

#include "mlrl/error.hpp"

namespace mlrl {

namespace {

// Qualities closer than this are treated as equal and resolved by the
// deterministic condition order.
constexpr double kTieEpsilon = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int operator_rank(Operator op) {
  return op == Operator::leq || op == Operator::eq ? 0 : 1;
}

// Lowest attribute index, then <= (or =) before > (or !=), then smallest
// threshold.
bool precedes(const Condition& a, const Condition& b) {
  return std::make_tuple(a.attribute, operator_rank(a.op), a.threshold) <
         std::make_tuple(b.attribute, operator_rank(b.op), b.threshold);
}

}  // namespace

void TrainConfig::validate() const {
  if (rule_count < 1) throw InvalidArgument("rule count must be positive");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) {
    throw InvalidArgument("shrinkage must be in (0, 1]");
  }
  if (!(l2_weight >= 0.0)) {
    throw InvalidArgument("l2 weight must not be negative");
  }
  if (feature_sample_fraction &&
      !(*feature_sample_fraction > 0.0 && *feature_sample_fraction <= 1.0)) {
    throw InvalidArgument("feature sample fraction must be in (0, 1]");
  }
  if (threads < 1) throw InvalidArgument("thread count must be positive");
}

std::size_t TrainConfig::sampled_attribute_count(
    std::size_t attribute_count) const {
  const double a = static_cast<double>(attribute_count);
  const double wanted = feature_sample_fraction ? *feature_sample_fraction * a
                                                : std::sqrt(a);
  // ceil, ignoring rounding noise just above an integer
  const auto count = static_cast<std::size_t>(std::ceil(wanted - 1e-9));
  return std::clamp<std::size_t>(count, 1, std::max<std::size_t>(attribute_count, 1));
}

DenseVector CandidateEvaluation::head() const {
  return mapping ? expand_head(*mapping, scores) : scores;
}

CandidateEvaluation evaluate_candidate(const StatSum& stats, double l2_weight,
                                       const std::optional<BinConfig>& bins) {
  CandidateEvaluation result;
  const DenseVector* gradients = &stats.sum_gradients();
  const PackedSymmetric* hessians = &stats.sum_hessians();
  DenseVector regularization;
  AggregatedStats aggregated;
  if (bins) {
    result.mapping = map_to_bins(criteria(stats, l2_weight), *bins);
    aggregated = aggregate(*result.mapping, stats, l2_weight);
    gradients = &aggregated.gradients;
    hessians = &aggregated.hessians;
    regularization = std::move(aggregated.regularization);
  } else {
    regularization.assign(gradients->size(), l2_weight);
  }

  DenseVector ordinates(gradients->size());
  std::transform(gradients->begin(), gradients->end(), ordinates.begin(),
                 [](double g) { return -g; });
  result.scores = solve_symmetric(*hessians, regularization, ordinates);
  result.quality = dot(result.scores, *gradients) +
                   0.5 * dot(result.scores, sym_mat_vec(*hessians, result.scores));
  return result;
}

TrainTiming& TrainTiming::operator+=(const TrainTiming& other) {
  total_seconds += other.total_seconds;
  candidate_eval_seconds += other.candidate_eval_seconds;
  candidate_evaluations += other.candidate_evaluations;
  return *this;
}

struct RuleInducer::ScanResult {
  bool found = false;
  Condition condition;
  CandidateEvaluation evaluation;

  void offer(const Condition& candidate, CandidateEvaluation&& candidate_eval) {
    if (found) {
      const double best = evaluation.quality;
      const double quality = candidate_eval.quality;
      if (quality > best + kTieEpsilon) return;
      if (quality >= best - kTieEpsilon && !precedes(candidate, condition)) return;
    }
    found = true;
    condition = candidate;
    evaluation = std::move(candidate_eval);
  }
};

RuleInducer::RuleInducer(const DatasetView& data, const TrainConfig& config)
    : data_(data),
      config_(config),
      label_count_(data.dataset->label_count()),
      packed_size_(PackedSymmetric::packed_size(label_count_)),
      gradients_(data.size() * label_count_, 0.0),
      hessians_(data.size() * packed_size_, 0.0) {
  config_.validate();
  if (data.size() == 0) throw InvalidArgument("cannot train on zero examples");
  const Dataset& dataset = *data.dataset;
  sorted_.resize(dataset.attribute_count());
  for (std::size_t a = 0; a < dataset.attribute_count(); ++a) {
    if (dataset.attributes[a].kind != AttributeKind::numerical) continue;
    auto& order = sorted_[a];
    order.resize(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return dataset.feature(data.example(x), a) <
             dataset.feature(data.example(y), a);
    });
  }
}

std::span<const double> RuleInducer::example_gradients(std::size_t position) const {
  return {gradients_.data() + position * label_count_, label_count_};
}

std::span<const double> RuleInducer::example_hessians(std::size_t position) const {
  return {hessians_.data() + position * packed_size_, packed_size_};
}

void RuleInducer::set_scores(std::span<const double> scores) {
  std::vector<std::size_t> all(data_.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  update_scores(all, scores);
}

void RuleInducer::update_scores(std::span<const std::size_t> positions,
                                std::span<const double> scores) {
  if (scores.size() != data_.size() * label_count_) {
    throw DimensionMismatch("score matrix does not match the training view");
  }
  const Dataset& dataset = *data_.dataset;
  for (auto p : positions) {
    example_stats_into(
        config_.loss, dataset.labels.row(data_.example(p)),
        scores.subspan(p * label_count_, label_count_),
        std::span<double>(gradients_.data() + p * label_count_, label_count_),
        std::span<double>(hessians_.data() + p * packed_size_, packed_size_));
  }
}

CandidateEvaluation RuleInducer::timed_evaluate(
    const StatSum& stats, const std::optional<BinConfig>& bins,
    TrainTiming& timing) const {
  const auto start = Clock::now();
  auto result = evaluate_candidate(stats, config_.l2_weight, bins);
  timing.candidate_eval_seconds += seconds_since(start);
  ++timing.candidate_evaluations;
  return result;
}

StatSum RuleInducer::covered_sum(std::span<const double> weights,
                                 const std::vector<std::uint8_t>& covered) const {
  StatSum sum(label_count_);
  for (std::size_t p = 0; p < data_.size(); ++p) {
    if (covered[p] && weights[p] > 0.0) {
      sum.add(example_gradients(p), example_hessians(p), weights[p]);
    }
  }
  return sum;
}

RuleInducer::ScanResult RuleInducer::scan_numerical(
    std::size_t attribute, std::span<const double> weights,
    const std::vector<std::uint8_t>& covered, const StatSum& total,
    std::span<const Condition> body, const CandidateObserver* observer,
    TrainTiming& timing) const {
  const Dataset& dataset = *data_.dataset;
  ScanResult best;
  StatSum prefix(label_count_);
  std::size_t prefix_count = 0;
  double previous = 0.0;

  const auto consider = [&](const Condition& condition, const StatSum& stats) {
    if (observer) (*observer)(body, condition, stats);
    best.offer(condition, timed_evaluate(stats, config_.bins, timing));
  };

  for (auto p : sorted_[attribute]) {
    if (!covered[p] || weights[p] <= 0.0) continue;
    const double value = dataset.feature(data_.example(p), attribute);
    if (prefix_count > 0 && value > previous) {
      double threshold = previous + (value - previous) / 2.0;
      if (threshold >= value) threshold = previous;
      consider({attribute, Operator::leq, threshold}, prefix);
      consider({attribute, Operator::gt, threshold},
               subtract_from_total(total, prefix));
    }
    prefix.add(example_gradients(p), example_hessians(p), weights[p]);
    ++prefix_count;
    previous = value;
  }
  return best;
}

RuleInducer::ScanResult RuleInducer::scan_nominal(
    std::size_t attribute, std::span<const double> weights,
    const std::vector<std::uint8_t>& covered, const StatSum& total,
    std::size_t total_count, std::span<const Condition> body,
    const CandidateObserver* observer, TrainTiming& timing) const {
  const Dataset& dataset = *data_.dataset;
  const std::size_t categories = dataset.attributes[attribute].categories.size();
  std::vector<StatSum> per_category(categories, StatSum(label_count_));
  std::vector<std::size_t> counts(categories, 0);
  for (std::size_t p = 0; p < data_.size(); ++p) {
    if (!covered[p] || weights[p] <= 0.0) continue;
    const auto category = static_cast<std::size_t>(
        dataset.feature(data_.example(p), attribute));
    per_category[category].add(example_gradients(p), example_hessians(p),
                               weights[p]);
    ++counts[category];
  }

  ScanResult best;
  for (std::size_t v = 0; v < categories; ++v) {
    // A category holding every covered example yields no refinement.
    if (counts[v] == 0 || counts[v] == total_count) continue;
    const Condition equal{attribute, Operator::eq, static_cast<double>(v)};
    const Condition unequal{attribute, Operator::neq, static_cast<double>(v)};
    const StatSum complement = subtract_from_total(total, per_category[v]);
    if (observer) (*observer)(body, equal, per_category[v]);
    best.offer(equal, timed_evaluate(per_category[v], config_.bins, timing));
    if (observer) (*observer)(body, unequal, complement);
    best.offer(unequal, timed_evaluate(complement, config_.bins, timing));
  }
  return best;
}

RuleInducer::Result RuleInducer::default_rule() {
  StatSum total(label_count_);
  for (std::size_t p = 0; p < data_.size(); ++p) {
    total.add(example_gradients(p), example_hessians(p), 1.0);
  }
  const auto evaluation = timed_evaluate(total, std::nullopt, timing_);
  Result result;
  result.rule.head = evaluation.scores;
  for (auto& s : result.rule.head) s *= config_.shrinkage;
  result.covered.resize(data_.size());
  std::iota(result.covered.begin(), result.covered.end(), std::size_t{0});
  result.quality = evaluation.quality;
  return result;
}

RuleInducer::Result RuleInducer::refine(std::span<const double> weights,
                                        std::span<const std::size_t> attributes,
                                        const CandidateObserver* observer) {
  if (weights.size() != data_.size()) {
    throw DimensionMismatch("expected one weight per training example");
  }
  const Dataset& dataset = *data_.dataset;
  for (auto a : attributes) {
    if (a >= dataset.attribute_count()) {
      throw InvalidArgument("attribute index " + std::to_string(a) +
                            " out of range");
    }
  }

  std::vector<std::uint8_t> covered(data_.size(), 1);
  std::vector<Condition> body;
  StatSum total = covered_sum(weights, covered);
  std::size_t total_count = static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
  if (total_count == 0) throw InvalidArgument("all example weights are zero");
  CandidateEvaluation current = timed_evaluate(total, config_.bins, timing_);

  const std::size_t workers =
      observer ? 1 : std::min(config_.threads, attributes.size());
  std::vector<ScanResult> results(attributes.size());
  std::vector<TrainTiming> worker_timing(std::max<std::size_t>(workers, 1));

  while (true) {
    const auto scan = [&](std::size_t slot, TrainTiming& timing) {
      const auto a = attributes[slot];
      results[slot] =
          dataset.attributes[a].kind == AttributeKind::numerical
              ? scan_numerical(a, weights, covered, total, body, observer,
                               timing)
              : scan_nominal(a, weights, covered, total, total_count, body,
                             observer, timing);
    };
    if (workers <= 1) {
      for (std::size_t slot = 0; slot < attributes.size(); ++slot) {
        scan(slot, timing_);
      }
    } else {
      std::fill(worker_timing.begin(), worker_timing.end(), TrainTiming{});
      {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            for (std::size_t slot = w; slot < attributes.size(); slot += workers) {
              scan(slot, worker_timing[w]);
            }
          });
        }
      }
      // Workers evaluate concurrently; the phase costs as much evaluation time
      // as its slowest worker spent, which keeps the total below wall time.
      double slowest = 0.0;
      for (const auto& t : worker_timing) {
        slowest = std::max(slowest, t.candidate_eval_seconds);
        timing_.candidate_evaluations += t.candidate_evaluations;
      }
      timing_.candidate_eval_seconds += slowest;
    }

    // Reduce in attribute order so the outcome does not depend on threads.
    ScanResult best;
    std::vector<std::size_t> slots(attributes.size());
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    std::sort(slots.begin(), slots.end(), [&](std::size_t x, std::size_t y) {
      return attributes[x] < attributes[y];
    });
    for (auto slot : slots) {
      if (results[slot].found) {
        best.offer(results[slot].condition, std::move(results[slot].evaluation));
      }
      results[slot] = ScanResult{};
    }

    if (!best.found || !(best.evaluation.quality < current.quality - kTieEpsilon)) {
      break;
    }

    body.push_back(best.condition);
    for (std::size_t p = 0; p < data_.size(); ++p) {
      if (covered[p] &&
          !best.condition.satisfied_by(
              dataset.feature(data_.example(p), best.condition.attribute))) {
        covered[p] = 0;
      }
    }
    total = covered_sum(weights, covered);
    total_count = 0;
    for (std::size_t p = 0; p < data_.size(); ++p) {
      total_count += covered[p] && weights[p] > 0.0;
    }
    current = std::move(best.evaluation);
  }

  Result result;
  result.rule.body = std::move(body);
  result.rule.head = current.head();
  for (auto& s : result.rule.head) s *= config_.shrinkage;
  result.quality = current.quality;
  for (std::size_t p = 0; p < data_.size(); ++p) {
    if (covered[p]) result.covered.push_back(p);
  }
  return result;
}

Rule refine_rule(const DatasetView& data, std::span<const double> scores,
                 const TrainConfig& config, std::span<const double> weights,
                 std::span<const std::size_t> attributes) {
  RuleInducer inducer(data, config);
  inducer.set_scores(scores);
  std::vector<double> unit;
  if (weights.empty()) {
    unit.assign(data.size(), 1.0);
    weights = unit;
  }
  std::vector<std::size_t> all;
  if (attributes.empty()) {
    all.resize(data.dataset->attribute_count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    attributes = all;
  }
  return inducer.refine(weights, attributes).rule;
}

namespace {

bool all_attributes_constant(const DatasetView& data) {
  const Dataset& dataset = *data.dataset;
  for (std::size_t a = 0; a < dataset.attribute_count(); ++a) {
    const double first = dataset.feature(data.example(0), a);
    for (std::size_t p = 1; p < data.size(); ++p) {
      if (dataset.feature(data.example(p), a) != first) return false;
    }
  }
  return true;
}

}  // namespace

TrainResult train(const DatasetView& data, const TrainConfig& config) {
  const auto start = Clock::now();
  config.validate();
  if (data.size() == 0) throw InvalidArgument("cannot train on zero examples");
  if (config.rule_count > 1 && all_attributes_constant(data)) {
    throw DegenerateData("every attribute is constant; no rule can be refined");
  }

  const Dataset& dataset = *data.dataset;
  const std::size_t n = data.size();
  const std::size_t label_count = dataset.label_count();
  const std::size_t attribute_count = dataset.attribute_count();

  RuleInducer inducer(data, config);
  std::vector<double> scores(n * label_count, 0.0);
  inducer.set_scores(scores);

  TrainResult result;
  result.ensemble.label_count = label_count;

  const auto apply = [&](const RuleInducer::Result& induced) {
    for (auto p : induced.covered) {
      for (std::size_t l = 0; l < label_count; ++l) {
        scores[p * label_count + l] += induced.rule.head[l];
      }
    }
    inducer.update_scores(induced.covered, scores);
    result.ensemble.add(induced.rule);
  };

  apply(inducer.default_rule());

  std::mt19937_64 rng(config.seed);
  std::vector<double> weights(n, 1.0);
  std::vector<std::size_t> pool(attribute_count);
  const std::size_t sample_size = config.sampled_attribute_count(attribute_count);
  std::vector<std::size_t> sampled(sample_size);

  for (std::size_t iteration = 1; iteration < config.rule_count; ++iteration) {
    if (config.instance_sampling) {
      std::fill(weights.begin(), weights.end(), 0.0);
      std::uniform_int_distribution<std::size_t> draw(0, n - 1);
      for (std::size_t i = 0; i < n; ++i) weights[draw(rng)] += 1.0;
    }
    // Partial Fisher-Yates shuffle for the attribute subset of this rule.
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < sample_size; ++i) {
      std::uniform_int_distribution<std::size_t> draw(i, attribute_count - 1);
      std::swap(pool[i], pool[draw(rng)]);
    }
    std::copy_n(pool.begin(), sample_size, sampled.begin());
    std::sort(sampled.begin(), sampled.end());

    apply(inducer.refine(weights, sampled));
  }

  result.timing = inducer.timing();
  result.timing.total_seconds = seconds_since(start);
  return result;
}

}  // namespace mlrl
