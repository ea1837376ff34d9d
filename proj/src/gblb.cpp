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

#include "mlrl/gblb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrl/error.hpp"

namespace mlrl {

BinConfig BinConfig::fraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("bin fraction must be in (0, 1], got " +
                          std::to_string(fraction));
  }
  return BinConfig(Strategy::equal_width, true, fraction);
}

BinConfig BinConfig::count(std::size_t bins) {
  if (bins < 1) throw InvalidArgument("bin count must be at least 1");
  return BinConfig(Strategy::equal_width, false, static_cast<double>(bins));
}

BinConfig BinConfig::singleton() {
  return BinConfig(Strategy::singleton, false, 0.0);
}

BinConfig BinConfig::parse(const std::string& text) {
  if (text == "singleton") return singleton();
  std::size_t consumed = 0;
  try {
    if (text.find_first_of(".eE") != std::string::npos) {
      const double value = std::stod(text, &consumed);
      if (consumed == text.size()) return fraction(value);
    } else {
      const long value = std::stol(text, &consumed);
      if (consumed == text.size() && value >= 1) {
        return count(static_cast<std::size_t>(value));
      }
    }
  } catch (const std::logic_error&) {
  }
  throw InvalidArgument("invalid bin budget '" + text +
                        "' (expected a fraction in (0,1], a positive integer "
                        "or 'singleton')");
}

std::size_t BinConfig::resolve(std::size_t label_count) const {
  if (strategy_ == Strategy::singleton) return std::max<std::size_t>(1, label_count);
  if (!is_fraction_) return static_cast<std::size_t>(budget_);
  const double bins = std::ceil(budget_ * static_cast<double>(label_count));
  return std::max<std::size_t>(1, static_cast<std::size_t>(bins));
}

std::string BinConfig::to_string() const {
  if (strategy_ == Strategy::singleton) return "singleton";
  if (!is_fraction_) return std::to_string(static_cast<std::size_t>(budget_));
  std::string text = std::to_string(budget_);
  text.erase(text.find_last_not_of('0') + 1);
  if (text.back() == '.') text.push_back('0');
  return text;
}

std::vector<std::vector<std::size_t>> BinMapping::bins() const {
  std::vector<std::vector<std::size_t>> result(bin_count());
  for (std::size_t l = 0; l < assignment.size(); ++l) {
    if (assignment[l] != kZero) result[assignment[l]].push_back(l);
  }
  return result;
}

std::vector<std::size_t> BinMapping::non_empty_bins() const {
  std::vector<bool> used(bin_count(), false);
  for (auto bin : assignment) {
    if (bin != kZero) used[bin] = true;
  }
  std::vector<std::size_t> result;
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (used[k]) result.push_back(k);
  }
  return result;
}

DenseVector criteria(const StatSum& sum, double l2_weight) {
  if (l2_weight < 0.0) throw InvalidArgument("l2 weight must not be negative");
  const auto& g = sum.sum_gradients();
  const auto& h = sum.sum_hessians();
  DenseVector result(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) {
    const double denominator = h(l, l) + l2_weight;
    if (denominator == 0.0) {
      throw DivisionByZero("criterion of label " + std::to_string(l) +
                           " has a zero denominator");
    }
    result[l] = g[l] == 0.0 ? 0.0 : -g[l] / denominator;
  }
  return result;
}

namespace {

// Number of distinct values among `values` with the given sign, stopping once
// `limit` distinct values have been seen.
std::size_t distinct_up_to(std::span<const double> values, bool negative,
                           std::size_t limit) {
  std::vector<double> seen;
  seen.reserve(limit);
  for (double v : values) {
    if (v == 0.0 || (v < 0.0) != negative) continue;
    if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
      seen.push_back(v);
      if (seen.size() >= limit) break;
    }
  }
  return seen.size();
}

BinMapping singleton_bins(std::span<const double> criteria) {
  BinMapping mapping;
  mapping.assignment.assign(criteria.size(), BinMapping::kZero);
  std::vector<std::size_t> negative, positive;
  for (std::size_t l = 0; l < criteria.size(); ++l) {
    if (criteria[l] < 0.0) negative.push_back(l);
    if (criteria[l] > 0.0) positive.push_back(l);
  }
  const auto by_criterion = [&](std::size_t a, std::size_t b) {
    return criteria[a] < criteria[b];
  };
  std::stable_sort(negative.begin(), negative.end(), by_criterion);
  std::stable_sort(positive.begin(), positive.end(), by_criterion);
  std::uint32_t next = 0;
  for (auto l : negative) mapping.assignment[l] = next++;
  for (auto l : positive) mapping.assignment[l] = next++;
  mapping.negative_bin_count = negative.size();
  mapping.positive_bin_count = positive.size();
  return mapping;
}

}  // namespace

BinMapping map_to_bins(std::span<const double> criteria,
                       const BinConfig& config) {
  if (config.strategy() == BinConfig::Strategy::singleton) {
    return singleton_bins(criteria);
  }

  const std::size_t label_count = criteria.size();
  std::size_t negative_count = 0, positive_count = 0;
  double negative_min = 0.0, negative_max = 0.0;
  double positive_min = 0.0, positive_max = 0.0;
  for (double c : criteria) {
    if (c < 0.0) {
      negative_min = negative_count == 0 ? c : std::min(negative_min, c);
      negative_max = negative_count == 0 ? c : std::max(negative_max, c);
      ++negative_count;
    } else if (c > 0.0) {
      positive_min = positive_count == 0 ? c : std::min(positive_min, c);
      positive_max = positive_count == 0 ? c : std::max(positive_max, c);
      ++positive_count;
    }
  }

  BinMapping mapping;
  mapping.assignment.assign(label_count, BinMapping::kZero);
  if (negative_count + positive_count == 0) return mapping;

  // Split the budget proportionally to the number of labels per sign. Both
  // signs always get at least one bin, even when the budget is a single bin.
  const std::size_t budget = config.resolve(label_count);
  std::size_t negative_bins = 0, positive_bins = 0;
  if (negative_count > 0 && positive_count > 0) {
    const std::size_t total = std::max<std::size_t>(budget, 2);
    const double share = static_cast<double>(total) *
                         static_cast<double>(negative_count) /
                         static_cast<double>(negative_count + positive_count);
    negative_bins = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(share)), 1, total - 1);
    positive_bins = total - negative_bins;
  } else if (negative_count > 0) {
    negative_bins = budget;
  } else {
    positive_bins = budget;
  }
  if (negative_bins > 1) {
    negative_bins = distinct_up_to(criteria, true, negative_bins);
  }
  if (positive_bins > 1) {
    positive_bins = distinct_up_to(criteria, false, positive_bins);
  }
  mapping.negative_bin_count = negative_bins;
  mapping.positive_bin_count = positive_bins;

  const double negative_width =
      negative_count > 0
          ? (negative_max - negative_min) / static_cast<double>(negative_bins)
          : 0.0;
  const double positive_width =
      positive_count > 0
          ? (positive_max - positive_min) / static_cast<double>(positive_bins)
          : 0.0;

  const auto bin_of = [](double c, double min, double width,
                         std::size_t bins) -> std::uint32_t {
    if (width == 0.0) return 0;
    const double position = std::floor((c - min) / width);
    return static_cast<std::uint32_t>(
        std::min(position, static_cast<double>(bins - 1)));
  };
  for (std::size_t l = 0; l < label_count; ++l) {
    const double c = criteria[l];
    if (c < 0.0) {
      mapping.assignment[l] =
          bin_of(c, negative_min, negative_width, negative_bins);
    } else if (c > 0.0) {
      mapping.assignment[l] =
          static_cast<std::uint32_t>(negative_bins) +
          bin_of(c, positive_min, positive_width, positive_bins);
    }
  }
  return mapping;
}

AggregatedStats aggregate(const BinMapping& mapping, const StatSum& sum,
                          double l2_weight) {
  const std::size_t label_count = sum.label_count();
  if (mapping.label_count() != label_count) {
    throw DimensionMismatch("mapping covers " +
                            std::to_string(mapping.label_count()) +
                            " labels, statistics " +
                            std::to_string(label_count));
  }

  // Compact index of every label's bin within the reduced system.
  std::vector<std::uint32_t> compact(mapping.bin_count(), BinMapping::kZero);
  for (auto bin : mapping.assignment) {
    if (bin != BinMapping::kZero) compact[bin] = 0;
  }
  std::uint32_t reduced_order = 0;
  for (auto& index : compact) {
    if (index != BinMapping::kZero) index = reduced_order++;
  }
  std::vector<std::uint32_t> label_bin(label_count, BinMapping::kZero);
  for (std::size_t l = 0; l < label_count; ++l) {
    if (mapping.assignment[l] != BinMapping::kZero) {
      label_bin[l] = compact[mapping.assignment[l]];
    }
  }

  AggregatedStats result{DenseVector(reduced_order, 0.0),
                         PackedSymmetric(reduced_order),
                         DenseVector(reduced_order, 0.0),
                         std::vector<std::size_t>(reduced_order, 0)};
  const auto& g = sum.sum_gradients();
  for (std::size_t l = 0; l < label_count; ++l) {
    const auto k = label_bin[l];
    if (k == BinMapping::kZero) continue;
    result.gradients[k] += g[l];
    ++result.bin_sizes[k];
  }
  for (std::size_t k = 0; k < reduced_order; ++k) {
    result.regularization[k] = l2_weight * static_cast<double>(result.bin_sizes[k]);
  }

  const auto h = sum.sum_hessians().entries();
  auto reduced = result.hessians.entries();
  std::size_t i = 0;
  for (std::size_t r = 0; r < label_count; ++r) {
    const auto kr = label_bin[r];
    if (kr == BinMapping::kZero) {
      i += r + 1;
      continue;
    }
    for (std::size_t c = 0; c < r; ++c, ++i) {
      const auto kc = label_bin[c];
      if (kc == BinMapping::kZero) continue;
      if (kr == kc) {
        reduced[PackedSymmetric::index(kr, kr)] += 2.0 * h[i];
      } else {
        reduced[PackedSymmetric::index(kr, kc)] += h[i];
      }
    }
    reduced[PackedSymmetric::index(kr, kr)] += h[i++];
  }
  return result;
}

DenseVector expand_head(const BinMapping& mapping,
                        std::span<const double> bin_scores) {
  const auto used = mapping.non_empty_bins();
  if (used.size() != bin_scores.size()) {
    throw DimensionMismatch("expected " + std::to_string(used.size()) +
                            " bin scores, got " +
                            std::to_string(bin_scores.size()));
  }
  std::vector<double> per_bin(mapping.bin_count(), 0.0);
  for (std::size_t k = 0; k < used.size(); ++k) per_bin[used[k]] = bin_scores[k];
  DenseVector head(mapping.label_count(), 0.0);
  for (std::size_t l = 0; l < head.size(); ++l) {
    if (mapping.assignment[l] != BinMapping::kZero) {
      head[l] = per_bin[mapping.assignment[l]];
    }
  }
  return head;
}

}  // namespace mlrl
