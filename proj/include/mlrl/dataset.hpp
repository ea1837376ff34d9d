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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mlrl/losses.hpp"
#include "mlrl/schema.hpp"

namespace mlrl {

// N x L matrix of label values in {-1, +1}, row-major.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(std::size_t rows, std::size_t cols, LabelValue fill = -1)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  LabelValue operator()(std::size_t row, std::size_t col) const {
    return values_[row * cols_ + col];
  }
  LabelValue& operator()(std::size_t row, std::size_t col) {
    return values_[row * cols_ + col];
  }
  std::span<const LabelValue> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<LabelValue> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }

  bool operator==(const LabelMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LabelValue> values_;
};

struct Dataset {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<std::string> label_names;
  // N x A, row-major. Nominal attributes hold category indices.
  std::vector<double> features;
  LabelMatrix labels;

  std::size_t example_count() const { return labels.rows(); }
  std::size_t attribute_count() const { return attributes.size(); }
  std::size_t label_count() const { return labels.cols(); }

  std::span<const double> row(std::size_t example) const {
    return {features.data() + example * attributes.size(), attributes.size()};
  }
  double feature(std::size_t example, std::size_t attribute) const {
    return features[example * attributes.size() + attribute];
  }

  bool operator==(const Dataset&) const = default;
};

// A subset of a dataset's examples, referenced by index.
struct DatasetView {
  const Dataset* dataset = nullptr;
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  std::size_t example(std::size_t position) const { return indices[position]; }
};

DatasetView full_view(const Dataset& dataset);

enum class Imputation { none, mean_mode };

struct LoadOptions {
  Imputation imputation = Imputation::none;
};

// Label attributes of an ARFF file: the number of trailing attributes, or
// their names (as listed in a label XML file). std::monostate requests the
// "-C n" marker in the relation name (n leading label attributes).
using ArffLabels =
    std::variant<std::monostate, std::size_t, std::vector<std::string>>;

// Label columns of a CSV file: the number of trailing columns, or a column
// name prefix.
using CsvLabels = std::variant<std::size_t, std::string>;

Dataset load_arff(const std::filesystem::path& path, const ArffLabels& labels,
                  const LoadOptions& options = {});
Dataset parse_arff(std::istream& in, const ArffLabels& labels,
                   const LoadOptions& options = {});

// Reads the label names of a label XML file (<label name="..."> elements).
std::vector<std::string> load_label_xml(const std::filesystem::path& path);

Dataset load_csv(const std::filesystem::path& path, const CsvLabels& labels,
                 const LoadOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvLabels& labels,
                  const LoadOptions& options = {});

// Writes features followed by label columns (0/1) with a header row. Loading
// the output with the label count as CsvLabels reproduces the dataset.
void write_csv(const Dataset& dataset, std::ostream& out);

// Uniform features in [0, 1). Each label thresholds a mix of a shared latent
// projection (weight `label_correlation`) and a label-specific one.
Dataset synth_dataset(std::size_t examples, std::size_t attributes,
                      std::size_t labels, double label_correlation,
                      std::uint64_t seed);

struct Fold {
  DatasetView train;
  DatasetView test;
};

// Shuffled k-fold partition. Indices within each view are ascending.
std::vector<Fold> kfold_split(const Dataset& dataset, std::size_t k,
                              std::uint64_t seed);

}  // namespace mlrl
