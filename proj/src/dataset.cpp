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

#include "mlrl/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "mlrl/error.hpp"
#include "mlrl/format.hpp"

namespace mlrl {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxListedMissingCells = 10;

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

std::string lower(std::string_view text) {
  std::string result(text);
  std::transform(result.begin(), result.end(), result.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return result;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  return lower(line.substr(0, keyword.size())) == keyword &&
         (line.size() == keyword.size() ||
          std::isspace(static_cast<unsigned char>(line[keyword.size()])));
}

// Splits on `separator` outside of single or double quotes, trims and unquotes
// every field.
std::vector<std::string> split_fields(std::string_view text, char separator) {
  std::vector<std::string> fields;
  std::string current;
  char quote = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote != 0) {
      if (c == '\\' && quote != '"' && i + 1 < text.size()) {
        current.push_back(text[++i]);
      } else if (c == quote) {
        if (quote == '"' && i + 1 < text.size() && text[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quote = 0;
        }
      } else {
        current.push_back(c);
      }
    } else if ((c == '\'' || c == '"') && trim(current).empty()) {
      current.clear();
      quote = c;
      quoted = true;
    } else if (c == separator) {
      fields.push_back(quoted ? current : std::string(trim(current)));
      current.clear();
      quoted = false;
    } else if (!(quoted && std::isspace(static_cast<unsigned char>(c)))) {
      current.push_back(c);
    }
  }
  fields.push_back(quoted ? current : std::string(trim(current)));
  return fields;
}

// Reads a possibly quoted token from the front of `text` and removes it.
std::string take_token(std::string_view& text) {
  text = trim(text);
  std::string token;
  if (!text.empty() && (text.front() == '\'' || text.front() == '"')) {
    const char quote = text.front();
    std::size_t i = 1;
    for (; i < text.size() && text[i] != quote; ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) ++i;
      token.push_back(text[i]);
    }
    text.remove_prefix(std::min(i + 1, text.size()));
  } else {
    std::size_t i = 0;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      token.push_back(text[i++]);
    }
    text.remove_prefix(i);
  }
  return token;
}

bool is_missing(std::string_view value) {
  return value.empty() || value == "?";
}

// Column role after label selection.
struct Column {
  bool is_label = false;
  std::size_t index = 0;
};

LabelValue parse_label(std::string_view value, std::size_t line) {
  double number = 0.0;
  if (parse_double(value, number)) {
    if (number == 0.0) return -1;
    if (number == 1.0) return +1;
  }
  throw ParseError("label value '" + std::string(value) +
                   "' is not one of {0, 1}",
                   line);
}

void impute_or_reject(Dataset& dataset, const LoadOptions& options) {
  const std::size_t attributes = dataset.attribute_count();
  std::vector<std::size_t> missing_rows;
  std::vector<std::size_t> missing_attributes;
  for (std::size_t i = 0; i < dataset.features.size(); ++i) {
    if (std::isnan(dataset.features[i])) {
      missing_rows.push_back(i / attributes);
      missing_attributes.push_back(i % attributes);
    }
  }
  if (missing_rows.empty()) return;

  if (options.imputation == Imputation::none) {
    std::ostringstream message;
    message << missing_rows.size() << " missing feature value(s):";
    for (std::size_t i = 0;
         i < std::min(missing_rows.size(), kMaxListedMissingCells); ++i) {
      message << " (example " << missing_rows[i] << ", attribute '"
              << dataset.attributes[missing_attributes[i]].name << "')";
    }
    if (missing_rows.size() > kMaxListedMissingCells) message << " ...";
    throw MissingValueError(message.str());
  }

  const std::size_t n = dataset.example_count();
  for (std::size_t a = 0; a < attributes; ++a) {
    const auto& attribute = dataset.attributes[a];
    double fill = 0.0;
    if (attribute.kind == AttributeKind::numerical) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = dataset.feature(i, a);
        if (!std::isnan(v)) {
          sum += v;
          ++count;
        }
      }
      fill = count > 0 ? sum / static_cast<double>(count) : 0.0;
    } else {
      std::vector<std::size_t> counts(attribute.categories.size(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        const double v = dataset.feature(i, a);
        if (!std::isnan(v)) ++counts[static_cast<std::size_t>(v)];
      }
      // lowest category index wins ties
      fill = counts.empty() ? 0.0
                            : static_cast<double>(std::distance(
                                  counts.begin(),
                                  std::max_element(counts.begin(), counts.end())));
    }
    for (std::size_t i = 0; i < n; ++i) {
      double& v = dataset.features[i * attributes + a];
      if (std::isnan(v)) v = fill;
    }
  }
}

double encode_feature(const Attribute& attribute, std::string_view value,
                      std::size_t line) {
  if (is_missing(value)) return kMissing;
  if (attribute.kind == AttributeKind::numerical) {
    double number = 0.0;
    if (!parse_double(value, number)) {
      throw ParseError("attribute '" + attribute.name +
                           "' expects a number, got '" + std::string(value) +
                           "'",
                       line);
    }
    return number;
  }
  const auto it = std::find(attribute.categories.begin(),
                            attribute.categories.end(), value);
  if (it == attribute.categories.end()) {
    throw ParseError("value '" + std::string(value) +
                         "' is not a category of attribute '" +
                         attribute.name + "'",
                     line);
  }
  return static_cast<double>(std::distance(attribute.categories.begin(), it));
}

}  // namespace

DatasetView full_view(const Dataset& dataset) {
  DatasetView view{&dataset, std::vector<std::size_t>(dataset.example_count())};
  std::iota(view.indices.begin(), view.indices.end(), std::size_t{0});
  return view;
}

std::vector<std::string> load_label_xml(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  static const std::regex label_pattern(
      R"re(<\s*label\s+name\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), label_pattern);
       it != std::sregex_iterator(); ++it) {
    names.push_back((*it)[1].matched ? (*it)[1].str() : (*it)[2].str());
  }
  if (names.empty()) {
    throw ParseError("label file " + path.string() + " lists no labels");
  }
  return names;
}

Dataset load_arff(const std::filesystem::path& path, const ArffLabels& labels,
                  const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Dataset dataset = parse_arff(in, labels, options);
  if (dataset.name.empty()) dataset.name = path.stem().string();
  return dataset;
}

Dataset parse_arff(std::istream& in, const ArffLabels& labels,
                   const LoadOptions& options) {
  std::string relation;
  std::vector<Attribute> declared;
  std::string raw_line;
  std::size_t line = 0;
  bool in_data = false;

  // Rows are collected as raw (column, value) cells and encoded once the label
  // columns are known.
  std::vector<std::vector<std::string>> dense_rows;
  std::vector<std::vector<std::pair<std::size_t, std::string>>> sparse_rows;
  std::vector<bool> row_is_sparse;
  std::vector<std::size_t> row_lines;

  while (std::getline(in, raw_line)) {
    ++line;
    const std::string_view text = trim(raw_line);
    if (text.empty() || text.front() == '%') continue;
    if (!in_data) {
      if (starts_with_keyword(text, "@relation")) {
        std::string_view rest = text.substr(9);
        rest = trim(rest);
        relation = (!rest.empty() && (rest.front() == '\'' || rest.front() == '"'))
                       ? take_token(rest)
                       : std::string(rest);
      } else if (starts_with_keyword(text, "@attribute")) {
        std::string_view rest = text.substr(10);
        Attribute attribute;
        attribute.name = take_token(rest);
        rest = trim(rest);
        if (attribute.name.empty() || rest.empty()) {
          throw ParseError("malformed @attribute declaration", line);
        }
        if (rest.front() == '{') {
          const auto close = rest.rfind('}');
          if (close == std::string_view::npos) {
            throw ParseError("unterminated nominal attribute declaration", line);
          }
          attribute.kind = AttributeKind::nominal;
          attribute.categories = split_fields(rest.substr(1, close - 1), ',');
        } else {
          const std::string type = lower(take_token(rest));
          if (type != "numeric" && type != "real" && type != "integer") {
            throw ParseError("unsupported attribute type '" + type + "'", line);
          }
        }
        declared.push_back(std::move(attribute));
      } else if (starts_with_keyword(text, "@data")) {
        in_data = true;
      } else {
        throw ParseError("unexpected header line '" + std::string(text) + "'",
                         line);
      }
      continue;
    }

    row_lines.push_back(line);
    if (text.front() == '{') {
      if (text.back() != '}') throw ParseError("unterminated sparse row", line);
      std::vector<std::pair<std::size_t, std::string>> cells;
      const auto body = trim(text.substr(1, text.size() - 2));
      if (!body.empty()) {
        for (const auto& field : split_fields(body, ',')) {
          std::string_view rest = field;
          const std::string index_text = take_token(rest);
          double index = 0.0;
          if (!parse_double(index_text, index) || index < 0 ||
              index >= static_cast<double>(declared.size()) ||
              index != std::floor(index)) {
            throw ParseError("invalid sparse index '" + index_text + "'", line);
          }
          std::string_view value_text = trim(rest);
          std::string value = take_token(value_text);
          cells.emplace_back(static_cast<std::size_t>(index), std::move(value));
        }
      }
      sparse_rows.push_back(std::move(cells));
      dense_rows.emplace_back();
      row_is_sparse.push_back(true);
    } else {
      auto fields = split_fields(text, ',');
      if (fields.size() != declared.size()) {
        throw ParseError("expected " + std::to_string(declared.size()) +
                             " values, got " + std::to_string(fields.size()),
                         line);
      }
      dense_rows.push_back(std::move(fields));
      sparse_rows.emplace_back();
      row_is_sparse.push_back(false);
    }
  }

  if (!in_data) throw ParseError("missing @data section");
  if (row_lines.empty()) throw ParseError("empty @data section", line);
  if (declared.empty()) throw ParseError("no attributes declared");

  // Decide which declared attributes are labels.
  std::vector<bool> is_label(declared.size(), false);
  if (const auto* count = std::get_if<std::size_t>(&labels)) {
    if (*count == 0 || *count >= declared.size()) {
      throw ParseError("label count " + std::to_string(*count) +
                       " leaves no feature attributes");
    }
    for (std::size_t i = declared.size() - *count; i < declared.size(); ++i) {
      is_label[i] = true;
    }
  } else if (const auto* names = std::get_if<std::vector<std::string>>(&labels)) {
    for (const auto& name : *names) {
      const auto it = std::find_if(declared.begin(), declared.end(),
                                   [&](const Attribute& a) { return a.name == name; });
      if (it == declared.end()) {
        throw ParseError("label attribute '" + name + "' is not declared");
      }
      is_label[std::distance(declared.begin(), it)] = true;
    }
  } else {
    static const std::regex meka_pattern(R"(-C\s+(-?\d+))");
    std::smatch match;
    if (!std::regex_search(relation, match, meka_pattern)) {
      throw ParseError(
          "no label specification given and the relation name carries no "
          "'-C n' marker");
    }
    const long n = std::stol(match[1].str());
    const std::size_t count = static_cast<std::size_t>(std::labs(n));
    if (count == 0 || count >= declared.size()) {
      throw ParseError("'-C " + match[1].str() + "' leaves no features");
    }
    for (std::size_t i = 0; i < count; ++i) {
      is_label[n > 0 ? i : declared.size() - count + i] = true;
    }
  }

  Dataset dataset;
  dataset.name = relation;
  std::vector<Column> columns(declared.size());
  for (std::size_t i = 0; i < declared.size(); ++i) {
    columns[i].is_label = is_label[i];
    if (is_label[i]) {
      columns[i].index = dataset.label_names.size();
      dataset.label_names.push_back(declared[i].name);
    } else {
      columns[i].index = dataset.attributes.size();
      dataset.attributes.push_back(declared[i]);
    }
  }
  if (dataset.attributes.empty()) throw ParseError("no feature attributes");

  const std::size_t n = row_lines.size();
  const std::size_t a = dataset.attributes.size();
  dataset.features.assign(n * a, 0.0);
  dataset.labels = LabelMatrix(n, dataset.label_names.size(), -1);

  const auto store = [&](std::size_t row, std::size_t column,
                         std::string_view value, std::size_t at_line) {
    const auto& role = columns[column];
    if (role.is_label) {
      if (is_missing(value)) {
        throw MissingValueError("missing label value at line " +
                                std::to_string(at_line));
      }
      dataset.labels(row, role.index) = parse_label(value, at_line);
    } else {
      dataset.features[row * a + role.index] =
          encode_feature(declared[column], value, at_line);
    }
  };

  for (std::size_t row = 0; row < n; ++row) {
    if (!row_is_sparse[row]) {
      for (std::size_t c = 0; c < declared.size(); ++c) {
        store(row, c, dense_rows[row][c], row_lines[row]);
      }
      continue;
    }
    // Omitted sparse cells hold 0: the number zero or the first category.
    for (std::size_t c = 0; c < declared.size(); ++c) {
      const auto& attribute = declared[c];
      const std::string zero = attribute.kind == AttributeKind::nominal &&
                                       !attribute.categories.empty()
                                   ? attribute.categories.front()
                                   : std::string("0");
      store(row, c, zero, row_lines[row]);
    }
    for (const auto& [column, value] : sparse_rows[row]) {
      store(row, column, value, row_lines[row]);
    }
  }

  impute_or_reject(dataset, options);
  return dataset;
}

Dataset load_csv(const std::filesystem::path& path, const CsvLabels& labels,
                 const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Dataset dataset = parse_csv(in, labels, options);
  dataset.name = path.stem().string();
  return dataset;
}

Dataset parse_csv(std::istream& in, const CsvLabels& labels,
                  const LoadOptions& options) {
  std::string raw_line;
  std::size_t line = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, raw_line)) {
    ++line;
    if (!trim(raw_line).empty()) header = split_fields(trim(raw_line), ',');
  }
  if (header.empty()) throw ParseError("missing header row");

  std::vector<bool> is_label(header.size(), false);
  if (const auto* count = std::get_if<std::size_t>(&labels)) {
    if (*count == 0 || *count >= header.size()) {
      throw ParseError("label count " + std::to_string(*count) +
                       " leaves no feature columns");
    }
    for (std::size_t i = header.size() - *count; i < header.size(); ++i) {
      is_label[i] = true;
    }
  } else {
    const auto& prefix = std::get<std::string>(labels);
    for (std::size_t i = 0; i < header.size(); ++i) {
      is_label[i] = header[i].rfind(prefix, 0) == 0;
    }
    const auto label_columns = std::count(is_label.begin(), is_label.end(), true);
    if (label_columns == 0) {
      throw ParseError("no column name starts with '" + prefix + "'");
    }
    if (static_cast<std::size_t>(label_columns) == header.size()) {
      throw ParseError("label prefix '" + prefix + "' leaves no features");
    }
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, raw_line)) {
    ++line;
    const auto text = trim(raw_line);
    if (text.empty()) continue;
    auto fields = split_fields(text, ',');
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " columns, got " + std::to_string(fields.size()),
                       line);
    }
    rows.push_back(std::move(fields));
    row_lines.push_back(line);
  }
  if (rows.empty()) throw ParseError("no data rows", line);

  Dataset dataset;
  std::vector<Column> columns(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    columns[c].is_label = is_label[c];
    if (is_label[c]) {
      columns[c].index = dataset.label_names.size();
      dataset.label_names.push_back(header[c]);
      continue;
    }
    Attribute attribute;
    attribute.name = header[c];
    double ignored = 0.0;
    const bool numeric = std::all_of(rows.begin(), rows.end(), [&](const auto& row) {
      return is_missing(row[c]) || parse_double(row[c], ignored);
    });
    if (!numeric) {
      attribute.kind = AttributeKind::nominal;
      for (const auto& row : rows) {
        if (!is_missing(row[c]) &&
            std::find(attribute.categories.begin(), attribute.categories.end(),
                      row[c]) == attribute.categories.end()) {
          attribute.categories.push_back(row[c]);
        }
      }
    }
    columns[c].index = dataset.attributes.size();
    dataset.attributes.push_back(std::move(attribute));
  }

  const std::size_t n = rows.size();
  const std::size_t a = dataset.attributes.size();
  dataset.features.assign(n * a, 0.0);
  dataset.labels = LabelMatrix(n, dataset.label_names.size(), -1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& value = rows[r][c];
      if (columns[c].is_label) {
        if (is_missing(value)) {
          throw MissingValueError("missing label value at line " +
                                  std::to_string(row_lines[r]));
        }
        if (value != "0" && value != "1") {
          throw ParseError("label value '" + value + "' is not one of {0, 1}",
                           row_lines[r]);
        }
        dataset.labels(r, columns[c].index) = value == "1" ? +1 : -1;
      } else {
        dataset.features[r * a + columns[c].index] = encode_feature(
            dataset.attributes[columns[c].index], value, row_lines[r]);
      }
    }
  }

  impute_or_reject(dataset, options);
  return dataset;
}

namespace {

std::string csv_field(const std::string& value) {
  const bool needs_quotes =
      value.empty() || value.find_first_of(",\"'\n\r") != std::string::npos ||
      std::isspace(static_cast<unsigned char>(value.front())) ||
      std::isspace(static_cast<unsigned char>(value.back()));
  if (!needs_quotes) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

void write_csv(const Dataset& dataset, std::ostream& out) {
  bool first = true;
  const auto separator = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& attribute : dataset.attributes) {
    separator();
    out << csv_field(attribute.name);
  }
  for (const auto& name : dataset.label_names) {
    separator();
    out << csv_field(name);
  }
  out << '\n';
  for (std::size_t i = 0; i < dataset.example_count(); ++i) {
    first = true;
    for (std::size_t a = 0; a < dataset.attribute_count(); ++a) {
      separator();
      const auto& attribute = dataset.attributes[a];
      const double v = dataset.feature(i, a);
      if (attribute.kind == AttributeKind::nominal) {
        out << csv_field(attribute.categories[static_cast<std::size_t>(v)]);
      } else {
        out << format_double(v);
      }
    }
    for (std::size_t l = 0; l < dataset.label_count(); ++l) {
      separator();
      out << (dataset.labels(i, l) > 0 ? '1' : '0');
    }
    out << '\n';
  }
}

Dataset synth_dataset(std::size_t examples, std::size_t attributes,
                      std::size_t labels, double label_correlation,
                      std::uint64_t seed) {
  if (examples == 0 || attributes == 0 || labels == 0) {
    throw InvalidArgument("synthetic dataset dimensions must be positive");
  }
  if (!(label_correlation >= 0.0 && label_correlation <= 1.0)) {
    throw InvalidArgument("label correlation must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-0.3, 0.3);

  // Projection 0 is the shared latent factor; 1..L are label-specific.
  std::vector<std::vector<double>> directions(labels + 1,
                                              std::vector<double>(attributes));
  std::vector<double> offsets(labels + 1);
  for (std::size_t p = 0; p <= labels; ++p) {
    double norm = 0.0;
    for (auto& w : directions[p]) {
      w = normal(rng);
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (auto& w : directions[p]) w /= norm > 0.0 ? norm : 1.0;
    offsets[p] = offset(rng) / std::sqrt(12.0);
  }

  Dataset dataset;
  dataset.name = "synthetic";
  for (std::size_t a = 0; a < attributes; ++a) {
    dataset.attributes.push_back({"x" + std::to_string(a + 1),
                                  AttributeKind::numerical, {}});
  }
  for (std::size_t l = 0; l < labels; ++l) {
    dataset.label_names.push_back("y" + std::to_string(l + 1));
  }
  dataset.features.resize(examples * attributes);
  for (auto& v : dataset.features) v = uniform(rng);
  dataset.labels = LabelMatrix(examples, labels);

  std::vector<double> projection(labels + 1);
  for (std::size_t i = 0; i < examples; ++i) {
    const auto row = dataset.row(i);
    for (std::size_t p = 0; p <= labels; ++p) {
      double s = 0.0;
      for (std::size_t a = 0; a < attributes; ++a) {
        s += directions[p][a] * (row[a] - 0.5);
      }
      projection[p] = s - offsets[p];
    }
    for (std::size_t l = 0; l < labels; ++l) {
      const double score = label_correlation * projection[0] +
                           (1.0 - label_correlation) * projection[l + 1];
      dataset.labels(i, l) = score > 0.0 ? +1 : -1;
    }
  }
  return dataset;
}

std::vector<Fold> kfold_split(const Dataset& dataset, std::size_t k,
                              std::uint64_t seed) {
  const std::size_t n = dataset.example_count();
  if (k < 2 || k > n) {
    throw InvalidFoldCount("fold count " + std::to_string(k) +
                           " must be in [2, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> fold_of(n);
  for (std::size_t position = 0; position < n; ++position) {
    // position p falls into fold floor(p * k / n)
    fold_of[order[position]] = position * k / n;
  }
  std::vector<Fold> folds(k);
  for (auto& fold : folds) {
    fold.train.dataset = &dataset;
    fold.test.dataset = &dataset;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      (f == fold_of[i] ? folds[f].test : folds[f].train).indices.push_back(i);
    }
  }
  return folds;
}

}  // namespace mlrl
