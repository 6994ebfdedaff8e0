// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include "dprl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dprl/errors.hpp"
#include "dprl/rng.hpp"
#include "text.hpp"

namespace dprl {
namespace {

using text::FormatNumber;
using text::ParseDouble;
using text::SplitList;
using text::Trim;

// Splits one CSV record. Double quotes group cells and "" escapes a quote.
std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.push_back(was_quoted ? cell : Trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(was_quoted ? cell : Trim(cell));
  return cells;
}

std::string QuoteCsv(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::vector<std::string>> ReadRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::vector<std::string>> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    records.push_back(SplitCsvLine(line));
  }
  if (records.empty()) throw DataError(path.string() + ": missing header row");
  return records;
}

bool Contains(const std::vector<std::string>& list, const std::string& name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

BinaryDataset::BinaryDataset(std::vector<std::string> feature_names,
                             std::vector<BitVector> columns, BitVector labels)
    : names_(std::move(feature_names)), columns_(std::move(columns)), labels_(std::move(labels)) {
  if (names_.size() != columns_.size()) {
    throw DataError("feature name count does not match column count");
  }
  for (const BitVector& c : columns_) {
    if (c.size() != labels_.size()) throw DataError("feature column length differs from labels");
  }
}

BinaryDataset BinaryDataset::FromRows(std::vector<std::string> feature_names,
                                      const std::vector<std::vector<std::uint8_t>>& rows,
                                      const std::vector<std::uint8_t>& labels) {
  if (rows.size() != labels.size()) throw DataError("row count differs from label count");
  const std::size_t m = feature_names.size();
  std::vector<BitVector> columns(m, BitVector(rows.size()));
  BitVector y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) throw DataError("row " + std::to_string(i) + " has wrong width");
    for (std::size_t j = 0; j < m; ++j) {
      if (rows[i][j] > 1) throw DataError("non-binary cell in row " + std::to_string(i));
      columns[j].set(i, rows[i][j] == 1);
    }
    if (labels[i] > 1) throw DataError("non-binary label in row " + std::to_string(i));
    y.set(i, labels[i] == 1);
  }
  return BinaryDataset(std::move(feature_names), std::move(columns), std::move(y));
}

std::vector<bool> BinaryDataset::sample(std::size_t row) const {
  std::vector<bool> out(features());
  for (std::size_t j = 0; j < features(); ++j) out[j] = columns_[j].test(row);
  return out;
}

BinaryDataset BinaryDataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<BitVector> columns(features(), BitVector(rows.size()));
  BitVector y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    for (std::size_t j = 0; j < features(); ++j) {
      if (columns_[j].test(r)) columns[j].set(i);
    }
    if (labels_.test(r)) y.set(i);
  }
  return BinaryDataset(names_, std::move(columns), std::move(y));
}

BitVector Coverage(const Antecedent& antecedent, const BinaryDataset& data) {
  BitVector covered(data.rows(), true);
  for (const Literal& lit : antecedent) {
    if (lit.feature_index >= data.features()) {
      throw DataError("literal references feature " + std::to_string(lit.feature_index) +
                      " but the dataset has " + std::to_string(data.features()));
    }
    if (lit.negated) {
      covered.and_not(data.column(lit.feature_index));
    } else {
      covered &= data.column(lit.feature_index);
    }
  }
  return covered;
}

BinaryDataset LoadCsv(const std::filesystem::path& path, const std::string& label_column) {
  const auto records = ReadRecords(path);
  const auto& header = records.front();
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DataError(path.string() + ": missing label column '" + label_column + "'");
  }
  const std::size_t label_idx = static_cast<std::size_t>(label_it - header.begin());
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) names.push_back(header[j]);
  }
  const std::size_t n = records.size() - 1;
  std::vector<BitVector> columns(names.size(), BitVector(n));
  BitVector labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = records[i + 1];
    if (rec.size() != header.size()) {
      throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(rec.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    std::size_t col = 0;
    for (std::size_t j = 0; j < rec.size(); ++j) {
      const std::string& cell = rec[j];
      if (cell != "0" && cell != "1") {
        throw DataError(path.string() + ": non-binary cell '" + cell + "' at row " +
                        std::to_string(i + 1) + ", column '" + header[j] + "'");
      }
      const bool bit = cell == "1";
      if (j == label_idx) {
        labels.set(i, bit);
      } else {
        columns[col++].set(i, bit);
      }
    }
  }
  return BinaryDataset(std::move(names), std::move(columns), std::move(labels));
}

void WriteCsv(const BinaryDataset& data, const std::filesystem::path& path,
              const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& name : data.feature_names()) out << QuoteCsv(name) << ',';
  out << QuoteCsv(label_column) << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.features(); ++j) out << (data.feature(i, j) ? "1," : "0,");
    out << (data.label(i) ? '1' : '0') << '\n';
  }
}

std::size_t RawTable::ColumnIndex(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DataError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

RawTable ReadRawCsv(const std::filesystem::path& path) {
  auto records = ReadRecords(path);
  RawTable table;
  table.columns = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.columns.size()) {
      throw DataError(path.string() + ": row " + std::to_string(i) + " has " +
                      std::to_string(records[i].size()) + " cells, expected " +
                      std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

std::vector<double> QuantileEdges(std::vector<double> values, int bins) {
  if (bins < 2) throw UsageError("numeric_bins must be at least 2");
  std::vector<double> edges;
  if (values.empty()) return edges;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double max = values.back();
  const auto b = static_cast<std::size_t>(bins);
  for (std::size_t i = 1; i < b; ++i) {
    const std::size_t rank = (i * n + b - 1) / b;  // ceil(i/b * n), exact
    const double edge = values[std::max<std::size_t>(rank, 1) - 1];
    if (edge < max && (edges.empty() || edges.back() != edge)) edges.push_back(edge);
  }
  return edges;
}

BinaryDataset Binarize(const RawTable& table, const BinarizeOptions& options,
                       std::vector<std::string>* warnings) {
  if (options.numeric_bins < 2) throw UsageError("numeric_bins must be at least 2");
  const std::size_t label_idx = table.ColumnIndex(options.label_column);
  for (const auto& d : options.drop) (void)table.ColumnIndex(d);
  const std::size_t n = table.rows.size();

  BitVector labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& cell = table.rows[i][label_idx];
    if (options.label_positive.empty()) {
      if (cell != "0" && cell != "1") {
        throw DataError("non-binary label '" + cell + "' at row " + std::to_string(i + 1));
      }
      labels.set(i, cell == "1");
    } else {
      labels.set(i, cell == options.label_positive);
    }
  }

  auto warn = [&](std::string msg) {
    if (warnings != nullptr) warnings->push_back(std::move(msg));
  };

  std::vector<std::string> names;
  std::vector<BitVector> columns;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const std::string& col = table.columns[c];
    if (c == label_idx || Contains(options.drop, col)) continue;

    std::vector<double> numbers(n);
    bool numeric = !Contains(options.categorical, col) && n > 0;
    for (std::size_t i = 0; numeric && i < n; ++i) {
      numeric = ParseDouble(table.rows[i][c], &numbers[i]);
    }

    if (numeric) {
      const auto [lo, hi] = std::minmax_element(numbers.begin(), numbers.end());
      if (*lo == *hi) {
        warn("column '" + col + "' is constant; emitting a single all-ones indicator");
        names.push_back(col + "<=" + FormatNumber(*hi));
        columns.emplace_back(n, true);
        continue;
      }
      std::vector<double> edges = QuantileEdges(numbers, options.numeric_bins);
      if (edges.empty()) {
        // Every quantile sits on the maximum: split just below it.
        double below = *lo;
        for (double v : numbers) {
          if (v < *hi) below = std::max(below, v);
        }
        edges.push_back(below);
      }
      for (double edge : edges) {
        BitVector bits(n);
        for (std::size_t i = 0; i < n; ++i) bits.set(i, numbers[i] <= edge);
        names.push_back(col + "<=" + FormatNumber(edge));
        columns.push_back(std::move(bits));
      }
      continue;
    }

    std::set<std::string> levels;
    for (const auto& row : table.rows) levels.insert(row[c]);
    std::vector<std::string> emitted(levels.begin(), levels.end());
    if (emitted.size() == 1) {
      warn("column '" + col + "' is constant; emitting a single all-ones indicator");
    } else if (emitted.size() == 2) {
      emitted.erase(emitted.begin());
    }
    for (const auto& level : emitted) {
      BitVector bits(n);
      for (std::size_t i = 0; i < n; ++i) bits.set(i, table.rows[i][c] == level);
      names.push_back(col + "=" + level);
      columns.push_back(std::move(bits));
    }
  }
  return BinaryDataset(std::move(names), std::move(columns), std::move(labels));
}

BinaryDataset Binarize(const RawTable& table, int numeric_bins, const std::string& label_column) {
  BinarizeOptions options;
  options.numeric_bins = numeric_bins;
  options.label_column = label_column;
  return Binarize(table, options);
}

std::vector<std::size_t> SplitPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 engine(SplitMix64(seed));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(UniformBelow(engine, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::pair<BinaryDataset, BinaryDataset> Split(const BinaryDataset& data, double train_fraction,
                                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw UsageError("train_fraction must lie in (0, 1)");
  }
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.rows())));
  if (n_train < 1) throw UsageError("train_fraction * n must be at least 1");
  const auto perm = SplitPermutation(data.rows(), seed);
  std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  // Sorted so that row order inside each part follows the source file.
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.Subset(train), data.Subset(test)};
}

MinedRuleSet MineRules(const BinaryDataset& data, int max_arity, double min_support_fraction) {
  if (max_arity != 1 && max_arity != 2) throw UsageError("max_arity must be 1 or 2");
  if (min_support_fraction < 0.0 || min_support_fraction > 1.0) {
    throw UsageError("min_support_fraction must lie in [0, 1]");
  }
  const double min_support = min_support_fraction * static_cast<double>(data.rows());
  const std::size_t m = data.features();

  std::vector<Literal> literals;
  std::vector<BitVector> literal_cover;
  for (std::size_t j = 0; j < m; ++j) {
    for (bool neg : {false, true}) {
      literals.push_back({j, neg});
      literal_cover.push_back(neg ? ~data.column(j) : data.column(j));
    }
  }

  MinedRuleSet out;
  out.max_arity = max_arity;
  for (std::size_t a = 0; a < literals.size(); ++a) {
    if (static_cast<double>(literal_cover[a].count()) >= min_support) {
      out.antecedents.push_back({literals[a]});
    }
    if (max_arity < 2) continue;
    for (std::size_t b = a + 1; b < literals.size(); ++b) {
      if (literals[b].feature_index == literals[a].feature_index) continue;
      if (static_cast<double>(count_and(literal_cover[a], literal_cover[b])) >= min_support) {
        out.antecedents.push_back({literals[a], literals[b]});
      }
    }
  }
  std::sort(out.antecedents.begin(), out.antecedents.end());
  if (out.antecedents.empty()) {
    throw DataError("rule mining produced no antecedent above the support threshold");
  }
  return out;
}

Recipe ParseRecipe(const std::string& text) {
  Recipe recipe;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  auto as_double = [&](const std::string& key, const std::string& v) {
    double d;
    if (!ParseDouble(v, &d)) throw UsageError("recipe: bad number for " + key + ": " + v);
    return d;
  };
  auto as_int = [&](const std::string& key, const std::string& v) {
    int i = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw UsageError("recipe: bad integer for " + key + ": " + v);
    }
    return i;
  };
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("recipe line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "label_column") {
      recipe.binarize.label_column = value;
    } else if (key == "label_positive") {
      recipe.binarize.label_positive = value;
    } else if (key == "numeric_bins") {
      recipe.binarize.numeric_bins = as_int(key, value);
    } else if (key == "drop") {
      recipe.binarize.drop = SplitList(value);
    } else if (key == "categorical") {
      recipe.binarize.categorical = SplitList(value);
    } else if (key == "max_arity") {
      recipe.max_arity = as_int(key, value);
    } else if (key == "min_support") {
      recipe.min_support = as_double(key, value);
    } else if (key == "lambda") {
      recipe.lambda = as_double(key, value);
    } else if (key == "max_length") {
      recipe.max_length = as_int(key, value);
    } else if (key == "confidence") {
      recipe.confidence = as_double(key, value);
    } else {
      throw UsageError("recipe line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (recipe.binarize.label_column.empty()) throw UsageError("recipe: label_column is required");
  return recipe;
}

Recipe LoadRecipe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open recipe " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRecipe(ss.str());
}

}  // namespace dprl
