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
// Binary tabular datasets: CSV ingestion, quantile/one-hot binarization,
// seeded train/test splitting and exhaustive mining of short conjunctions.

#ifndef DPRL_DATASET_HPP_
#define DPRL_DATASET_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dprl/bitvector.hpp"

namespace dprl {

// n samples x m binary features plus a binary label. Stored column-major as
// packed bits so rule coverage is a handful of word operations.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(std::vector<std::string> feature_names, std::vector<BitVector> columns,
                BitVector labels);

  // rows[i][j] is feature j of sample i; every value must be 0 or 1.
  static BinaryDataset FromRows(std::vector<std::string> feature_names,
                                const std::vector<std::vector<std::uint8_t>>& rows,
                                const std::vector<std::uint8_t>& labels);

  std::size_t rows() const { return labels_.size(); }
  std::size_t features() const { return columns_.size(); }
  bool empty() const { return rows() == 0; }

  bool feature(std::size_t row, std::size_t j) const { return columns_[j].test(row); }
  bool label(std::size_t row) const { return labels_.test(row); }
  std::vector<bool> sample(std::size_t row) const;

  const BitVector& column(std::size_t j) const { return columns_[j]; }
  const BitVector& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  // Rows in the given order (duplicates allowed).
  BinaryDataset Subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> names_;
  std::vector<BitVector> columns_;
  BitVector labels_;
};

struct Literal {
  std::size_t feature_index = 0;
  bool negated = false;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Conjunction of literals; empty means "always true".
using Antecedent = std::vector<Literal>;

// Rows of `data` on which every literal of the antecedent holds.
BitVector Coverage(const Antecedent& antecedent, const BinaryDataset& data);

struct MinedRuleSet {
  std::vector<Antecedent> antecedents;
  int max_arity = 2;

  std::size_t size() const { return antecedents.size(); }
};

// Reads a header-first CSV whose cells are all 0/1. The label column is
// removed from the features; the remaining columns keep their file order.
BinaryDataset LoadCsv(const std::filesystem::path& path, const std::string& label_column);
void WriteCsv(const BinaryDataset& data, const std::filesystem::path& path,
              const std::string& label_column);

// Untyped table as read from a raw CSV.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t ColumnIndex(const std::string& name) const;  // throws DataError
};

RawTable ReadRawCsv(const std::filesystem::path& path);

struct BinarizeOptions {
  std::string label_column;
  // Raw label value mapped to 1; when empty the label must already be 0/1.
  std::string label_positive;
  int numeric_bins = 2;
  std::vector<std::string> drop;         // removed before encoding
  std::vector<std::string> categorical;  // forced one-hot even if numeric
};

// Numeric columns become "col<=edge" threshold indicators at the nearest-rank
// quantiles (duplicate edges collapsed); other columns are one-hot encoded
// ("col=value"), with a single indicator for two-valued columns. Warnings
// (constant columns) are appended to `warnings` when given.
BinaryDataset Binarize(const RawTable& table, const BinarizeOptions& options,
                       std::vector<std::string>* warnings = nullptr);
BinaryDataset Binarize(const RawTable& table, int numeric_bins, const std::string& label_column);

// Nearest-rank quantile edges for `bins` equal-probability bins. The top edge
// (the maximum) is never emitted.
std::vector<double> QuantileEdges(std::vector<double> values, int bins);

// Disjoint (train, test) partition with |train| = floor(train_fraction * n).
std::pair<BinaryDataset, BinaryDataset> Split(const BinaryDataset& data, double train_fraction,
                                              std::uint64_t seed);
// Row indices of the training part, in shuffled order, followed by the test part.
std::vector<std::size_t> SplitPermutation(std::size_t n, std::uint64_t seed);

// All single literals and (max_arity = 2) all literal pairs over distinct
// features whose support is at least min_support_fraction * n, ordered
// lexicographically by (feature index, positive before negated).
MinedRuleSet MineRules(const BinaryDataset& data, int max_arity, double min_support_fraction);

// Prepared-dataset recipe read from key=value lines ('#' starts a comment).
struct Recipe {
  BinarizeOptions binarize;
  int max_arity = 2;
  double min_support = 0.0;
  double lambda = 0.05;
  int max_length = 5;
  double confidence = 0.99;
};

Recipe ParseRecipe(const std::string& text);
Recipe LoadRecipe(const std::filesystem::path& path);

}  // namespace dprl

#endif  // DPRL_DATASET_HPP_
