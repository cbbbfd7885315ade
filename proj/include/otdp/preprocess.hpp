#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otdp/ingest.hpp"
#include "otdp/matrix.hpp"
#include "otdp/table.hpp"

namespace otdp {

using Labels = std::vector<std::uint8_t>;  // 0 = benign, 1 = malicious

struct CleanResult {
  RawTable table;
  LabelSpec label;                     // column index re-based to the cleaned table
  std::vector<std::size_t> kept_rows;  // original row index of each surviving row
  std::size_t dropped_rows = 0;
  std::vector<std::string> dropped_columns;
};

// Drops missing-only columns, then every row with a missing feature or label cell.
CleanResult clean(RawTable table, const LabelSpec& label);

Labels binarize_labels(const RawTable& table, const LabelSpec& label);

struct ImbalanceStat {
  std::size_t n_benign = 0;
  std::size_t n_malicious = 0;
  double ir = 1.0;

  bool operator==(const ImbalanceStat&) const = default;
};

// Majority count over minority count.
ImbalanceStat imbalance_ratio(std::span<const std::uint8_t> y);

struct SamplingConfig {
  std::size_t k = 1000;
  std::uint64_t seed = 42;
};

// Class-ratio preserving sample without replacement. Returns ascending row
// indices into y. n_benign = round(k * p_benign), clamped so that each class
// keeps at least two rows.
std::vector<std::size_t> stratified_sample(std::span<const std::uint8_t> y, const SamplingConfig& config);

// Where an encoded feature column comes from.
struct FeatureSource {
  std::size_t column = 0;              // column in the cleaned table
  std::optional<std::string> category;  // set for one-hot indicator columns

  bool operator==(const FeatureSource&) const = default;
};

struct MatrixProvenance {
  std::string source_name;
  std::uint64_t seed = 0;
  std::size_t k_requested = 0;
  std::size_t dropped_rows = 0;
};

struct LabeledMatrix {
  std::vector<std::string> feature_names;
  std::vector<FeatureSource> sources;
  Matrix X;
  Labels y;
  MatrixProvenance provenance;
  std::vector<std::string> warnings;

  std::size_t n_rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(X.cols()); }
  bool is_indicator(std::size_t feature) const { return sources.at(feature).category.has_value(); }
};

inline constexpr std::size_t kDefaultCardinalityCap = 64;

// Numeric columns copy through; categorical columns with at most
// `cardinality_cap` distinct values (counted over the whole cleaned table)
// become "<col>=<value>" indicators in first-appearance order, wider ones are
// dropped with a warning. Only `rows` are materialised; y_rows holds their labels.
LabeledMatrix one_hot_encode(const RawTable& table, const LabelSpec& label, std::span<const std::size_t> rows,
                             std::span<const std::uint8_t> y_rows, std::size_t cardinality_cap = kDefaultCardinalityCap);

// Values of one encoded feature for every row of the cleaned table.
std::vector<double> encode_feature(const RawTable& table, const FeatureSource& source);

}  // namespace otdp
