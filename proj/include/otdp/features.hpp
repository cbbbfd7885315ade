#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otdp/preprocess.hpp"

namespace otdp {

enum class Binning { equal_frequency, equal_width };

std::string_view to_string(Binning binning);
Binning parse_binning(std::string_view text);

struct FeatureSelectionConfig {
  std::size_t m = 10;
  std::size_t bins = 10;
  Binning binning = Binning::equal_frequency;
};

struct FeatureScore {
  std::size_t feature_index = 0;
  std::string feature_name;
  double mi_bits = 0.0;

  bool operator==(const FeatureScore&) const = default;
};

// Maps each value to a cell id. Columns with at most `bins` distinct values
// keep one cell per value; otherwise equal-frequency cells (edges at the
// midpoint between neighbouring order statistics, duplicate edges merged) or
// equal-width cells over [min, max].
std::vector<std::uint32_t> discretize(std::span<const double> x, std::size_t bins, Binning binning);

// Plug-in estimate of I(X;Y) in bits. Indicator columns (`categorical`) are
// used as-is; continuous columns are discretized first. A constant column
// scores exactly 0.
double mutual_information(std::span<const double> x, std::span<const std::uint8_t> y,
                          const FeatureSelectionConfig& config = {}, bool categorical = false);

// One score per column, by descending MI; equal scores keep ascending index order.
std::vector<FeatureScore> rank_features(const LabeledMatrix& data, const FeatureSelectionConfig& config = {});

std::vector<std::size_t> select_top_m(std::span<const FeatureScore> ranking, std::size_t m);

}  // namespace otdp
