#include "otdp/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "otdp/error.hpp"

namespace otdp {

std::string_view to_string(Binning binning) {
  return binning == Binning::equal_frequency ? "equal-frequency" : "equal-width";
}

Binning parse_binning(std::string_view text) {
  if (text == "equal-frequency") return Binning::equal_frequency;
  if (text == "equal-width") return Binning::equal_width;
  throw Error(ErrorKind::invalid_argument, "unknown binning '" + std::string(text) + "'");
}

std::vector<std::uint32_t> discretize(std::span<const double> x, std::size_t bins, Binning binning) {
  if (bins < 2) throw Error(ErrorKind::invalid_argument, "bins must be at least 2");
  std::vector<std::uint32_t> cells(x.size());
  if (x.empty()) return cells;

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  if (distinct.size() <= bins) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      cells[i] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), x[i]) - distinct.begin());
    }
    return cells;
  }

  if (binning == Binning::equal_width) {
    const double lo = distinct.front();
    const double width = (distinct.back() - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto b = static_cast<std::size_t>((x[i] - lo) / width);
      cells[i] = static_cast<std::uint32_t>(std::min(b, bins - 1));
    }
    return cells;
  }

  const std::size_t n = sorted.size();
  std::vector<double> edges;
  for (std::size_t b = 1; b < bins; ++b) {
    const std::size_t idx = b * n / bins;
    if (idx == 0 || idx >= n) continue;
    edges.push_back(0.5 * (sorted[idx - 1] + sorted[idx]));
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  // cell = number of edges strictly below the value, so equal values always share a cell
  for (std::size_t i = 0; i < x.size(); ++i) {
    cells[i] = static_cast<std::uint32_t>(std::lower_bound(edges.begin(), edges.end(), x[i]) - edges.begin());
  }
  return cells;
}

double mutual_information(std::span<const double> x, std::span<const std::uint8_t> y,
                          const FeatureSelectionConfig& config, bool categorical) {
  if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "feature and labels differ in length");
  if (x.size() < 4) throw Error(ErrorKind::too_small, "mutual information needs at least 4 samples");
  const auto positives = std::count(y.begin(), y.end(), std::uint8_t{1});
  if (positives == 0 || static_cast<std::size_t>(positives) == y.size()) {
    throw Error(ErrorKind::single_class, "mutual information needs both classes");
  }

  std::vector<std::uint32_t> cells;
  if (categorical) {
    std::map<double, std::uint32_t> ids;
    cells.reserve(x.size());
    for (double v : x) cells.push_back(ids.emplace(v, static_cast<std::uint32_t>(ids.size())).first->second);
  } else {
    cells = discretize(x, config.bins, config.binning);
  }

  const std::uint32_t n_cells = cells.empty() ? 0 : *std::max_element(cells.begin(), cells.end()) + 1;
  if (n_cells <= 1) return 0.0;

  std::vector<std::array<double, 2>> joint(n_cells, {0.0, 0.0});
  for (std::size_t i = 0; i < cells.size(); ++i) joint[cells[i]][y[i]] += 1.0;

  const double n = static_cast<double>(x.size());
  const double py[2] = {(n - static_cast<double>(positives)) / n, static_cast<double>(positives) / n};
  double mi = 0.0;
  for (const auto& row : joint) {
    const double px = (row[0] + row[1]) / n;
    for (int c = 0; c < 2; ++c) {
      if (row[c] == 0.0) continue;
      const double pxy = row[c] / n;
      mi += pxy * std::log2(pxy / (px * py[c]));
    }
  }
  return std::max(mi, 0.0);
}

std::vector<FeatureScore> rank_features(const LabeledMatrix& data, const FeatureSelectionConfig& config) {
  std::vector<FeatureScore> scores;
  scores.reserve(data.n_features());
  std::vector<double> column(data.n_rows());
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
      column[i] = data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const bool indicator = j < data.sources.size() && data.is_indicator(j);
    const std::string name = j < data.feature_names.size() ? data.feature_names[j] : "f" + std::to_string(j);
    scores.push_back({j, name, mutual_information(column, data.y, config, indicator)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.mi_bits > b.mi_bits; });
  return scores;
}

std::vector<std::size_t> select_top_m(std::span<const FeatureScore> ranking, std::size_t m) {
  std::vector<std::size_t> out;
  const std::size_t count = std::min(m, ranking.size());
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(ranking[i].feature_index);
  return out;
}

}  // namespace otdp
