#include "otdp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "otdp/error.hpp"
#include "otdp/random.hpp"

namespace otdp {

CleanResult clean(RawTable table, const LabelSpec& label) {
  if (label.column_index >= table.n_cols()) {
    throw Error(ErrorKind::invalid_argument, "label column index out of range");
  }
  CleanResult result;
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c != label.column_index && table.column(c).kind == ColumnKind::missing_only) {
      result.dropped_columns.push_back(table.column(c).name);
      continue;
    }
    if (c == label.column_index) {
      result.label = label;
      result.label.column_index = cols.size();
    }
    cols.push_back(c);
  }

  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    const bool complete = std::none_of(cols.begin(), cols.end(), [&](std::size_t c) { return table.is_missing(r, c); });
    if (complete) result.kept_rows.push_back(r);
  }
  result.dropped_rows = table.n_rows() - result.kept_rows.size();
  if (result.kept_rows.empty()) {
    throw Error(ErrorKind::empty_after_clean, "every row has a missing feature or label value");
  }

  if (result.dropped_rows == 0 && result.dropped_columns.empty()) {
    result.table = std::move(table);
  } else {
    result.table = table.select(result.kept_rows, cols);
    describe_columns(result.table);
  }
  return result;
}

Labels binarize_labels(const RawTable& table, const LabelSpec& label) {
  Labels y(table.n_rows());
  bool benign = false;
  bool malicious = false;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    y[r] = label.is_benign(table.cell(r, label.column_index)) ? 0 : 1;
    (y[r] == 0 ? benign : malicious) = true;
  }
  if (!benign || !malicious) {
    throw Error(ErrorKind::single_class, benign ? "labels contain no malicious rows" : "labels contain no benign rows");
  }
  return y;
}

ImbalanceStat imbalance_ratio(std::span<const std::uint8_t> y) {
  ImbalanceStat stat;
  stat.n_malicious = static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
  stat.n_benign = y.size() - stat.n_malicious;
  if (stat.n_benign == 0 || stat.n_malicious == 0) {
    throw Error(ErrorKind::single_class, "imbalance ratio is undefined for a single class");
  }
  const auto [lo, hi] = std::minmax(stat.n_benign, stat.n_malicious);
  stat.ir = static_cast<double>(hi) / static_cast<double>(lo);
  return stat;
}

std::vector<std::size_t> stratified_sample(std::span<const std::uint8_t> y, const SamplingConfig& config) {
  if (config.k < 2) throw Error(ErrorKind::invalid_argument, "sample size k must be at least 2");
  std::vector<std::size_t> benign;
  std::vector<std::size_t> malicious;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 0 ? benign : malicious).push_back(i);
  if (benign.size() < 2 || malicious.size() < 2) {
    throw Error(ErrorKind::insufficient_class, "each class needs at least two rows (benign " +
                                                   std::to_string(benign.size()) + ", malicious " +
                                                   std::to_string(malicious.size()) + ")");
  }

  const std::size_t n = y.size();
  const std::size_t k = config.k;
  if (k >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }

  const double p_benign = static_cast<double>(benign.size()) / static_cast<double>(n);
  const std::size_t floor_per_class = std::min<std::size_t>(2, k / 2);
  auto n_benign = static_cast<std::size_t>(std::llround(static_cast<double>(k) * p_benign));
  n_benign = std::clamp(n_benign, floor_per_class, k - floor_per_class);
  n_benign = std::min(n_benign, benign.size());
  if (k - n_benign > malicious.size()) n_benign = k - malicious.size();
  const std::size_t n_malicious = k - n_benign;

  SeededRng rng(config.seed);
  auto draw = [&rng](std::vector<std::size_t>& pool, std::size_t count) {
    // Partial Fisher-Yates: the first `count` slots become the sample.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
  };
  draw(benign, n_benign);
  draw(malicious, n_malicious);

  std::vector<std::size_t> sample;
  sample.reserve(k);
  sample.insert(sample.end(), benign.begin(), benign.end());
  sample.insert(sample.end(), malicious.begin(), malicious.end());
  std::sort(sample.begin(), sample.end());
  return sample;
}

namespace {

std::vector<std::string> first_appearance_domain(const RawTable& table, std::size_t col, std::size_t limit) {
  std::vector<std::string> domain;
  std::unordered_map<std::string_view, bool> seen;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    const auto v = trim(table.cell(r, col));
    if (seen.emplace(v, true).second) {
      domain.emplace_back(v);
      if (domain.size() > limit) break;
    }
  }
  return domain;
}

double feature_value(const RawTable& table, std::size_t row, const FeatureSource& source) {
  const auto text = table.cell(row, source.column);
  if (source.category) return trim(text) == *source.category ? 1.0 : 0.0;
  const auto value = parse_real(text);
  if (!value) {
    throw Error(ErrorKind::parse, "column " + table.column(source.column).name + ": value '" + std::string(text) +
                                      "' is not numeric");
  }
  return *value;
}

}  // namespace

LabeledMatrix one_hot_encode(const RawTable& table, const LabelSpec& label, std::span<const std::size_t> rows,
                             std::span<const std::uint8_t> y_rows, std::size_t cardinality_cap) {
  if (rows.size() != y_rows.size()) {
    throw Error(ErrorKind::invalid_argument, "row selection and labels differ in length");
  }
  LabeledMatrix out;
  out.provenance.source_name = table.source_name();
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c == label.column_index) continue;
    const ColumnMeta& meta = table.column(c);
    if (meta.kind == ColumnKind::missing_only) continue;
    if (meta.kind == ColumnKind::numeric) {
      out.feature_names.push_back(meta.name);
      out.sources.push_back({c, std::nullopt});
      continue;
    }
    auto domain = first_appearance_domain(table, c, cardinality_cap);
    if (domain.size() > cardinality_cap) {
      out.warnings.push_back("high-cardinality categorical dropped: " + meta.name + " (more than " +
                             std::to_string(cardinality_cap) + " distinct values)");
      continue;
    }
    for (auto& value : domain) {
      out.feature_names.push_back(meta.name + "=" + value);
      out.sources.push_back({c, std::move(value)});
    }
  }
  if (out.sources.empty()) throw Error(ErrorKind::no_features, "no feature column survived encoding");

  out.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.sources.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < out.sources.size(); ++j) {
      out.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feature_value(table, rows[i], out.sources[j]);
    }
  }
  out.y.assign(y_rows.begin(), y_rows.end());
  return out;
}

std::vector<double> encode_feature(const RawTable& table, const FeatureSource& source) {
  std::vector<double> values(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) values[r] = feature_value(table, r, source);
  return values;
}

}  // namespace otdp
