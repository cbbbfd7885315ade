#include <algorithm>
#include <numeric>

#include "otdp/complexity.hpp"
#include "otdp/error.hpp"

namespace otdp {
namespace {

MeasureContext prepared_context(const Matrix& X, std::span<const std::uint8_t> y, const ComplexityConfig& config) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw Error(ErrorKind::invalid_argument, "feature matrix and labels differ in length");
  }
  if (y.size() > config.max_rows) {
    throw Error(ErrorKind::too_large, "complexity measures are limited to " + std::to_string(config.max_rows) +
                                          " points; sample the data first");
  }
  Matrix canonical = X;
  Labels labels(y.begin(), y.end());
  canonicalize(canonical, labels);
  return MeasureContext(standardize(canonical), std::move(labels), config);
}

}  // namespace

MeasureOutcome compute_measure(const Matrix& X, std::span<const std::uint8_t> y, MeasureId id,
                               const ComplexityConfig& config) {
  return compute_measure(prepared_context(X, y, config), id);
}

ComplexityReport complexity_report(const Matrix& X, std::span<const std::uint8_t> y,
                                   const ComplexityConfig& config) {
  const MeasureContext ctx = prepared_context(X, y, config);
  ComplexityReport report;
  double total = 0.0;
  for (MeasureId id : kAllMeasures) {
    MeasureOutcome outcome = compute_measure(ctx, id);
    if (auto* v = std::get_if<MeasureValue>(&outcome)) {
      total += v->normalized;
      report.measures.push_back(*v);
    } else {
      report.skipped.push_back(std::get<SkippedMeasure>(std::move(outcome)));
    }
  }
  if (report.measures.empty()) throw Error(ErrorKind::degenerate, "every complexity measure was skipped");
  report.cs = total / static_cast<double>(report.measures.size());
  report.ir = imbalance_ratio(y);
  report.k_used = y.size();
  report.m_used = static_cast<std::size_t>(X.cols());
  report.seed = config.seed;
  report.low_confidence = report.skipped.size() > kLowConfidenceSkips;
  return report;
}

ComplexityReport complexity_report(const LabeledMatrix& data, std::span<const std::size_t> selection,
                                   const ComplexityConfig& config) {
  Matrix X(data.X.rows(), static_cast<Eigen::Index>(selection.size()));
  for (std::size_t k = 0; k < selection.size(); ++k) {
    if (selection[k] >= data.n_features()) throw Error(ErrorKind::invalid_argument, "feature index out of range");
    X.col(static_cast<Eigen::Index>(k)) = data.X.col(static_cast<Eigen::Index>(selection[k]));
  }
  return complexity_report(X, data.y, config);
}

}  // namespace otdp
