#include <algorithm>
#include <cmath>
#include <numeric>

#include "otdp/complexity.hpp"
#include "otdp/error.hpp"

namespace otdp {

Matrix standardize(const Matrix& X) {
  Matrix out(X.rows(), X.cols());
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto col = X.col(j);
    if (X.rows() == 0 || col.minCoeff() == col.maxCoeff()) {
      out.col(j).setZero();
      continue;
    }
    double mean = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) mean += col(i);
    mean /= n;
    double var = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) var += (col(i) - mean) * (col(i) - mean);
    const double sd = std::sqrt(var / n);
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i, j) = (col(i) - mean) / sd;
  }
  return out;
}

void canonicalize(Matrix& X, Labels& y) {
  const auto rows = X.rows();
  const auto cols = X.cols();

  // Column key: sorted benign values followed by sorted malicious values.
  // Class sizes are shared by all columns, so keys have equal length.
  std::vector<std::vector<double>> keys(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) {
    auto& key = keys[static_cast<std::size_t>(j)];
    key.reserve(static_cast<std::size_t>(rows));
    for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
      const auto start = key.size();
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (y[static_cast<std::size_t>(i)] == cls) key.push_back(X(i, j));
      }
      std::sort(key.begin() + static_cast<std::ptrdiff_t>(start), key.end());
    }
  }
  std::vector<Eigen::Index> col_order(static_cast<std::size_t>(cols));
  std::iota(col_order.begin(), col_order.end(), Eigen::Index{0});
  std::stable_sort(col_order.begin(), col_order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });

  std::vector<Eigen::Index> row_order(static_cast<std::size_t>(rows));
  std::iota(row_order.begin(), row_order.end(), Eigen::Index{0});
  std::stable_sort(row_order.begin(), row_order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c : col_order) {
      if (X(a, c) != X(b, c)) return X(a, c) < X(b, c);
    }
    return y[static_cast<std::size_t>(a)] < y[static_cast<std::size_t>(b)];
  });

  Matrix out(rows, cols);
  Labels out_y(y.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto src = row_order[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = X(src, col_order[static_cast<std::size_t>(j)]);
    out_y[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(src)];
  }
  X = std::move(out);
  y = std::move(out_y);
}

Hyperplane train_linear_classifier(const Matrix& X, std::span<const std::uint8_t> y, const LinearConfig& config) {
  const auto n = X.rows();
  if (static_cast<std::size_t>(n) != y.size()) {
    throw Error(ErrorKind::invalid_argument, "feature matrix and labels differ in length");
  }
  const auto positives = std::count(y.begin(), y.end(), std::uint8_t{1});
  if (n == 0 || positives == 0 || positives == n) {
    throw Error(ErrorKind::degenerate, "linear classifier needs both classes");
  }

  std::vector<double> sign(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) sign[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] ? 1.0 : -1.0;

  Hyperplane h;
  h.weights = Vector::Zero(X.cols());
  Vector grad(X.cols());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 1; t <= config.epochs; ++t) {
    grad = config.regularization * h.weights;
    double grad_bias = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sign[static_cast<std::size_t>(i)];
      if (s * h.decision(X, i) < 1.0) {
        grad -= (s * inv_n) * X.row(i).transpose();
        grad_bias -= s * inv_n;
      }
    }
    const double eta = config.step / std::sqrt(static_cast<double>(t));
    h.weights -= eta * grad;
    h.bias -= eta * grad_bias;
  }

  std::size_t errors = 0;
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (h.predict(X, i) != y[static_cast<std::size_t>(i)]) ++errors;
    hinge += std::max(0.0, 1.0 - sign[static_cast<std::size_t>(i)] * h.decision(X, i));
  }
  h.training_error = static_cast<double>(errors) * inv_n;
  h.margin_loss = hinge * inv_n;
  return h;
}

}  // namespace otdp
