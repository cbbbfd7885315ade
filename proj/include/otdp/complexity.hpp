#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "otdp/matrix.hpp"
#include "otdp/preprocess.hpp"

namespace otdp {

enum class MeasureFamily { feature_based, linearity, neighbourhood, network, dimensionality, class_imbalance };

enum class MeasureId {
  F1, F1v, F2, F3, F4,
  L1, L2, L3,
  N1, N2, N3, N4, T1, LSC,
  Density, ClsCoef, Hubs,
  T2, T3, T4,
  C1, C2,
};

inline constexpr std::size_t kMeasureCount = 22;

inline constexpr std::array<MeasureId, kMeasureCount> kAllMeasures{
    MeasureId::F1,  MeasureId::F1v, MeasureId::F2,      MeasureId::F3,      MeasureId::F4,   MeasureId::L1,
    MeasureId::L2,  MeasureId::L3,  MeasureId::N1,      MeasureId::N2,      MeasureId::N3,   MeasureId::N4,
    MeasureId::T1,  MeasureId::LSC, MeasureId::Density, MeasureId::ClsCoef, MeasureId::Hubs, MeasureId::T2,
    MeasureId::T3,  MeasureId::T4,  MeasureId::C1,      MeasureId::C2,
};

// Reference entry printed by `otdp measures` and mirrored in docs/measures.md.
struct MeasureInfo {
  MeasureId id;
  std::string_view name;
  MeasureFamily family;
  std::string_view title;
  std::string_view formula;
  std::string_view raw_range;
  std::string_view normalization;
  std::string_view skipped_when;
};

const MeasureInfo& measure_info(MeasureId id);
std::string_view to_string(MeasureId id);
std::string_view to_string(MeasureFamily family);
std::optional<MeasureId> parse_measure_id(std::string_view name);

struct MeasureValue {
  MeasureId id;
  double raw = 0.0;
  double normalized = 0.0;  // in [0, 1], 1 = most complex

  bool operator==(const MeasureValue&) const = default;
};

struct SkippedMeasure {
  MeasureId id;
  std::string reason;

  bool operator==(const SkippedMeasure&) const = default;
};

using MeasureOutcome = std::variant<MeasureValue, SkippedMeasure>;

struct LinearConfig {
  std::size_t epochs = 500;
  double step = 0.01;  // learning rate at epoch t is step / sqrt(t)
  double regularization = 1e-3;
};

struct ComplexityConfig {
  std::size_t k_graph = 5;
  LinearConfig linear;
  double pca_variance = 0.95;
  std::uint64_t seed = 42;
  std::size_t max_rows = 5000;  // pairwise distances are held in memory
};

// Column-wise z-score with the population variance; zero-variance columns become 0.
Matrix standardize(const Matrix& X);

// Sorts columns by a permutation-invariant key, then rows lexicographically.
// Everything downstream is then independent of the input row and column order.
void canonicalize(Matrix& X, Labels& y);

struct Hyperplane {
  Vector weights;
  double bias = 0.0;
  double training_error = 0.0;  // 0/1 loss on the training rows
  double margin_loss = 0.0;     // mean hinge loss

  double decision(const Matrix& X, Eigen::Index row) const { return X.row(row).dot(weights) + bias; }
  // Malicious (1) when the decision value is positive.
  std::uint8_t predict(const Matrix& X, Eigen::Index row) const { return decision(X, row) > 0.0 ? 1 : 0; }
};

// L2-regularised hinge loss, deterministic full-batch subgradient descent from zero.
Hyperplane train_linear_classifier(const Matrix& X, std::span<const std::uint8_t> y, const LinearConfig& config = {});

Matrix pairwise_distances(const Matrix& X);

enum class GraphKind { knn, epsilon };

struct NeighborGraph {
  std::size_t n = 0;
  GraphKind kind = GraphKind::knn;
  std::vector<std::vector<std::size_t>> edges;  // sorted adjacency per node

  std::size_t edge_count() const;  // directed edges
};

// Out-edges to the k_graph nearest other points; equal distances prefer the lower index.
NeighborGraph build_neighbor_graph(const Matrix& distances, std::size_t k_graph);
// Edges between every pair closer than epsilon.
NeighborGraph build_epsilon_graph(const Matrix& distances, double epsilon);
// Undirected version of `graph` with opposite-class edges removed.
NeighborGraph same_class_graph(const NeighborGraph& graph, std::span<const std::uint8_t> y);

// Prim's algorithm on a dense distance matrix. Edges are (min, max) index
// pairs; equal weights are resolved by lexicographic (min, max) order, so the
// tree is unique.
std::vector<std::pair<std::size_t, std::size_t>> minimum_spanning_tree(const Matrix& distances);

// Standardised data plus everything several measures share (distances,
// classifier, graphs, synthetic interpolation points). Built once per report.
class MeasureContext {
 public:
  // X must already be standardised.
  MeasureContext(Matrix X, Labels y, const ComplexityConfig& config = {});

  const Matrix& X() const { return X_; }
  const Labels& y() const { return y_; }
  const Matrix& distances() const { return distances_; }
  const Hyperplane& hyperplane() const { return hyperplane_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& mst() const { return mst_; }
  const std::optional<NeighborGraph>& network() const { return network_; }
  const Matrix& synthetic_X() const { return synthetic_X_; }
  const Labels& synthetic_y() const { return synthetic_y_; }
  const ComplexityConfig& config() const { return config_; }
  std::size_t n() const { return y_.size(); }
  std::size_t m() const { return static_cast<std::size_t>(X_.cols()); }

  // Nearest other point (lowest index on ties), optionally restricted to the
  // same (or the opposite) class.
  std::size_t nearest(std::size_t i) const;
  std::optional<std::size_t> nearest_same(std::size_t i) const;
  std::size_t nearest_enemy(std::size_t i) const;

 private:
  Matrix X_;
  Labels y_;
  ComplexityConfig config_;
  Matrix distances_;
  Hyperplane hyperplane_;
  std::vector<std::pair<std::size_t, std::size_t>> mst_;
  std::optional<NeighborGraph> network_;
  Matrix synthetic_X_;
  Labels synthetic_y_;
};

MeasureOutcome compute_measure(const MeasureContext& context, MeasureId id);
// Convenience form: standardises X and builds a fresh context.
MeasureOutcome compute_measure(const Matrix& X, std::span<const std::uint8_t> y, MeasureId id,
                               const ComplexityConfig& config = {});

inline constexpr std::size_t kLowConfidenceSkips = 6;

struct ComplexityReport {
  std::vector<MeasureValue> measures;
  std::vector<SkippedMeasure> skipped;
  double cs = 0.0;
  ImbalanceStat ir;
  std::size_t k_used = 0;
  std::size_t m_used = 0;
  std::uint64_t seed = 0;
  bool low_confidence = false;

  bool operator==(const ComplexityReport&) const = default;
};

// All 22 measures on X (already restricted to the selected features). Rows
// and columns are canonicalised first, so CS is bitwise independent of their order.
ComplexityReport complexity_report(const Matrix& X, std::span<const std::uint8_t> y,
                                   const ComplexityConfig& config = {});
ComplexityReport complexity_report(const LabeledMatrix& data, std::span<const std::size_t> selection,
                                   const ComplexityConfig& config = {});

}  // namespace otdp
