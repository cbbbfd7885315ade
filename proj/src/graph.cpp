#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "otdp/complexity.hpp"
#include "otdp/error.hpp"

namespace otdp {

Matrix pairwise_distances(const Matrix& X) {
  const auto n = X.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (X.row(i) - X.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& out : edges) total += out.size();
  return total;
}

NeighborGraph build_neighbor_graph(const Matrix& distances, std::size_t k_graph) {
  const auto n = static_cast<std::size_t>(distances.rows());
  if (k_graph == 0 || n < k_graph + 1) {
    throw Error(ErrorKind::too_small, "kNN graph needs more than k_graph = " + std::to_string(k_graph) + " points");
  }
  NeighborGraph graph;
  graph.n = n;
  graph.kind = GraphKind::knn;
  graph.edges.resize(n);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) candidates.push_back(j);
    }
    const auto row = static_cast<Eigen::Index>(i);
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k_graph), candidates.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = distances(row, static_cast<Eigen::Index>(a));
                        const double db = distances(row, static_cast<Eigen::Index>(b));
                        return da != db ? da < db : a < b;
                      });
    graph.edges[i].assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k_graph));
    std::sort(graph.edges[i].begin(), graph.edges[i].end());
  }
  return graph;
}

NeighborGraph build_epsilon_graph(const Matrix& distances, double epsilon) {
  NeighborGraph graph;
  graph.n = static_cast<std::size_t>(distances.rows());
  graph.kind = GraphKind::epsilon;
  graph.edges.resize(graph.n);
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = 0; j < graph.n; ++j) {
      if (i != j && distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < epsilon) {
        graph.edges[i].push_back(j);
      }
    }
  }
  return graph;
}

NeighborGraph same_class_graph(const NeighborGraph& graph, std::span<const std::uint8_t> y) {
  NeighborGraph out;
  out.n = graph.n;
  out.kind = graph.kind;
  out.edges.resize(graph.n);
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j : graph.edges[i]) {
      if (y[i] != y[j]) continue;
      out.edges[i].push_back(j);
      out.edges[j].push_back(i);
    }
  }
  for (auto& adj : out.edges) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> minimum_spanning_tree(const Matrix& distances) {
  const auto n = static_cast<std::size_t>(distances.rows());
  if (n < 2) throw Error(ErrorKind::too_small, "minimum spanning tree needs at least two points");

  using Key = std::tuple<double, std::size_t, std::size_t>;  // weight, min index, max index
  const Key none{std::numeric_limits<double>::infinity(), n, n};
  std::vector<Key> best(n, none);
  std::vector<bool> in_tree(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(n - 1);

  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Key candidate{distances(static_cast<Eigen::Index>(current), static_cast<Eigen::Index>(v)),
                          std::min(current, v), std::max(current, v)};
      if (candidate < best[v]) best[v] = candidate;
    }
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (next == n || best[v] < best[next])) next = v;
    }
    in_tree[next] = true;
    edges.emplace_back(std::get<1>(best[next]), std::get<2>(best[next]));
    current = next;
  }
  return edges;
}

}  // namespace otdp
