#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "otdp/complexity.hpp"
#include "otdp/error.hpp"
#include "otdp/random.hpp"

namespace otdp {
namespace {

// Fisher ratios can be unbounded (zero within-class spread); they are reported
// capped so that every raw value stays a finite number.
constexpr double kRatioCap = 1e12;

const std::array<MeasureInfo, kMeasureCount> kInfo{{
    {MeasureId::F1, "F1", MeasureFamily::feature_based, "Maximum Fisher's discriminant ratio",
     "r_j = sum_c n_c (mu_cj - mu_j)^2 / sum_c sum_{i in c} (x_ij - mu_cj)^2; raw = max_j r_j",
     "[0, 1e12] (capped)", "1 / (1 + raw)", "never"},
    {MeasureId::F1v, "F1v", MeasureFamily::feature_based, "Directional-vector maximum Fisher's discriminant ratio",
     "W = p0 S0 + p1 S1 (class covariances), delta = mu1 - mu0; raw = delta^T W^-1 delta",
     "[0, 1e12] (capped)", "1 / (1 + raw)",
     "within-class scatter W is rank-deficient (smallest eigenvalue <= 1e-10 * largest)"},
    {MeasureId::F2, "F2", MeasureFamily::feature_based, "Volume of the overlapping region",
     "prod_j max(0, minmax_j - maxmin_j) / (maxmax_j - minmin_j); a constant feature contributes 1",
     "[0, 1]", "identity", "never"},
    {MeasureId::F3, "F3", MeasureFamily::feature_based, "Maximum individual feature efficiency",
     "min_j |{i : maxmin_j <= x_ij <= minmax_j}| / n", "[0, 1]", "identity", "never"},
    {MeasureId::F4, "F4", MeasureFamily::feature_based, "Collective feature efficiency",
     "repeatedly take the feature with the fewest points in its overlap region and keep only those points; "
     "raw = remaining points / n",
     "[0, 1]", "identity", "never"},
    {MeasureId::L1, "L1", MeasureFamily::linearity, "Sum of the error distance by linear programming",
     "s = (1/n) sum over misclassified points of |w.x + b| / ||w|| (hinge-loss linear classifier)",
     "[0, inf)", "raw / (1 + raw)", "classifier weights are all zero"},
    {MeasureId::L2, "L2", MeasureFamily::linearity, "Error rate of the linear classifier",
     "fraction of training points misclassified by the hinge-loss linear classifier", "[0, 1]", "identity",
     "never"},
    {MeasureId::L3, "L3", MeasureFamily::linearity, "Non-linearity of the linear classifier",
     "error of the linear classifier on n synthetic points, each the midpoint of a random same-class pair "
     "(seeded)",
     "[0, 1]", "identity", "never"},
    {MeasureId::N1, "N1", MeasureFamily::neighbourhood, "Fraction of borderline points",
     "points incident to a minimum-spanning-tree edge joining opposite classes, divided by n", "[0, 1]",
     "identity", "never"},
    {MeasureId::N2, "N2", MeasureFamily::neighbourhood, "Ratio of intra/extra class nearest-neighbour distance",
     "r = sum_i d(x_i, nearest same-class point) / sum_i d(x_i, nearest enemy)", "[0, inf)",
     "raw / (1 + raw)", "a class has a single point, or every nearest enemy is at distance 0"},
    {MeasureId::N3, "N3", MeasureFamily::neighbourhood, "Error rate of the nearest-neighbour classifier",
     "leave-one-out 1-NN error", "[0, 1]", "identity", "never"},
    {MeasureId::N4, "N4", MeasureFamily::neighbourhood, "Non-linearity of the nearest-neighbour classifier",
     "1-NN error on the L3 synthetic points", "[0, 1]", "identity", "never"},
    {MeasureId::T1, "T1", MeasureFamily::neighbourhood, "Fraction of hyperspheres covering data",
     "spheres grow from each point until they touch the sphere of the nearest enemy (mutual nearest enemies split "
     "their distance); spheres contained in a same-class sphere are absorbed; "
     "raw = remaining spheres / n",
     "(0, 1]", "identity", "never"},
    {MeasureId::LSC, "LSC", MeasureFamily::neighbourhood, "Local set average cardinality",
     "1 - (1/n^2) sum_i |{j : d(x_i, x_j) < d(x_i, nearest enemy)}|", "[0, 1)", "identity", "never"},
    {MeasureId::Density, "Density", MeasureFamily::network, "Density of the same-class kNN graph",
     "1 - 2|E| / (n(n-1)) on the undirected kNN graph (k = 5) without opposite-class edges", "[0, 1]",
     "identity", "fewer than k_graph + 1 points"},
    {MeasureId::ClsCoef, "ClsCoef", MeasureFamily::network, "Clustering coefficient",
     "1 - mean_i 2 e_i / (k_i (k_i - 1)) on the same graph; nodes with degree < 2 contribute 0", "[0, 1]",
     "identity", "fewer than k_graph + 1 points"},
    {MeasureId::Hubs, "Hubs", MeasureFamily::network, "Hub score",
     "1 - mean hub score; hub scores are the principal eigenvector of A A^T (power iteration), max scaled to 1",
     "[0, 1]", "identity", "fewer than k_graph + 1 points, or the graph has no edges"},
    {MeasureId::T2, "T2", MeasureFamily::dimensionality, "Average number of features per point", "m / n",
     "(0, inf)", "min(1, raw)", "never"},
    {MeasureId::T3, "T3", MeasureFamily::dimensionality, "Average number of PCA dimensions per point",
     "m' / n, m' = principal components needed for 95% of the variance", "(0, inf)", "min(1, raw)",
     "all features are constant"},
    {MeasureId::T4, "T4", MeasureFamily::dimensionality, "Ratio of PCA dimensions to the original dimension",
     "m' / m", "(0, 1]", "identity", "all features are constant"},
    {MeasureId::C1, "C1", MeasureFamily::class_imbalance, "Entropy of class proportions",
     "raw = -sum_c p_c log2 p_c (1 = balanced)", "[0, 1]", "1 - raw", "never"},
    {MeasureId::C2, "C2", MeasureFamily::class_imbalance, "Imbalance ratio",
     "raw = (1/2) (n0/n1 + n1/n0)", "[1, inf)", "1 - 1 / raw", "never"},
}};

std::size_t class_count(const Labels& y, std::uint8_t cls) {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), cls));
}

MeasureValue value(MeasureId id, double raw, double normalized) {
  return {id, raw, std::clamp(normalized, 0.0, 1.0)};
}

SkippedMeasure skip(MeasureId id, std::string reason) { return {id, std::move(reason)}; }

struct ClassRange {
  double min[2];
  double max[2];
  bool present[2];
};

ClassRange class_range(const Matrix& X, const Labels& y, Eigen::Index j, std::span<const std::size_t> rows) {
  ClassRange r{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
               {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()},
               {false, false}};
  for (std::size_t i : rows) {
    const int c = y[i];
    const double v = X(static_cast<Eigen::Index>(i), j);
    r.min[c] = std::min(r.min[c], v);
    r.max[c] = std::max(r.max[c], v);
    r.present[c] = true;
  }
  return r;
}

// Points of `rows` inside the overlap interval [max of mins, min of maxes] of feature j.
std::vector<std::size_t> overlap_points(const Matrix& X, const Labels& y, Eigen::Index j,
                                        std::span<const std::size_t> rows) {
  std::vector<std::size_t> inside;
  const ClassRange r = class_range(X, y, j, rows);
  if (!r.present[0] || !r.present[1]) return inside;
  const double lo = std::max(r.min[0], r.min[1]);
  const double hi = std::min(r.max[0], r.max[1]);
  if (hi < lo) return inside;
  for (std::size_t i : rows) {
    const double v = X(static_cast<Eigen::Index>(i), j);
    if (v >= lo && v <= hi) inside.push_back(i);
  }
  return inside;
}

MeasureOutcome measure_f1(const MeasureContext& ctx) {
  const Matrix& X = ctx.X();
  const Labels& y = ctx.y();
  const double n_c[2] = {static_cast<double>(class_count(y, 0)), static_cast<double>(class_count(y, 1))};
  double best = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double sum[2] = {0.0, 0.0};
    for (Eigen::Index i = 0; i < X.rows(); ++i) sum[y[static_cast<std::size_t>(i)]] += X(i, j);
    const double mu_c[2] = {sum[0] / n_c[0], sum[1] / n_c[1]};
    const double mu = (sum[0] + sum[1]) / static_cast<double>(X.rows());
    double within = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double d = X(i, j) - mu_c[y[static_cast<std::size_t>(i)]];
      within += d * d;
    }
    const double between = n_c[0] * (mu_c[0] - mu) * (mu_c[0] - mu) + n_c[1] * (mu_c[1] - mu) * (mu_c[1] - mu);
    double ratio = 0.0;
    if (within > 0.0) ratio = between / within;
    else if (between > 0.0) ratio = kRatioCap;
    best = std::max(best, std::min(ratio, kRatioCap));
  }
  return value(MeasureId::F1, best, 1.0 / (1.0 + best));
}

MeasureOutcome measure_f1v(const MeasureContext& ctx) {
  const Matrix& X = ctx.X();
  const Labels& y = ctx.y();
  const auto m = X.cols();
  const double n = static_cast<double>(X.rows());
  Vector mu[2] = {Vector::Zero(m), Vector::Zero(m)};
  double count[2] = {0.0, 0.0};
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    mu[c] += X.row(i).transpose();
    count[c] += 1.0;
  }
  mu[0] /= count[0];
  mu[1] /= count[1];
  // W = sum_c p_c * Cov_c = (1/n) sum_i (x_i - mu_c)(x_i - mu_c)^T
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Vector d = X.row(i).transpose() - mu[y[static_cast<std::size_t>(i)]];
    W.noalias() += d * d.transpose();
  }
  W /= n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W);
  const auto& lambda = eig.eigenvalues();
  const double largest = lambda.maxCoeff();
  if (!(largest > 0.0) || lambda.minCoeff() <= 1e-10 * largest) {
    return skip(MeasureId::F1v, "within-class scatter matrix is rank-deficient");
  }
  const Vector delta = mu[1] - mu[0];
  const Vector projected = eig.eigenvectors().transpose() * delta;
  double df = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) df += projected(k) * projected(k) / lambda(k);
  df = std::min(df, kRatioCap);
  return value(MeasureId::F1v, df, 1.0 / (1.0 + df));
}

MeasureOutcome measure_f2(const MeasureContext& ctx) {
  std::vector<std::size_t> all(ctx.n());
  std::iota(all.begin(), all.end(), std::size_t{0});
  double volume = 1.0;
  for (Eigen::Index j = 0; j < ctx.X().cols(); ++j) {
    const ClassRange r = class_range(ctx.X(), ctx.y(), j, all);
    const double span = std::max(r.max[0], r.max[1]) - std::min(r.min[0], r.min[1]);
    if (span <= 0.0) continue;  // constant feature: complete overlap
    const double overlap = std::max(0.0, std::min(r.max[0], r.max[1]) - std::max(r.min[0], r.min[1]));
    volume *= overlap / span;
  }
  return value(MeasureId::F2, volume, volume);
}

MeasureOutcome measure_f3(const MeasureContext& ctx) {
  std::vector<std::size_t> all(ctx.n());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::size_t fewest = ctx.n();
  for (Eigen::Index j = 0; j < ctx.X().cols(); ++j) {
    fewest = std::min(fewest, overlap_points(ctx.X(), ctx.y(), j, all).size());
  }
  const double raw = static_cast<double>(fewest) / static_cast<double>(ctx.n());
  return value(MeasureId::F3, raw, raw);
}

MeasureOutcome measure_f4(const MeasureContext& ctx) {
  std::vector<std::size_t> remaining(ctx.n());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<Eigen::Index> features(static_cast<std::size_t>(ctx.X().cols()));
  std::iota(features.begin(), features.end(), Eigen::Index{0});
  while (!features.empty() && !remaining.empty()) {
    std::size_t best_pos = 0;
    std::vector<std::size_t> best_inside;
    for (std::size_t p = 0; p < features.size(); ++p) {
      auto inside = overlap_points(ctx.X(), ctx.y(), features[p], remaining);
      if (p == 0 || inside.size() < best_inside.size()) {
        best_pos = p;
        best_inside = std::move(inside);
      }
    }
    remaining = std::move(best_inside);
    features.erase(features.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  const double raw = static_cast<double>(remaining.size()) / static_cast<double>(ctx.n());
  return value(MeasureId::F4, raw, raw);
}

MeasureOutcome measure_l1(const MeasureContext& ctx) {
  const Hyperplane& h = ctx.hyperplane();
  const double norm = h.weights.norm();
  if (!(norm > 0.0)) return skip(MeasureId::L1, "linear classifier has zero weights");
  double total = 0.0;
  for (Eigen::Index i = 0; i < ctx.X().rows(); ++i) {
    if (h.predict(ctx.X(), i) != ctx.y()[static_cast<std::size_t>(i)]) total += std::abs(h.decision(ctx.X(), i)) / norm;
  }
  const double raw = total / static_cast<double>(ctx.n());
  return value(MeasureId::L1, raw, raw / (1.0 + raw));
}

MeasureOutcome measure_l3(const MeasureContext& ctx) {
  const Hyperplane& h = ctx.hyperplane();
  const Matrix& S = ctx.synthetic_X();
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    if (h.predict(S, i) != ctx.synthetic_y()[static_cast<std::size_t>(i)]) ++errors;
  }
  const double raw = static_cast<double>(errors) / static_cast<double>(S.rows());
  return value(MeasureId::L3, raw, raw);
}

MeasureOutcome measure_n1(const MeasureContext& ctx) {
  std::vector<bool> border(ctx.n(), false);
  for (const auto& [a, b] : ctx.mst()) {
    if (ctx.y()[a] != ctx.y()[b]) border[a] = border[b] = true;
  }
  const double raw = static_cast<double>(std::count(border.begin(), border.end(), true)) / static_cast<double>(ctx.n());
  return value(MeasureId::N1, raw, raw);
}

MeasureOutcome measure_n2(const MeasureContext& ctx) {
  double intra = 0.0;
  double extra = 0.0;
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    const auto same = ctx.nearest_same(i);
    if (!same) return skip(MeasureId::N2, "a class has a single point");
    intra += ctx.distances()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*same));
    extra += ctx.distances()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ctx.nearest_enemy(i)));
  }
  if (!(extra > 0.0)) return skip(MeasureId::N2, "every nearest enemy is at distance 0");
  const double raw = intra / extra;
  return value(MeasureId::N2, raw, raw / (1.0 + raw));
}

MeasureOutcome measure_n3(const MeasureContext& ctx) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    if (ctx.y()[ctx.nearest(i)] != ctx.y()[i]) ++errors;
  }
  const double raw = static_cast<double>(errors) / static_cast<double>(ctx.n());
  return value(MeasureId::N3, raw, raw);
}

MeasureOutcome measure_n4(const MeasureContext& ctx) {
  const Matrix& S = ctx.synthetic_X();
  const Matrix& X = ctx.X();
  std::size_t errors = 0;
  for (Eigen::Index s = 0; s < S.rows(); ++s) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double d = (X.row(i) - S.row(s)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (ctx.y()[static_cast<std::size_t>(best)] != ctx.synthetic_y()[static_cast<std::size_t>(s)]) ++errors;
  }
  const double raw = static_cast<double>(errors) / static_cast<double>(S.rows());
  return value(MeasureId::N4, raw, raw);
}

// Sphere radii grow until they touch the sphere of the nearest enemy: mutual
// nearest enemies split their distance, otherwise r_i = d(i, e) - r_e.
std::vector<double> touching_radii(const MeasureContext& ctx) {
  const std::size_t n = ctx.n();
  const Matrix& D = ctx.distances();
  std::vector<std::size_t> enemy(n);
  for (std::size_t i = 0; i < n; ++i) enemy[i] = ctx.nearest_enemy(i);
  auto dist = [&D](std::size_t a, std::size_t b) {
    return D(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  enum : std::uint8_t { unset, pending, done };
  std::vector<std::uint8_t> state(n, unset);
  std::vector<double> radius(n, 0.0);
  for (std::size_t start = 0; start < n; ++start) {
    // Follow the nearest-enemy chain to a resolved sphere, then unwind.
    std::vector<std::size_t> chain;
    std::size_t i = start;
    while (state[i] == unset) {
      state[i] = pending;
      chain.push_back(i);
      i = enemy[i];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const std::size_t p = *it;
      const std::size_t e = enemy[p];
      // a chain that closes on itself (mutual pair, or a tie cycle) splits the distance
      if (state[e] == pending) radius[p] = 0.5 * dist(p, e);
      else radius[p] = std::max(0.0, dist(p, e) - radius[e]);
      state[p] = done;
    }
  }
  return radius;
}

MeasureOutcome measure_t1(const MeasureContext& ctx) {
  const std::size_t n = ctx.n();
  const Matrix& D = ctx.distances();
  const std::vector<double> radius = touching_radii(ctx);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < n && !absorbed; ++j) {
      if (j == i || ctx.y()[j] != ctx.y()[i]) continue;
      const double d = D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double reach = d + radius[i];
      if (reach < radius[j]) absorbed = true;
      // identical spheres: keep the one with the lower index
      else if (reach == radius[j]) absorbed = !(d == 0.0 && radius[i] == radius[j] && j > i);
    }
    if (!absorbed) ++kept;
  }
  const double raw = static_cast<double>(kept) / static_cast<double>(n);
  return value(MeasureId::T1, raw, raw);
}

MeasureOutcome measure_lsc(const MeasureContext& ctx) {
  const std::size_t n = ctx.n();
  const Matrix& D = ctx.distances();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double enemy = D(row, static_cast<Eigen::Index>(ctx.nearest_enemy(i)));
    for (std::size_t j = 0; j < n; ++j) {
      if (D(row, static_cast<Eigen::Index>(j)) < enemy) total += 1.0;
    }
  }
  const double raw = 1.0 - total / (static_cast<double>(n) * static_cast<double>(n));
  return value(MeasureId::LSC, raw, raw);
}

MeasureOutcome measure_density(const MeasureContext& ctx) {
  if (!ctx.network()) return skip(MeasureId::Density, "fewer than k_graph + 1 points");
  const double n = static_cast<double>(ctx.n());
  const double undirected = static_cast<double>(ctx.network()->edge_count()) / 2.0;
  const double raw = 1.0 - 2.0 * undirected / (n * (n - 1.0));
  return value(MeasureId::Density, raw, raw);
}

MeasureOutcome measure_clscoef(const MeasureContext& ctx) {
  if (!ctx.network()) return skip(MeasureId::ClsCoef, "fewer than k_graph + 1 points");
  const auto& adj = ctx.network()->edges;
  double total = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const auto& nb = adj[i];
    const double k = static_cast<double>(nb.size());
    if (nb.size() < 2) continue;
    double links = 0.0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (std::binary_search(adj[nb[a]].begin(), adj[nb[a]].end(), nb[b])) links += 1.0;
      }
    }
    total += 2.0 * links / (k * (k - 1.0));
  }
  const double raw = 1.0 - total / static_cast<double>(adj.size());
  return value(MeasureId::ClsCoef, raw, raw);
}

MeasureOutcome measure_hubs(const MeasureContext& ctx) {
  if (!ctx.network()) return skip(MeasureId::Hubs, "fewer than k_graph + 1 points");
  const auto& adj = ctx.network()->edges;
  if (ctx.network()->edge_count() == 0) return skip(MeasureId::Hubs, "graph has no same-class edges");
  const std::size_t n = adj.size();
  std::vector<double> v(n, 1.0);
  std::vector<double> tmp(n);
  std::vector<double> next(n);
  auto multiply = [&adj, n](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j : adj[i]) s += in[j];
      out[i] = s;
    }
  };
  for (int iter = 0; iter < 1000; ++iter) {
    multiply(v, tmp);
    multiply(tmp, next);
    const double top = *std::max_element(next.begin(), next.end());
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= top;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (change < 1e-12) break;
  }
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  const double raw = 1.0 - mean;
  return value(MeasureId::Hubs, raw, raw);
}

std::optional<std::size_t> pca_components(const MeasureContext& ctx) {
  const Matrix& X = ctx.X();
  const Eigen::MatrixXd cov = (X.transpose() * X) / static_cast<double>(X.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  std::vector<double> lambda(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  double total = 0.0;
  for (double l : lambda) total += std::max(l, 0.0);
  if (!(total > 0.0)) return std::nullopt;
  double running = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    running += std::max(lambda[k], 0.0);
    if (running >= ctx.config().pca_variance * total * (1.0 - 1e-12)) return k + 1;
  }
  return lambda.size();
}

MeasureOutcome measure_t2(const MeasureContext& ctx) {
  const double raw = static_cast<double>(ctx.m()) / static_cast<double>(ctx.n());
  return value(MeasureId::T2, raw, std::min(1.0, raw));
}

MeasureOutcome measure_t3(const MeasureContext& ctx) {
  const auto components = pca_components(ctx);
  if (!components) return skip(MeasureId::T3, "all features are constant");
  const double raw = static_cast<double>(*components) / static_cast<double>(ctx.n());
  return value(MeasureId::T3, raw, std::min(1.0, raw));
}

MeasureOutcome measure_t4(const MeasureContext& ctx) {
  const auto components = pca_components(ctx);
  if (!components) return skip(MeasureId::T4, "all features are constant");
  const double raw = static_cast<double>(*components) / static_cast<double>(ctx.m());
  return value(MeasureId::T4, raw, raw);
}

MeasureOutcome measure_c1(const MeasureContext& ctx) {
  const double n = static_cast<double>(ctx.n());
  double entropy = 0.0;
  for (std::uint8_t c : {std::uint8_t{0}, std::uint8_t{1}}) {
    const double p = static_cast<double>(class_count(ctx.y(), c)) / n;
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  return value(MeasureId::C1, entropy, 1.0 - entropy);
}

MeasureOutcome measure_c2(const MeasureContext& ctx) {
  const double n0 = static_cast<double>(class_count(ctx.y(), 0));
  const double n1 = static_cast<double>(class_count(ctx.y(), 1));
  const double ratio = 0.5 * (n0 / n1 + n1 / n0);
  return value(MeasureId::C2, ratio, 1.0 - 1.0 / ratio);
}

}  // namespace

const MeasureInfo& measure_info(MeasureId id) { return kInfo[static_cast<std::size_t>(id)]; }

std::string_view to_string(MeasureId id) { return measure_info(id).name; }

std::string_view to_string(MeasureFamily family) {
  switch (family) {
    case MeasureFamily::feature_based: return "feature-based";
    case MeasureFamily::linearity: return "linearity";
    case MeasureFamily::neighbourhood: return "neighbourhood";
    case MeasureFamily::network: return "network";
    case MeasureFamily::dimensionality: return "dimensionality";
    case MeasureFamily::class_imbalance: return "class-imbalance";
  }
  return "unknown";
}

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (const auto& info : kInfo) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

MeasureContext::MeasureContext(Matrix X, Labels y, const ComplexityConfig& config)
    : X_(std::move(X)), y_(std::move(y)), config_(config) {
  const std::size_t n = y_.size();
  if (static_cast<std::size_t>(X_.rows()) != n) {
    throw Error(ErrorKind::invalid_argument, "feature matrix and labels differ in length");
  }
  if (n < 4) throw Error(ErrorKind::too_small, "complexity measures need at least 4 points");
  if (X_.cols() == 0) throw Error(ErrorKind::no_features, "complexity measures need at least one feature");
  if (n > config_.max_rows) {
    throw Error(ErrorKind::too_large, "complexity measures are limited to " + std::to_string(config_.max_rows) +
                                          " points; sample the data first");
  }
  const auto positives = std::count(y_.begin(), y_.end(), std::uint8_t{1});
  if (positives == 0 || static_cast<std::size_t>(positives) == n) {
    throw Error(ErrorKind::single_class, "complexity measures need both classes");
  }

  distances_ = pairwise_distances(X_);
  hyperplane_ = train_linear_classifier(X_, y_, config_.linear);
  mst_ = minimum_spanning_tree(distances_);
  if (n >= config_.k_graph + 1) network_ = same_class_graph(build_neighbor_graph(distances_, config_.k_graph), y_);

  // Synthetic points: per class, as many midpoints of random same-class pairs
  // as the class has members.
  SeededRng rng(config_.seed);
  synthetic_X_.resize(X_.rows(), X_.cols());
  synthetic_y_.resize(n);
  Eigen::Index row = 0;
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (y_[i] == cls) members.push_back(i);
    }
    for (std::size_t k = 0; k < members.size(); ++k, ++row) {
      const auto a = static_cast<Eigen::Index>(members[rng.uniform_below(members.size())]);
      const auto b = static_cast<Eigen::Index>(members[rng.uniform_below(members.size())]);
      synthetic_X_.row(row) = 0.5 * (X_.row(a) + X_.row(b));
      synthetic_y_[static_cast<std::size_t>(row)] = cls;
    }
  }
}

namespace {

template <class Accept>
std::optional<std::size_t> nearest_where(const Matrix& D, std::size_t i, Accept accept) {
  std::optional<std::size_t> best;
  const auto row = static_cast<Eigen::Index>(i);
  for (std::size_t j = 0; j < static_cast<std::size_t>(D.cols()); ++j) {
    if (j == i || !accept(j)) continue;
    if (!best || D(row, static_cast<Eigen::Index>(j)) < D(row, static_cast<Eigen::Index>(*best))) best = j;
  }
  return best;
}

}  // namespace

std::size_t MeasureContext::nearest(std::size_t i) const {
  return *nearest_where(distances_, i, [](std::size_t) { return true; });
}

std::optional<std::size_t> MeasureContext::nearest_same(std::size_t i) const {
  return nearest_where(distances_, i, [&](std::size_t j) { return y_[j] == y_[i]; });
}

std::size_t MeasureContext::nearest_enemy(std::size_t i) const {
  return *nearest_where(distances_, i, [&](std::size_t j) { return y_[j] != y_[i]; });
}

MeasureOutcome compute_measure(const MeasureContext& ctx, MeasureId id) {
  switch (id) {
    case MeasureId::F1: return measure_f1(ctx);
    case MeasureId::F1v: return measure_f1v(ctx);
    case MeasureId::F2: return measure_f2(ctx);
    case MeasureId::F3: return measure_f3(ctx);
    case MeasureId::F4: return measure_f4(ctx);
    case MeasureId::L1: return measure_l1(ctx);
    case MeasureId::L2: {
      const double raw = ctx.hyperplane().training_error;
      return value(MeasureId::L2, raw, raw);
    }
    case MeasureId::L3: return measure_l3(ctx);
    case MeasureId::N1: return measure_n1(ctx);
    case MeasureId::N2: return measure_n2(ctx);
    case MeasureId::N3: return measure_n3(ctx);
    case MeasureId::N4: return measure_n4(ctx);
    case MeasureId::T1: return measure_t1(ctx);
    case MeasureId::LSC: return measure_lsc(ctx);
    case MeasureId::Density: return measure_density(ctx);
    case MeasureId::ClsCoef: return measure_clscoef(ctx);
    case MeasureId::Hubs: return measure_hubs(ctx);
    case MeasureId::T2: return measure_t2(ctx);
    case MeasureId::T3: return measure_t3(ctx);
    case MeasureId::T4: return measure_t4(ctx);
    case MeasureId::C1: return measure_c1(ctx);
    case MeasureId::C2: return measure_c2(ctx);
  }
  throw Error(ErrorKind::invalid_argument, "unknown measure id");
}

}  // namespace otdp
