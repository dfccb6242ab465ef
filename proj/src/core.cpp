#include "urf/core.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <random>

namespace urf {

namespace {

bool full_row_rank(const MatrixXd& pbar) {
  Eigen::JacobiSVD<MatrixXd> svd(pbar);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return false;
  const double tol = 1e-8 * sv(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol) ++rank;
  return rank == pbar.rows();
}

}  // namespace

MatrixXd Configuration::augmented() const {
  const int n = count();
  MatrixXd pbar(dimension + 1, n);
  pbar.topRows(dimension) = positions;
  pbar.row(dimension).setOnes();
  return pbar;
}

VectorXd Configuration::stacked() const {
  return Eigen::Map<const VectorXd>(positions.data(), positions.size());
}

Configuration make_configuration(int dimension, MatrixXd positions) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (positions.rows() != dimension)
    throw std::invalid_argument("positions must have `dimension` rows");
  const int n = static_cast<int>(positions.cols());
  if (n < dimension + 2)
    throw std::invalid_argument("need at least D + 2 agents for a nontrivial stress space");
  Configuration config{dimension, std::move(positions)};
  if (!full_row_rank(config.augmented()))
    throw DegenerateConfiguration("augmented configuration matrix is rank deficient");
  return config;
}

EdgeOrdering canonical_edges(int n) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  EdgeOrdering ordering;
  ordering.node_count = n;
  ordering.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ordering.edges.push_back({i, j});
  return ordering;
}

MatrixXd incidence(const EdgeOrdering& ordering) {
  MatrixXd b = MatrixXd::Zero(ordering.node_count, ordering.edge_count());
  for (int e = 0; e < ordering.edge_count(); ++e) {
    b(ordering.edges[e].i, e) = 1.0;
    b(ordering.edges[e].j, e) = -1.0;
  }
  return b;
}

MatrixXd assemble_stress(const EdgeOrdering& ordering, const VectorXd& stress) {
  if (stress.size() != ordering.edge_count())
    throw std::invalid_argument("stress vector length does not match edge count");
  const int n = ordering.node_count;
  MatrixXd omega = MatrixXd::Zero(n, n);
  for (int e = 0; e < ordering.edge_count(); ++e) {
    const auto [i, j] = ordering.edges[e];
    const double w = stress(e);
    omega(i, i) += w;
    omega(j, j) += w;
    omega(i, j) -= w;
    omega(j, i) -= w;
  }
  return omega;
}

EffectiveEdges effective_edges(const EdgeOrdering& ordering, const VectorXd& stress,
                               double tau_rel) {
  if (stress.size() != ordering.edge_count())
    throw std::invalid_argument("stress vector length does not match edge count");
  if (!(tau_rel > 0.0 && tau_rel < 1.0))
    throw std::invalid_argument("tau_rel must lie in (0, 1)");
  EffectiveEdges out;
  const double peak = stress.size() ? stress.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) {
    out.weights.resize(0);
    return out;
  }
  const double cut = tau_rel * peak;
  std::vector<double> kept;
  for (int e = 0; e < ordering.edge_count(); ++e) {
    if (std::abs(stress(e)) > cut) {
      out.edges.push_back(ordering.edges[e]);
      kept.push_back(stress(e));
    }
  }
  out.count = static_cast<int>(out.edges.size());
  out.weights = Eigen::Map<const VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

Configuration regular_polygon(int n, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  if (n < 4) throw std::invalid_argument("need at least D + 2 = 4 nodes in the plane");
  MatrixXd positions(2, n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    positions(0, k) = radius * std::cos(theta);
    positions(1, k) = radius * std::sin(theta);
  }
  return make_configuration(2, std::move(positions));
}

Configuration random_generic(int n, int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (n < d + 2) throw std::invalid_argument("need at least D + 2 agents");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    MatrixXd positions(d, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) positions(i, j) = coord(rng);
    Configuration config{d, std::move(positions)};
    if (full_row_rank(config.augmented())) return config;
  }
  // probability of reaching this is zero for a continuous distribution
  throw DegenerateConfiguration("could not draw a full-rank configuration");
}

}  // namespace urf
