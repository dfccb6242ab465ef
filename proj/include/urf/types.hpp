#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace urf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Raised when a configuration fails the full-rank requirement on the
/// augmented matrix [P^T, 1]^T (collinear points in R^2 and the like).
struct DegenerateConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidHyperparameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Target geometry: N agent positions as columns of a D x N matrix.
/// Valid instances satisfy N >= D + 2 and have an augmented matrix
/// of full row rank D + 1 (enforced by make_configuration).
struct Configuration {
  int dimension = 0;     // D
  MatrixXd positions;    // D x N

  int count() const { return static_cast<int>(positions.cols()); }

  /// Augmented matrix [P^T, 1]^T, shape (D+1) x N.
  MatrixXd augmented() const;

  /// Stacked position vector p = vec(P), agent-major, length D*N.
  VectorXd stacked() const;
};

/// Validates invariants and returns the configuration.
Configuration make_configuration(int dimension, MatrixXd positions);

struct Edge {
  int i = 0;
  int j = 0;
  bool operator==(const Edge&) const = default;
};

/// Complete-graph edge list in lexicographic (i < j) order. Fixes the
/// indexing of stress vectors across the toolkit.
struct EdgeOrdering {
  int node_count = 0;
  std::vector<Edge> edges;

  int edge_count() const { return static_cast<int>(edges.size()); }
};

}  // namespace urf
