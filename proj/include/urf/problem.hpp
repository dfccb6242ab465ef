#pragma once

#include <optional>
#include <utility>

#include "urf/types.hpp"

namespace urf {

/// All precomputed data of the stress design program:
///
///   minimize    ||w||_1 - alpha * psi^T w
///   subject to  Psi diag(w) Psi^T >= gamma * I
///               || B diag(w) B^T ||_2 <= beta
///               E w = 0
///
/// over stress vectors w on the complete graph of the configuration.
struct DesignProblem {
  Configuration config;
  EdgeOrdering ordering;
  MatrixXd incidence_mat;  // B, N x M
  MatrixXd kernel;         // Q, N x (N-D-1), orthonormal, P_bar Q = 0
  MatrixXd psi_mat;        // Psi = Q^T B
  VectorXd psi;            // psi = diag(Psi^T Psi), entries in [0, 2]
  MatrixXd e_mat;          // E, N(D+1) x M; E w = 0 iff Omega P_bar^T = 0
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.1;
};

/// Psi = Q^T B and psi_e = ||Q^T b_e||^2. The linearization satisfies
/// tr(Q^T Omega Q) = psi^T w for every stress vector w.
std::pair<MatrixXd, VectorXd> build_psi(const MatrixXd& kernel, const MatrixXd& incidence);

/// Stacked equilibrium operator: block i equals P_bar B diag(b_i) with b_i
/// the i-th row of B, so that E w stacks the columns of P_bar Omega.
MatrixXd build_e_matrix(const MatrixXd& pbar, const MatrixXd& incidence);

/// Open upper bound 1/max(psi) of the alpha range that keeps the sparsity
/// term active. Larger alpha trades edges for convergence speed.
double alpha_max(const VectorXd& psi);

/// Margin applied to alpha_max when alpha is not given: at the exact bound
/// the objective is degenerate along the max-psi edges and first-order
/// solvers land on dense points of the optimal face.
inline constexpr double kDefaultAlphaMargin = 1e-3;

DesignProblem build_problem(const Configuration& config,
                            std::optional<double> alpha = std::nullopt,
                            double beta = 1.0, double gamma = 0.1);

}  // namespace urf
