#pragma once

#include "urf/types.hpp"

namespace urf {

struct EigenDecomposition {
  VectorXd eigenvalues;   // ascending
  MatrixXd eigenvectors;  // orthonormal columns, matching order
};

/// Eigendecomposition of a symmetric matrix; the input is symmetrized
/// as (A + A^T)/2 before factoring.
EigenDecomposition sym_eig(const MatrixXd& a);

/// Count of eigenvalues with |lambda| > tol_rel * max |lambda|.
int numerical_rank(const VectorXd& eigenvalues, double tol_rel = 1e-8);

/// Orthonormal basis Q of ker(pbar), shape N x (N-D-1), computed from the
/// eigenvectors of pbar^T pbar belonging to its near-zero eigenvalues.
/// Throws DegenerateConfiguration if pbar is not of full row rank.
MatrixXd kernel_basis(const MatrixXd& pbar);

/// Frobenius-norm projection onto {X : lo*I <= X <= hi*I}: eigenvalues are
/// clamped into [lo, hi] and the matrix reassembled. hi may be +infinity.
MatrixXd clamp_eigs(const MatrixXd& a, double lo, double hi);

}  // namespace urf
