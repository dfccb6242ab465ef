#include "urf/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace urf {

EigenDecomposition sym_eig(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

int numerical_rank(const VectorXd& eigenvalues, double tol_rel) {
  if (eigenvalues.size() == 0) return 0;
  const double peak = eigenvalues.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0;
  const double cut = tol_rel * peak;
  int rank = 0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (std::abs(eigenvalues(k)) > cut) ++rank;
  return rank;
}

MatrixXd kernel_basis(const MatrixXd& pbar) {
  const auto n = pbar.cols();
  const auto rows = pbar.rows();
  if (n < rows) throw DegenerateConfiguration("augmented matrix is wider than tall");
  // eigenvectors of pbar^T pbar with near-zero eigenvalues span ker(pbar)
  const EigenDecomposition eig = sym_eig(pbar.transpose() * pbar);
  const int rank = numerical_rank(eig.eigenvalues, 1e-10);
  if (rank != rows)
    throw DegenerateConfiguration("augmented configuration matrix is rank deficient");
  return eig.eigenvectors.leftCols(n - rows);
}

MatrixXd clamp_eigs(const MatrixXd& a, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("lo must not exceed hi");
  EigenDecomposition eig = sym_eig(a);
  const VectorXd clamped = eig.eigenvalues.cwiseMax(lo).cwiseMin(hi);
  return eig.eigenvectors * clamped.asDiagonal() * eig.eigenvectors.transpose();
}

}  // namespace urf
