#include "urf/problem.hpp"

#include "urf/core.hpp"
#include "urf/spectral.hpp"

namespace urf {

std::pair<MatrixXd, VectorXd> build_psi(const MatrixXd& kernel, const MatrixXd& incidence) {
  if (kernel.rows() != incidence.rows())
    throw std::invalid_argument("kernel and incidence row counts differ");
  MatrixXd psi_mat = kernel.transpose() * incidence;
  VectorXd psi = psi_mat.colwise().squaredNorm();
  return {std::move(psi_mat), std::move(psi)};
}

MatrixXd build_e_matrix(const MatrixXd& pbar, const MatrixXd& incidence) {
  if (pbar.cols() != incidence.rows())
    throw std::invalid_argument("pbar and incidence node counts differ");
  const auto n = incidence.rows();
  const auto m = incidence.cols();
  const auto d1 = pbar.rows();
  const MatrixXd pb = pbar * incidence;  // (D+1) x M, shared by every block
  MatrixXd e(n * d1, m);
  for (Eigen::Index i = 0; i < n; ++i)
    e.middleRows(i * d1, d1) = pb * incidence.row(i).asDiagonal();
  return e;
}

double alpha_max(const VectorXd& psi) {
  if (psi.size() == 0 || psi.maxCoeff() <= 0.0)
    throw std::logic_error("psi has no positive entry; configuration should have been rejected");
  return 1.0 / psi.maxCoeff();
}

DesignProblem build_problem(const Configuration& config, std::optional<double> alpha,
                            double beta, double gamma) {
  if (!(beta > gamma && gamma > 0.0))
    throw InvalidHyperparameters("need beta > gamma > 0");
  if (alpha && !(*alpha > 0.0)) throw InvalidHyperparameters("alpha must be positive");

  DesignProblem problem;
  problem.config = config;
  problem.ordering = canonical_edges(config.count());
  problem.incidence_mat = incidence(problem.ordering);
  problem.kernel = kernel_basis(config.augmented());
  std::tie(problem.psi_mat, problem.psi) = build_psi(problem.kernel, problem.incidence_mat);
  problem.e_mat = build_e_matrix(config.augmented(), problem.incidence_mat);
  problem.alpha = alpha ? *alpha : (1.0 - kDefaultAlphaMargin) * alpha_max(problem.psi);
  problem.beta = beta;
  problem.gamma = gamma;
  return problem;
}

}  // namespace urf
