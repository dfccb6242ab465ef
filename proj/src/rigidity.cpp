#include "urf/rigidity.hpp"

#include <cmath>
#include <limits>

#include "urf/spectral.hpp"

namespace urf {

RigidityCertificate verify_urf(const MatrixXd& omega, const Configuration& config,
                               const RigidityTolerances& tols) {
  const int n = config.count();
  if (omega.rows() != n || omega.cols() != n)
    throw std::invalid_argument("stress matrix shape does not match configuration");

  RigidityCertificate cert;
  cert.tolerances = tols;

  const EigenDecomposition eig = sym_eig(omega);
  cert.spectrum = eig.eigenvalues;
  const double lambda_max = eig.eigenvalues(n - 1);
  const double lambda_min = eig.eigenvalues(0);

  cert.psd_ok = lambda_min >= -tols.psd * std::max(lambda_max, 0.0);
  cert.rank_ok = numerical_rank(eig.eigenvalues, tols.rank) == n - config.dimension - 1;

  const MatrixXd pbar = config.augmented();
  const double residual = (omega * pbar.transpose()).norm();
  cert.nullspace_ok = residual <= tols.nullspace * omega.norm() * pbar.norm();

  cert.lambda_min_nonzero = eig.eigenvalues(config.dimension + 1);
  cert.condition_number = cert.lambda_min_nonzero > 0.0
                              ? lambda_max / cert.lambda_min_nonzero
                              : std::numeric_limits<double>::infinity();

  // effective edges read off the off-diagonal entries (omega_ij = -w_ij)
  double peak = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) peak = std::max(peak, std::abs(omega(i, j)));
  if (peak > 0.0) {
    const double cut = tols.edge * peak;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(omega(i, j)) > cut) ++cert.edges_effective;
  }
  return cert;
}

SpectrumReport spectrum_report(const MatrixXd& omega, int dimension) {
  if (omega.rows() != omega.cols()) throw std::invalid_argument("matrix must be square");
  if (omega.rows() < dimension + 2)
    throw std::invalid_argument("matrix too small for the given dimension");

  SpectrumReport report;
  const EigenDecomposition eig = sym_eig(omega);
  report.spectrum = eig.eigenvalues;
  report.lambda_min_nonzero = eig.eigenvalues(dimension + 1);
  const double lambda_max = eig.eigenvalues(eig.eigenvalues.size() - 1);
  const double cut = 1e-12 * std::max(std::abs(lambda_max), 1e-300);
  if (report.lambda_min_nonzero <= cut) {
    report.condition_number = std::numeric_limits<double>::infinity();
    report.rigid = false;
  } else {
    report.condition_number = lambda_max / report.lambda_min_nonzero;
  }
  return report;
}

}  // namespace urf
