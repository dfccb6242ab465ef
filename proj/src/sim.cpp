#include "urf/sim.hpp"

#include <cmath>
#include <random>

#include "urf/spectral.hpp"

namespace urf {

namespace {

VectorXd linspace(double t_end, int samples) {
  VectorXd times(samples);
  for (int k = 0; k < samples; ++k) times(k) = t_end * k / (samples - 1);
  return times;
}

// columns of Omega's eigenbasis whose eigenvalues are numerically zero
MatrixXd null_eigenvectors(const EigenDecomposition& eig) {
  const double peak = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double cut = 1e-8 * std::max(peak, 1e-300);
  Eigen::Index k = 0;
  while (k < eig.eigenvalues.size() && std::abs(eig.eigenvalues(k)) <= cut) ++k;
  return eig.eigenvectors.leftCols(k);
}

void check_stable(const EigenDecomposition& eig) {
  const double peak = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (eig.eigenvalues(0) < -1e-8 * std::max(peak, 1.0))
    throw std::invalid_argument("stress matrix has a negative eigenvalue; system unstable");
}

}  // namespace

VectorXd init_perturbed(const MatrixXd& omega, const Configuration& config, double scale,
                        std::uint64_t seed, bool orthogonal) {
  if (scale < 0.0) throw std::invalid_argument("perturbation scale must be nonnegative");
  const VectorXd p = config.stacked();
  if (scale == 0.0) return p;

  const int d = config.dimension;
  const int n = config.count();
  const EigenDecomposition eig = sym_eig(omega);
  const MatrixXd vnull = null_eigenvectors(eig);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    VectorXd direction(d * n);
    for (Eigen::Index k = 0; k < direction.size(); ++k) direction(k) = gauss(rng);
    if (orthogonal) {
      // null(Omega (x) I_D) = null(Omega) (x) R^D; project it out agent-wise
      Eigen::Map<MatrixXd> mat(direction.data(), d, n);
      mat -= (mat * vnull) * vnull.transpose();
    }
    const double norm = direction.norm();
    if (norm > 1e-12) return p + (scale / norm) * direction;
  }
}

SimTrace simulate(const MatrixXd& omega, const Configuration& config, const SimConfig& sim) {
  if (!(sim.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (sim.samples < 2) throw std::invalid_argument("need at least two samples");

  const int d = config.dimension;
  const int n = config.count();
  if (omega.rows() != n || omega.cols() != n)
    throw std::invalid_argument("stress matrix shape does not match configuration");

  const EigenDecomposition eig = sym_eig(omega);
  check_stable(eig);

  const VectorXd p = config.stacked();
  const double scale =
      sim.perturbation_scale ? *sim.perturbation_scale : 0.1 * p.norm();
  VectorXd z0;
  switch (sim.init_mode) {
    case InitMode::kAtTarget:
      z0 = p;
      break;
    case InitMode::kPerturbedOrthogonal:
      z0 = init_perturbed(omega, config, scale, sim.seed, true);
      break;
    case InitMode::kPerturbedFree:
      z0 = init_perturbed(omega, config, scale, sim.seed, false);
      break;
  }

  SimTrace trace;
  trace.times = linspace(sim.t_end, sim.samples);
  trace.states.resize(d * n, sim.samples);
  trace.delta.resize(sim.samples);

  // propagate the offset from the target: z(t) = p + vec((Z0 - P) V
  // e^{-Lambda t} V^T). The target is a fixed point of the dynamics, so the
  // offset form is exact there and avoids cancellation noise near it; zero
  // modes pass through with weight one.
  const Eigen::Map<const MatrixXd> z0_mat(z0.data(), d, n);
  const MatrixXd coeff = (z0_mat - config.positions) * eig.eigenvectors;  // D x N
  for (int k = 0; k < sim.samples; ++k) {
    const VectorXd decay = (-eig.eigenvalues * trace.times(k)).array().exp();
    const MatrixXd offset = coeff * decay.asDiagonal() * eig.eigenvectors.transpose();
    trace.states.col(k) = p + Eigen::Map<const VectorXd>(offset.data(), offset.size());
    trace.delta(k) = offset.norm();
  }
  return trace;
}

RateEstimate estimate_rate(const SimTrace& trace, double window) {
  if (!(window > 0.0 && window <= 1.0))
    throw std::invalid_argument("window must lie in (0, 1]");
  const int n = static_cast<int>(trace.times.size());
  if (n < 2 || trace.delta.size() != n)
    throw std::invalid_argument("trace must hold at least two samples");

  int start = n - std::max(2, static_cast<int>(std::floor(window * n)));
  if (start < 0) start = 0;

  RateEstimate estimate;
  constexpr double kFloor = 1e-14;
  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  const int count = n - start;
  for (int k = start; k < n; ++k) {
    double delta = trace.delta(k);
    if (delta < kFloor) {
      estimate.lower_bound = true;
      delta = kFloor;
    }
    const double t = trace.times(k);
    const double y = std::log(delta);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
  }
  const double denom = count * sum_tt - sum_t * sum_t;
  estimate.rate = denom > 0.0 ? -(count * sum_ty - sum_t * sum_y) / denom : 0.0;
  return estimate;
}

SimTrace integrate_numeric(const MatrixXd& omega, const Configuration& config,
                           const VectorXd& z0, const VectorXd& times, double dt) {
  const int d = config.dimension;
  const int n = config.count();
  if (omega.rows() != n || omega.cols() != n)
    throw std::invalid_argument("stress matrix shape does not match configuration");
  if (z0.size() != d * n) throw std::invalid_argument("state vector length must be D*N");
  if (times.size() < 1) throw std::invalid_argument("need at least one sample time");

  const EigenDecomposition eig = sym_eig(omega);
  check_stable(eig);
  const double lambda_max = eig.eigenvalues(n - 1);
  if (!(dt > 0.0) || (lambda_max > 0.0 && dt * lambda_max >= 2.0 * (1.0 - 1e-12)))
    throw std::invalid_argument("step size violates the stability bound dt < 2/lambda_max");

  const VectorXd p = config.stacked();
  const auto deriv = [&](const MatrixXd& z) -> MatrixXd { return -(z * omega); };

  SimTrace trace;
  trace.times = times;
  trace.states.resize(d * n, times.size());
  trace.delta.resize(times.size());

  MatrixXd z = Eigen::Map<const MatrixXd>(z0.data(), d, n);
  double t_now = 0.0;
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double span = times(k) - t_now;
    if (span < 0.0) throw std::invalid_argument("sample times must be nondecreasing from 0");
    if (span > 0.0) {
      const int steps = static_cast<int>(std::ceil(span / dt));
      const double h = span / steps;
      for (int s = 0; s < steps; ++s) {
        const MatrixXd k1 = deriv(z);
        const MatrixXd k2 = deriv(z + 0.5 * h * k1);
        const MatrixXd k3 = deriv(z + 0.5 * h * k2);
        const MatrixXd k4 = deriv(z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    t_now = times(k);
    trace.states.col(k) = Eigen::Map<const VectorXd>(z.data(), z.size());
    trace.delta(k) = (trace.states.col(k) - p).norm();
  }
  return trace;
}

}  // namespace urf
