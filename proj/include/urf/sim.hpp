#pragma once

#include <optional>

#include "urf/types.hpp"

namespace urf {

enum class InitMode { kAtTarget, kPerturbedOrthogonal, kPerturbedFree };

struct SimConfig {
  double t_end = 10.0;
  int samples = 200;
  InitMode init_mode = InitMode::kPerturbedOrthogonal;
  std::optional<double> perturbation_scale;  // default 0.1 * ||p||
  std::uint64_t seed = 1;
};

struct SimTrace {
  VectorXd times;   // strictly increasing, length = samples
  MatrixXd states;  // DN x samples, column k = z(t_k)
  VectorXd delta;   // ||z(t) - p||_2 per sample
};

/// Closed-loop consensus dynamics zdot = -(Omega (x) I_D) z propagated
/// exactly through the eigendecomposition of Omega. Zero-eigenvalue
/// components persist, so the target is a fixed point. Refuses stress
/// matrices with a negative eigenvalue beyond tolerance.
SimTrace simulate(const MatrixXd& omega, const Configuration& config, const SimConfig& sim);

/// z(0) = p + scale * n/||n|| with n a seeded Gaussian direction. With
/// orthogonal set, n is first projected off the nullspace of Omega (x) I_D
/// so the trajectory converges to p itself.
VectorXd init_perturbed(const MatrixXd& omega, const Configuration& config, double scale,
                        std::uint64_t seed, bool orthogonal);

struct RateEstimate {
  double rate = 0.0;        // decay rate, positive = converging
  bool lower_bound = false; // delta hit numerical zero inside the window
};

/// Least-squares slope of log delta(t) over the trailing `window` fraction
/// of samples, negated.
RateEstimate estimate_rate(const SimTrace& trace, double window = 0.5);

/// Classical fourth-order one-step integration of the same dynamics,
/// sampled at `times`; cross-check oracle for simulate(). Requires
/// dt < 2 / lambda_max(Omega).
SimTrace integrate_numeric(const MatrixXd& omega, const Configuration& config,
                           const VectorXd& z0, const VectorXd& times, double dt);

}  // namespace urf
