#pragma once

#include <utility>

#include "urf/problem.hpp"

namespace urf {

struct SolveParams {
  double rho = 1.0;
  int max_iter = 20000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  double over_relaxation = 1.6;  // in [1, 1.8]
};

enum class SolveStatus { kOptimal, kMaxIter, kInfeasibleDetected };

const char* to_string(SolveStatus status);

/// Feasibility measures recomputed from a returned stress vector.
struct Feasibility {
  double lambda_min_kernel = 0.0;  // lambda_min(Psi diag(w) Psi^T), want >= gamma
  double lambda_max_stress = 0.0;  // lambda_max(B diag(w) B^T), want <= beta
  double equilibrium_inf = 0.0;    // ||E w||_inf, want 0
};

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxIter;
  int iterations = 0;  // total ADMM iterations, including refinement solves
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;  // ||w||_1 - alpha * psi^T w
  Feasibility feasibility;
};

/// Absolute feasibility slack (on spectra normalized by beta) certified by
/// a solve that reports kOptimal. Kept an order above solver tolerances.
inline constexpr double kFeasTolerance = 1e-5;

/// First-order solve of the design program by consensus ADMM with matrix
/// lifting. Deterministic. A kOptimal result satisfies
///   lambda_min(Psi diag(w) Psi^T) >= gamma - tol,
///   lambda_max(B diag(w) B^T)     <= beta + tol,
///   ||E w||_inf                   <= tol,
/// with tol = kFeasTolerance * beta, recomputed from the returned vector.
std::pair<VectorXd, SolveReport> solve_p1(const DesignProblem& problem,
                                          const SolveParams& params = {});

struct PolishResult {
  VectorXd stress;
  bool polished = false;  // false: restricted problem infeasible, input returned
  SolveReport report;
};

/// Re-solves with the support fixed to the thresholded nonzeros of the input
/// and the L1 term dropped, pushing the retained eigenvalues up toward beta.
/// The support never grows and lambda_{D+2} never decreases.
PolishResult polish(const DesignProblem& problem, const VectorXd& stress,
                    double tau_rel = 1e-6, const SolveParams& params = {});

/// Omega / lambda_max(Omega). Throws std::invalid_argument on a zero (or
/// negative-semidefinite) input.
MatrixXd normalize_stress(const MatrixXd& omega);

}  // namespace urf
