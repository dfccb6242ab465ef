#pragma once

#include "urf/types.hpp"

namespace urf {

struct RigidityTolerances {
  double psd = 1e-8;        // relative floor on lambda_min
  double nullspace = 1e-8;  // relative bound on ||Omega P_bar^T||_F
  double rank = 1e-8;       // relative eigenvalue cutoff for the rank count
  double edge = 1e-6;       // relative threshold for the effective edge count
};

/// Stress-matrix certificate: positive semidefinite, rank N-D-1, and the
/// rows of P_bar in the nullspace. Passing all three certifies universal
/// rigidity for generic configurations; for nongeneric ones the same three
/// properties are exactly what the consensus dynamics require, so the
/// verdict is reported with generic_assumed as a caveat.
struct RigidityCertificate {
  bool psd_ok = false;
  bool rank_ok = false;
  bool nullspace_ok = false;
  VectorXd spectrum;                  // ascending eigenvalues of Omega
  double lambda_min_nonzero = 0.0;    // (D+2)-th smallest eigenvalue
  double condition_number = 0.0;      // lambda_max / lambda_{D+2}
  int edges_effective = 0;
  RigidityTolerances tolerances;
  bool generic_assumed = true;

  bool pass() const { return psd_ok && rank_ok && nullspace_ok; }
};

RigidityCertificate verify_urf(const MatrixXd& omega, const Configuration& config,
                               const RigidityTolerances& tols = {});

struct SpectrumReport {
  VectorXd spectrum;
  double lambda_min_nonzero = 0.0;
  double condition_number = 0.0;  // +inf when lambda_{D+2} is numerically zero
  bool rigid = true;              // false when the condition number overflows
};

SpectrumReport spectrum_report(const MatrixXd& omega, int dimension);

}  // namespace urf
