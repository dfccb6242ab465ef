#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "urf/core.hpp"
#include "urf/rigidity.hpp"

using namespace urf;

namespace {

MatrixXd square_outer() {
  VectorXd q(4);
  q << 1, -1, 1, -1;
  return q * q.transpose();
}

}  // namespace

TEST_CASE("square stress certifies; rank and spectrum are as expected") {
  const Configuration square = test::square_config();
  const RigidityCertificate cert = verify_urf(square_outer(), square);
  CHECK(cert.pass());
  CHECK(cert.psd_ok);
  CHECK(cert.rank_ok);
  CHECK(cert.nullspace_ok);
  CHECK(cert.spectrum(3) == doctest::Approx(4.0));
  CHECK(std::abs(cert.spectrum(2)) <= 1e-10);
  CHECK(cert.lambda_min_nonzero == doctest::Approx(4.0));
  CHECK(cert.condition_number == doctest::Approx(1.0));
  CHECK(cert.edges_effective == 6);
  CHECK(cert.generic_assumed);
}

TEST_CASE("zero matrix fails on rank") {
  const Configuration square = test::square_config();
  const RigidityCertificate cert = verify_urf(MatrixXd::Zero(4, 4), square);
  CHECK_FALSE(cert.pass());
  CHECK_FALSE(cert.rank_ok);
  CHECK(cert.psd_ok);  // zero is trivially PSD
}

TEST_CASE("complete-graph Laplacian fails the nullspace condition") {
  const Configuration square = test::square_config();  // zero-centered
  const MatrixXd laplacian = 4.0 * MatrixXd::Identity(4, 4) - MatrixXd::Ones(4, 4);
  const RigidityCertificate cert = verify_urf(laplacian, square);
  CHECK_FALSE(cert.nullspace_ok);
  CHECK_FALSE(cert.pass());
  // (N I - 1 1^T) P^T = N P^T for a centered configuration
  const MatrixXd residual = laplacian * square.positions.transpose();
  CHECK(residual.norm() == doctest::Approx(4.0 * square.positions.norm()));
}

TEST_CASE("certificate is scale invariant") {
  const Configuration square = test::square_config();
  const RigidityCertificate ref = verify_urf(square_outer(), square);
  const RigidityCertificate scaled = verify_urf(MatrixXd(1e-3 * square_outer()), square);
  CHECK(ref.pass() == scaled.pass());
  CHECK(ref.psd_ok == scaled.psd_ok);
  CHECK(ref.rank_ok == scaled.rank_ok);
  CHECK(ref.nullspace_ok == scaled.nullspace_ok);
  CHECK(ref.condition_number == doctest::Approx(scaled.condition_number));
  CHECK(ref.edges_effective == scaled.edges_effective);
}

TEST_CASE("verify_urf rejects shape mismatches") {
  const Configuration square = test::square_config();
  CHECK_THROWS_AS(verify_urf(MatrixXd::Zero(5, 5), square), std::invalid_argument);
}

TEST_CASE("spectrum_report extracts lambda_{D+2} and the condition number") {
  const SpectrumReport report = spectrum_report(square_outer(), 2);
  CHECK(report.lambda_min_nonzero == doctest::Approx(4.0));
  CHECK(report.condition_number == doctest::Approx(1.0));
  CHECK(report.rigid);

  // kappa is a ratio, hence scale invariant
  const SpectrumReport scaled = spectrum_report(MatrixXd(0.37 * square_outer()), 2);
  CHECK(scaled.condition_number == doctest::Approx(report.condition_number));

  const SpectrumReport flat = spectrum_report(MatrixXd::Zero(4, 4), 2);
  CHECK_FALSE(flat.rigid);
  CHECK(std::isinf(flat.condition_number));
}

TEST_CASE("condition number is at least one and equals one only for flat spectra") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    // synthesize a PSD matrix with three zero modes on a random basis
    const int n = 6;
    const MatrixXd basis = MatrixXd::Identity(n, n);
    VectorXd vals = VectorXd::Zero(n);
    for (int k = 3; k < n; ++k) vals(k) = 0.5 + std::abs(test::random_vector(1, rng)(0));
    MatrixXd omega = basis * vals.asDiagonal() * basis.transpose();
    const SpectrumReport report = spectrum_report(omega, 2);
    CHECK(report.condition_number >= 1.0 - 1e-12);
    const bool flat = (vals.tail(3).maxCoeff() - vals.tail(3).minCoeff()) <= 1e-12;
    CHECK((report.condition_number <= 1.0 + 1e-9) == flat);
  }
}
