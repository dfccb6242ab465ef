#include <doctest.h>

#include <cmath>
#include <numeric>

#include "test_support.hpp"
#include "urf/core.hpp"
#include "urf/problem.hpp"
#include "urf/spectral.hpp"

using namespace urf;

TEST_CASE("build_psi on the square: 1 on sides, 0 on diagonals") {
  const Configuration square = test::square_config();
  const EdgeOrdering ordering = canonical_edges(4);
  const MatrixXd b = incidence(ordering);
  const MatrixXd q = kernel_basis(square.augmented());
  const auto [psi_mat, psi] = build_psi(q, b);

  // canonical order (01, 02, 03, 12, 13, 23); diagonals are 02 and 13
  CHECK(psi(0) == doctest::Approx(1.0));
  CHECK(psi(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psi(2) == doctest::Approx(1.0));
  CHECK(psi(3) == doctest::Approx(1.0));
  CHECK(psi(4) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psi(5) == doctest::Approx(1.0));
}

TEST_CASE("psi entries stay within [0, 2]") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Configuration config = random_generic(9, 3, seed);
    const DesignProblem problem = build_problem(config);
    CHECK(problem.psi.minCoeff() >= -1e-12);
    CHECK(problem.psi.maxCoeff() <= 2.0 + 1e-12);
  }
}

TEST_CASE("trace identity tr(Q^T Omega Q) == psi^T w") {
  std::mt19937_64 rng(101);
  const Configuration config = random_generic(6, 2, 12);
  const DesignProblem problem = build_problem(config);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd w = test::random_vector(problem.ordering.edge_count(), rng);
    const MatrixXd omega = assemble_stress(problem.ordering, w);
    const double lhs = (problem.kernel.transpose() * omega * problem.kernel).trace();
    const double rhs = problem.psi.dot(w);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("equilibrium operator matches P_bar * Omega columnwise") {
  std::mt19937_64 rng(55);
  const Configuration square = test::square_config();
  const DesignProblem problem = build_problem(square);

  CHECK((problem.e_mat * VectorXd::Zero(6)).norm() == 0.0);

  // the square pattern is an equilibrium stress
  CHECK((problem.e_mat * test::square_stress_pattern()).lpNorm<Eigen::Infinity>() <= 1e-12);

  const MatrixXd pbar = square.augmented();
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd w = test::random_vector(6, rng);
    const MatrixXd residual = pbar * assemble_stress(problem.ordering, w);
    CHECK(std::abs((problem.e_mat * w).norm() - residual.norm()) <=
          1e-10 * std::max(1.0, residual.norm()));
  }

  // the square stress space is one-dimensional
  const VectorXd gram_eigs = sym_eig(problem.e_mat.transpose() * problem.e_mat).eigenvalues;
  CHECK(gram_eigs.size() - numerical_rank(gram_eigs) == 1);
}

TEST_CASE("alpha_max equals 1/max(psi)") {
  const DesignProblem square = build_problem(test::square_config());
  CHECK(alpha_max(square.psi) == doctest::Approx(1.0));

  const DesignProblem ten = build_problem(regular_polygon(10, 1.0));
  CHECK(alpha_max(ten.psi) == doctest::Approx(0.51).epsilon(0.02));

  CHECK_THROWS_AS(alpha_max(VectorXd::Zero(3)), std::logic_error);
}

TEST_CASE("psi is invariant under invertible affine maps of the configuration") {
  std::mt19937_64 rng(77);
  const Configuration ten = regular_polygon(10, 1.0);
  const VectorXd psi_ref = build_problem(ten).psi;

  for (int trial = 0; trial < 4; ++trial) {
    MatrixXd a(2, 2);
    do {
      a = test::random_symmetric(2, rng) + test::random_symmetric(2, rng);
      a(0, 1) += 0.7;  // break symmetry
    } while (std::abs(a.determinant()) < 0.1);
    const VectorXd shift = test::random_vector(2, rng, 5.0);
    MatrixXd moved = a * ten.positions;
    moved.colwise() += shift;
    const VectorXd psi_moved = build_problem(make_configuration(2, moved)).psi;
    CHECK((psi_moved - psi_ref).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("psi treated as a multiset is invariant under relabeling") {
  const Configuration ten = regular_polygon(10, 1.0);
  VectorXd psi_ref = build_problem(ten).psi;

  MatrixXd shuffled(2, 10);
  const int perm[10] = {3, 7, 1, 9, 0, 4, 8, 2, 6, 5};
  for (int k = 0; k < 10; ++k) shuffled.col(k) = ten.positions.col(perm[k]);
  VectorXd psi_perm = build_problem(make_configuration(2, shuffled)).psi;

  std::sort(psi_ref.begin(), psi_ref.end());
  std::sort(psi_perm.begin(), psi_perm.end());
  CHECK((psi_ref - psi_perm).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("psi does not depend on the kernel basis choice") {
  // two valid orthonormal bases of the same kernel, obtained by mixing the
  // rows of P_bar with an invertible map
  const Configuration config = random_generic(7, 2, 19);
  const MatrixXd pbar = config.augmented();
  MatrixXd mix(3, 3);
  mix << 2, 1, 0,
         0, 1, -1,
         1, 0, 3;
  const MatrixXd b = incidence(canonical_edges(config.count()));
  const VectorXd psi_a = build_psi(kernel_basis(pbar), b).second;
  const VectorXd psi_b = build_psi(kernel_basis(mix * pbar), b).second;
  CHECK((psi_a - psi_b).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("build_problem defaults and validation") {
  const Configuration ten = regular_polygon(10, 1.0);
  const DesignProblem problem = build_problem(ten);
  CHECK(problem.alpha == doctest::Approx((1.0 - kDefaultAlphaMargin) * alpha_max(problem.psi)));
  CHECK(problem.beta == 1.0);
  CHECK(problem.gamma == 0.1);
  CHECK(problem.alpha == doctest::Approx(0.51).epsilon(0.02));

  CHECK_THROWS_AS(build_problem(ten, std::nullopt, 0.05, 0.1), InvalidHyperparameters);

  MatrixXd collinear(2, 4);
  collinear << 0, 1, 2, 3,
               0, 1, 2, 3;
  Configuration bad;
  bad.dimension = 2;
  bad.positions = collinear;
  CHECK_THROWS_AS(build_problem(bad), DegenerateConfiguration);
}
