#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "urf/core.hpp"
#include "urf/spectral.hpp"

using namespace urf;

TEST_CASE("canonical_edges enumerates the complete graph lexicographically") {
  const EdgeOrdering three = canonical_edges(3);
  REQUIRE(three.edge_count() == 3);
  CHECK(three.edges[0] == Edge{0, 1});
  CHECK(three.edges[1] == Edge{0, 2});
  CHECK(three.edges[2] == Edge{1, 2});

  CHECK(canonical_edges(10).edge_count() == 45);

  const EdgeOrdering pair = canonical_edges(2);
  REQUIRE(pair.edge_count() == 1);
  CHECK(pair.edges[0] == Edge{0, 1});

  CHECK_THROWS_AS(canonical_edges(1), std::invalid_argument);
}

TEST_CASE("incidence columns carry one +1 at the smaller index and one -1") {
  const MatrixXd b2 = incidence(canonical_edges(2));
  CHECK(b2(0, 0) == 1.0);
  CHECK(b2(1, 0) == -1.0);

  const EdgeOrdering ordering = canonical_edges(7);
  const MatrixXd b = incidence(ordering);
  for (int e = 0; e < ordering.edge_count(); ++e) {
    CHECK(b.col(e).squaredNorm() == 2.0);
    CHECK(b.col(e).sum() == 0.0);
  }
}

TEST_CASE("assembled stress is invariant to incidence column sign flips") {
  std::mt19937_64 rng(11);
  const EdgeOrdering ordering = canonical_edges(5);
  const VectorXd w = test::random_vector(ordering.edge_count(), rng);
  MatrixXd b = incidence(ordering);
  const MatrixXd omega = b * w.asDiagonal() * b.transpose();
  b.col(3) *= -1.0;
  const MatrixXd flipped = b * w.asDiagonal() * b.transpose();
  CHECK((omega - flipped).norm() <= 1e-14);
}

TEST_CASE("assemble_stress matches the casewise stress matrix definition") {
  std::mt19937_64 rng(17);
  for (const int n : {3, 6, 12}) {
    const EdgeOrdering ordering = canonical_edges(n);
    const VectorXd w = test::random_vector(ordering.edge_count(), rng);
    const MatrixXd omega = assemble_stress(ordering, w);

    MatrixXd casewise = MatrixXd::Zero(n, n);
    for (int e = 0; e < ordering.edge_count(); ++e) {
      const auto [i, j] = ordering.edges[e];
      casewise(i, j) = -w(e);
      casewise(j, i) = -w(e);
    }
    for (int i = 0; i < n; ++i) casewise(i, i) = -casewise.row(i).sum();

    CHECK((omega - casewise).norm() <= 1e-12 * std::max(1.0, omega.norm()));
    CHECK((omega - omega.transpose()).norm() == 0.0);
    CHECK((omega * VectorXd::Ones(n)).norm() <= 1e-12 * std::max(1.0, omega.norm()));
  }
}

TEST_CASE("assemble_stress known values") {
  const EdgeOrdering k4 = canonical_edges(4);

  CHECK(assemble_stress(k4, VectorXd::Zero(6)).norm() == 0.0);

  // equal unit weights give the complete-graph Laplacian N*I - 1*1^T
  const MatrixXd laplacian = assemble_stress(k4, VectorXd::Ones(6));
  const MatrixXd expected =
      4.0 * MatrixXd::Identity(4, 4) - MatrixXd::Ones(4, 4);
  CHECK((laplacian - expected).norm() <= 1e-14);

  // unit square: +1 sides, -1 diagonals gives q q^T with q = (1,-1,1,-1)
  const MatrixXd omega = assemble_stress(k4, test::square_stress_pattern());
  VectorXd q(4);
  q << 1, -1, 1, -1;
  CHECK((omega - q * q.transpose()).norm() <= 1e-14);
  const VectorXd eigs = sym_eig(omega).eigenvalues;
  CHECK(eigs(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs(3) == doctest::Approx(4.0));

  CHECK_THROWS_AS(assemble_stress(k4, VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("scaling the stress vector scales the spectrum") {
  std::mt19937_64 rng(23);
  const EdgeOrdering ordering = canonical_edges(8);
  const VectorXd w = test::random_vector(ordering.edge_count(), rng);
  const double c = 3.25;
  const VectorXd eigs = sym_eig(assemble_stress(ordering, w)).eigenvalues;
  const VectorXd scaled = sym_eig(assemble_stress(ordering, VectorXd(c * w))).eigenvalues;
  CHECK((scaled - c * eigs).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, eigs.cwiseAbs().maxCoeff()));
}

TEST_CASE("effective_edges applies the relative threshold") {
  const EdgeOrdering k4 = canonical_edges(4);
  const EffectiveEdges square = effective_edges(k4, test::square_stress_pattern(), 1e-6);
  CHECK(square.count == 6);

  const EdgeOrdering k3 = canonical_edges(3);
  VectorXd w(3);
  w << 1.0, 1e-12, 1.0;
  const EffectiveEdges cut = effective_edges(k3, w, 1e-6);
  CHECK(cut.count == 2);
  CHECK(cut.edges[0] == Edge{0, 1});
  CHECK(cut.edges[1] == Edge{1, 2});

  const EdgeOrdering k10 = canonical_edges(10);
  CHECK(effective_edges(k10, VectorXd::Ones(45), 1e-6).count == 45);

  CHECK(effective_edges(k4, VectorXd::Zero(6), 1e-6).count == 0);
  CHECK_THROWS_AS(effective_edges(k4, VectorXd::Zero(6), 0.0), std::invalid_argument);
}

TEST_CASE("regular_polygon produces the expected geometry") {
  // radius sqrt(2) quadrilateral is the unit square up to rotation:
  // the distance multiset must match {2 x4, 2*sqrt(2) x2}
  const Configuration square = regular_polygon(4, std::sqrt(2.0));
  std::vector<double> distances;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      distances.push_back((square.positions.col(i) - square.positions.col(j)).norm());
  std::sort(distances.begin(), distances.end());
  for (int k = 0; k < 4; ++k) CHECK(distances[k] == doctest::Approx(2.0));
  CHECK(distances[4] == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(distances[5] == doctest::Approx(2.0 * std::sqrt(2.0)));

  const Configuration ten = regular_polygon(10, 1.0);
  const MatrixXd pbar = ten.augmented();
  CHECK(numerical_rank(sym_eig(pbar * pbar.transpose()).eigenvalues) == 3);

  CHECK_THROWS_AS(regular_polygon(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regular_polygon(10, 0.0), std::invalid_argument);
}

TEST_CASE("random_generic is deterministic per seed and validates shape") {
  const Configuration a = random_generic(6, 2, 42);
  const Configuration b = random_generic(6, 2, 42);
  CHECK(a.positions == b.positions);
  const Configuration c = random_generic(6, 2, 43);
  CHECK(a.positions != c.positions);
  CHECK_THROWS_AS(random_generic(3, 2, 1), std::invalid_argument);
}

TEST_CASE("make_configuration rejects degenerate inputs") {
  MatrixXd collinear(2, 4);
  collinear << 0, 1, 2, 3,
               0, 1, 2, 3;
  CHECK_THROWS_AS(make_configuration(2, collinear), DegenerateConfiguration);

  MatrixXd tiny(2, 3);
  tiny << 0, 1, 0,
          0, 0, 1;
  CHECK_THROWS_AS(make_configuration(2, tiny), std::invalid_argument);
}
