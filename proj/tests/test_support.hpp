#pragma once

#include <random>

#include "urf/core.hpp"
#include "urf/types.hpp"

namespace urf::test {

// unit square (+-1, +-1) with vertices in circular order
inline Configuration square_config() {
  MatrixXd positions(2, 4);
  positions << 1, -1, -1, 1,
               1, 1, -1, -1;
  return make_configuration(2, positions);
}

// equilibrium stress of the square on K4: +1 on sides, -1 on diagonals,
// over the canonical ordering (01, 02, 03, 12, 13, 23)
inline VectorXd square_stress_pattern() {
  VectorXd w(6);
  w << 1, -1, 1, 1, -1, 1;
  return w;
}

inline MatrixXd random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return 0.5 * (a + a.transpose());
}

inline VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  VectorXd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = gauss(rng);
  return v;
}

}  // namespace urf::test
