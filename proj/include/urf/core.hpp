#pragma once

#include "urf/types.hpp"

namespace urf {

/// All N*(N-1)/2 edges of the complete graph on n nodes, lexicographic.
EdgeOrdering canonical_edges(int n);

/// Node-by-edge incidence matrix of the ordering. Column for edge (i, j)
/// has +1 at the smaller index i and -1 at j.
MatrixXd incidence(const EdgeOrdering& ordering);

/// Stress matrix Omega = B diag(w) B^T. Symmetric with 1 in the nullspace.
MatrixXd assemble_stress(const EdgeOrdering& ordering, const VectorXd& stress);

struct EffectiveEdges {
  int count = 0;            // M = ||w||_0 under the relative threshold
  std::vector<Edge> edges;  // surviving edges, original order
  VectorXd weights;         // matching weights
};

/// Edges with |w_e| > tau_rel * max_e |w_e|. All-zero input yields M = 0.
EffectiveEdges effective_edges(const EdgeOrdering& ordering, const VectorXd& stress,
                               double tau_rel = 1e-6);

/// Vertices of a regular n-gon of the given radius, D = 2.
Configuration regular_polygon(int n, double radius);

/// Seeded random configuration with coordinates uniform in [-1, 1],
/// redrawn until the augmented matrix has full row rank.
Configuration random_generic(int n, int d, std::uint64_t seed);

}  // namespace urf
