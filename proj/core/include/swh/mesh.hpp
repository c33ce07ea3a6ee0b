#pragma once

#include <vector>

#include "swh/partition.hpp"

namespace swh {

/// Tensor grid on (theta, r) in [0,pi] x [r_lo, R_max]. theta includes both
/// poles; r stays strictly positive. Nodes are ordered theta-fastest:
/// index(i,j) = i + nt*j.
struct Mesh2D {
  std::vector<double> theta_nodes;
  std::vector<double> r_nodes;

  int nt() const { return static_cast<int>(theta_nodes.size()); }
  int nr() const { return static_cast<int>(r_nodes.size()); }
  int n_nodes() const { return nt() * nr(); }
  int index(int i, int j) const { return i + nt() * j; }

  void validate() const;
};

/// Builds a mesh with n_theta x n_r cells: uniform in theta, graded in r with
/// geometric clustering around the weight peak rbar = speed_map_inverse(l).
/// R_max defaults to the envelope radius of the spec (so the weight never
/// underflows on the mesh); r_lo defaults to min(5e-4, R_max/100).
///
/// Refinement is nested: doubling the cell counts reproduces all existing
/// nodes, which the self-convergence studies rely on.
Mesh2D make_mesh(const EquilibriumSpec& spec, int n_theta, int n_r,
                 double r_lo = 0.0, double R_max = 0.0);

/// Mesh with theta -> pi - theta, nodes re-sorted ascending.
Mesh2D reflect_theta(const Mesh2D& mesh);

}  // namespace swh
