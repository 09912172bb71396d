#pragma once
// Quadrature on spherical-triangle patches: a tensor Gauss-Legendre rule on
// the flat octahedron triangle (Duffy collapse) pushed through the central
// projection with its solid-angle Jacobian. The curved weight makes the rule
// non-polynomially exact; `order` scales the point count and the achieved
// tolerances are pinned by the unit tests.

#include <vector>

#include <Eigen/Dense>

#include "stamg/sphere_mesh.hpp"

namespace stamg {

struct Gauss1D {
  std::vector<double> x, w;  // on [0,1]
};
const Gauss1D& gauss_legendre_01(int n);

struct QuadratureRule {
  Eigen::Matrix3Xd nodes;   // unit direction per column
  Eigen::VectorXd weights;  // sr, positive
  Eigen::Matrix3Xd bary;    // barycentric w.r.t. the patch flat triangle
  int size() const { return static_cast<int>(weights.size()); }
};

// The curved Jacobian varies strongly over the big low-level patches, so the
// per-axis point count is raised there (order 8 reaches ~3e-6 on a level-0
// octant but ~1e-11 from level 2 on; 20 points reach rounding everywhere).
inline int default_patch_order(int level, int base = 8) {
  const int bump = level == 0 ? 20 : level == 1 ? 12 : 8;
  return base > bump ? base : bump;
}

QuadratureRule patch_quadrature(const Patch& patch, int order);

}  // namespace stamg
