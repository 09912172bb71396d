#pragma once
// Angular basis functions on patches and the patch-local angular matrices:
// mass M, directional Jacobians A^xi, and the upwind face splitting.

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "stamg/quadrature.hpp"
#include "stamg/sphere_mesh.hpp"

namespace stamg {

enum class BasisKind { Const, Lin };

inline int dofs_per_patch(BasisKind kind) {
  return kind == BasisKind::Const ? 1 : 3;
}

// Barycentric coordinates of the central projection of omega onto the patch
// flat triangle. Valid for any omega with a positive component along the
// patch normal; callers use patch_contains first for membership.
Vec3 barycentric(const Patch& patch, const Vec3& omega);
bool patch_contains(const Patch& patch, const Vec3& omega, double tol = 1e-12);

// 0 if omega lies outside the patch.
double eval_basis(BasisKind kind, const Patch& patch, int d, const Vec3& omega);

struct PatchOperators {
  Eigen::MatrixXd M;                    // dofs x dofs, SPD
  std::array<Eigen::MatrixXd, 3> A;     // A^x, A^y, A^z, symmetric
};

// order <= 0 picks the level-aware default
PatchOperators build_patch_operators(BasisKind kind, const Patch& patch,
                                     int order = 0);

// Riemann splitting of the face matrix sum_xi n_xi A^xi into outgoing
// (omega.n > 0) and incoming parts. Axis-aligned normals use the exact sign
// rule (a patch never straddles a coordinate plane); general normals fall
// back to a dense indicator rule, with A_in = A_face - A_out by construction.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> face_split(BasisKind kind,
                                                       const Patch& patch,
                                                       const Vec3& normal,
                                                       int order = 24);

}  // namespace stamg
