#include "stamg/angular_disc.hpp"

#include <cmath>
#include <stdexcept>

namespace stamg {

namespace {

Eigen::Matrix3d flat_matrix(const Patch& patch) {
  const double inv = 1.0 / static_cast<double>(kFlatScale);
  Eigen::Matrix3d V;
  for (int i = 0; i < 3; ++i) V.col(i) = patch.flat[i].cast<double>() * inv;
  return V;
}

}  // namespace

Vec3 barycentric(const Patch& patch, const Vec3& omega) {
  // omega is proportional to V * mu; normalize mu to barycentric weights.
  Vec3 mu = flat_matrix(patch).partialPivLu().solve(omega);
  const double s = mu.sum();
  return mu / s;
}

bool patch_contains(const Patch& patch, const Vec3& omega, double tol) {
  Vec3 mu = flat_matrix(patch).partialPivLu().solve(omega);
  const double s = mu.sum();
  if (s <= 0) return false;
  mu /= s;
  return mu.minCoeff() >= -tol;
}

double eval_basis(BasisKind kind, const Patch& patch, int d, const Vec3& omega) {
  if (!patch_contains(patch, omega)) return 0.0;
  if (kind == BasisKind::Const) return 1.0;
  return barycentric(patch, omega)[d];
}

PatchOperators build_patch_operators(BasisKind kind, const Patch& patch,
                                     int order) {
  if (order <= 0) order = default_patch_order(patch.level);
  const int dofs = dofs_per_patch(kind);
  const QuadratureRule rule = patch_quadrature(patch, order);
  PatchOperators ops;
  ops.M = Eigen::MatrixXd::Zero(dofs, dofs);
  for (auto& a : ops.A) a = Eigen::MatrixXd::Zero(dofs, dofs);
  Eigen::VectorXd psi(dofs);
  for (int g = 0; g < rule.size(); ++g) {
    if (kind == BasisKind::Const)
      psi[0] = 1.0;
    else
      psi = rule.bary.col(g);
    const Eigen::MatrixXd outer = rule.weights[g] * (psi * psi.transpose());
    ops.M += outer;
    for (int xi = 0; xi < 3; ++xi) ops.A[xi] += rule.nodes(xi, g) * outer;
  }
  return ops;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> face_split(BasisKind kind,
                                                       const Patch& patch,
                                                       const Vec3& normal,
                                                       int order) {
  const int dofs = dofs_per_patch(kind);

  int axis = -1;
  for (int xi = 0; xi < 3; ++xi)
    if (std::abs(std::abs(normal[xi]) - 1.0) < 1e-14) axis = xi;

  if (axis >= 0) {
    const PatchOperators ops = build_patch_operators(kind, patch, 0);
    Eigen::MatrixXd face = normal[axis] * ops.A[axis];
    const double sgn = (patch.octant >> axis) & 1 ? -1.0 : 1.0;
    if (normal[axis] * sgn > 0)
      return {face, Eigen::MatrixXd::Zero(dofs, dofs)};
    return {Eigen::MatrixXd::Zero(dofs, dofs), face};
  }

  if (order < 20) order = 20;
  const QuadratureRule rule = patch_quadrature(patch, order);
  Eigen::MatrixXd face = Eigen::MatrixXd::Zero(dofs, dofs);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dofs, dofs);
  Eigen::VectorXd psi(dofs);
  for (int g = 0; g < rule.size(); ++g) {
    if (kind == BasisKind::Const)
      psi[0] = 1.0;
    else
      psi = rule.bary.col(g);
    const double on = rule.nodes.col(g).dot(normal);
    const Eigen::MatrixXd term = rule.weights[g] * on * (psi * psi.transpose());
    face += term;
    if (on > 0) out += term;
  }
  return {out, face - out};
}

}  // namespace stamg
