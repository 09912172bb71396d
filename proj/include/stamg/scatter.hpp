#pragma once
// Legendre scatter kernel: Fokker-Planck-equivalent moments, real orthonormal
// spherical harmonics, patch-harmonic coupling tables X, and the discrete
// scatter operator application.

#include <Eigen/Dense>

#include "stamg/angular_disc.hpp"
#include "stamg/layout.hpp"
#include "stamg/sphere_mesh.hpp"

namespace stamg {

struct ScatterKernel {
  int N = 0;
  double alpha = 0;
  double sigma_a = 0;
  double sigma_t = 0;            // removal: sigma_a + sigma_{s,0}
  Eigen::VectorXd moments;       // sigma_{s,n}, n = 0..N
};

ScatterKernel fp_equivalent_moments(int N, double alpha, double sigma_a = 0.0);
ScatterKernel absorber_kernel(double sigma_a);

// h = n^2 + n + o enumerates harmonics; H = (N+1)^2 of them up to degree N.
inline int harmonic_count(int N) { return (N + 1) * (N + 1); }

double real_sph_harmonic(int n, int o, const Vec3& omega);
// all harmonics up to degree N at once; out must have (N+1)^2 entries
void eval_real_harmonics(int N, const Vec3& omega, Eigen::VectorXd& out);

struct HarmonicCouplings {
  int N = 0;
  BasisKind kind = BasisKind::Const;
  int D = 1;
  // row block q (D rows starting at q*D) holds X_q with X_q(d, h) =
  // int_{D_q} psi_d Y_h; columns ordered by h.
  Eigen::MatrixXd X;
};

// Quadrature default: 8, raised to 12 for N > 12 (harmonic degree coverage).
inline int default_quad_order(int N) { return N > 12 ? 12 : 8; }

HarmonicCouplings build_couplings(const AngularMesh& mesh, BasisKind kind,
                                  int N, int order = 0);

// sigma per harmonic up to degree max_order, (max_order+1)^2 entries;
// throws if max_order > kernel.N
Eigen::VectorXd sigma_by_harmonic(const ScatterKernel& kernel, int max_order);

// y += scale * Q(phi) with Q the discrete scatter source at `max_order`;
// Nmat is the spatial mass matrix (uniform grid: one per problem).
void apply_scatter_into(const ScatterKernel& kernel,
                        const HarmonicCouplings& coup,
                        const Eigen::MatrixXd& Nmat, const Layout& layout,
                        const FluxVector& phi, int max_order, double scale,
                        FluxVector& y);

// convenience form returning Q itself
FluxVector apply_scatter(const ScatterKernel& kernel,
                         const HarmonicCouplings& coup,
                         const Eigen::MatrixXd& Nmat, const Layout& layout,
                         const FluxVector& phi, int max_order);

}  // namespace stamg
