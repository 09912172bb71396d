#pragma once
// The discrete transport operator in fused-block form. Each (element, patch)
// block of L is a Kronecker product of angular and spatial matrices; with a
// uniform grid one diagonal block B_q and three upwind neighbor blocks
// C_{q,xi} per patch serve every element, so the application is matrix-free
// over small dense blocks.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "stamg/angular_disc.hpp"
#include "stamg/layout.hpp"
#include "stamg/scatter.hpp"
#include "stamg/spatial_disc.hpp"
#include "stamg/sphere_mesh.hpp"

namespace stamg {

struct SourceSpec {
  enum class Kind { Uniform, Beam };
  Kind kind = Kind::Uniform;
  double strength = 1.0;  // uniform: isotropic emission density (1/cm^3/s)
  // beam: unit incoming partial current per cm^2 through this z = 0 footprint
  double x0 = 2, x1 = 3, y0 = 2, y1 = 3;
};

struct ProblemOperators {
  HexMesh mesh;
  AngularMesh angular;
  BasisKind kind = BasisKind::Const;
  int p = 0;
  ScatterKernel kernel;
  Layout layout;
  ElementMatrices em;
  HarmonicCouplings coup;
  std::vector<PatchOperators> pops;  // per leaf, in leaf order
  // B_q = sigma_t (M x N) - sum_xi (A^xi x V^xi) + outgoing face terms
  std::vector<Eigen::MatrixXd> diag;
  // C_{q,xi}: coupling to the upwind neighbor along axis xi (absent at vacuum)
  std::vector<std::array<Eigen::MatrixXd, 3>> inflow;
  std::vector<std::array<int, 3>> inflow_face;   // hex face id per axis
  std::vector<std::array<int, 3>> outflow_face;
};

ProblemOperators build_operators(const HexMesh& mesh, const AngularMesh& angular,
                                 BasisKind kind, int p,
                                 const ScatterKernel& kernel);

// y = L phi (streaming + removal, no scatter)
void apply_L_into(const ProblemOperators& ops, const FluxVector& phi,
                  FluxVector& y);
FluxVector apply_L(const ProblemOperators& ops, const FluxVector& phi);

// y = (L - S) phi with the scatter source truncated at scatter_order
void apply_A_into(const ProblemOperators& ops, const FluxVector& phi,
                  int scatter_order, FluxVector& y);
FluxVector apply_A(const ProblemOperators& ops, const FluxVector& phi,
                   int scatter_order);

FluxVector assemble_rhs(const ProblemOperators& ops, const SourceSpec& spec);

struct BalanceReport {
  double source = 0;      // total emission, 1^T f
  double absorption = 0;  // sigma_a * integral of phi
  double leakage = 0;     // outflow through the vacuum boundary
  double defect() const;  // |source - absorption - leakage| relative to source
};
BalanceReport balance_report(const ProblemOperators& ops, const FluxVector& phi,
                             const FluxVector& f);

}  // namespace stamg
