#pragma once
// Angular multigrid: nested hierarchy of coarsened angular meshes with
// directly rediscretized operators (DCA), exact Galerkin transfers (R = P^T),
// transport-sweep smoothing and the scatter-implicit Gauss-Seidel bottom
// solver. One V-cycle is a fixed linear operation, usable as a Krylov
// preconditioner.

#include <vector>

#include <Eigen/Dense>

#include "stamg/sweeps.hpp"
#include "stamg/transport.hpp"

namespace stamg {

struct CycleSpec {
  int nu_pre = 1;
  int nu_post = 1;
  int nr = -1;            // scatter order inside the cycle; -1 means full N
  int coarse_sweeps = 10;
  // > 0 switches the bottom solve to a relative-residual stop (200-pass cap)
  double coarse_tol = 0;
};

// reduced-order schedule: 2,4,6,7,8,9 at N = 4,8,12,16,20,24, N/2 capped at 9
// in between
int nr_default(int N);

// interpolation from the parent patch: identity when the patch survives
// coarsening, otherwise the daughter's nodal values in the parent's basis
struct TransferBlock {
  int coarse = -1;      // leaf position on the coarser mesh
  Eigen::MatrixXd B;    // D x D
};

struct MgLevel {
  ProblemOperators ops;
  SweepPlan plan;
  std::vector<TransferBlock> up;  // per fine leaf; empty on level 0
};

struct MgHierarchy {
  std::vector<MgLevel> level;  // 0 = 8 octants, back() = fine mesh
  CycleSpec cycle;
  int nr = 0;                  // resolved scatter order of the cycle
};

// throws if cycle.nr exceeds the kernel order
MgHierarchy build_hierarchy(const ProblemOperators& fine, const CycleSpec& cycle);

FluxVector prolongate(const MgHierarchy& h, int l, const FluxVector& coarse);
FluxVector restrict_residual(const MgHierarchy& h, int l, const FluxVector& fine);

// recursive LMG cycle on level l; phi is updated in place
void lmg_vcycle(const MgHierarchy& h, int l, const FluxVector& f,
                FluxVector& phi);

// preconditioner application: one V-cycle from a zero initial guess
FluxVector mg_apply(const MgHierarchy& h, const FluxVector& r);

}  // namespace stamg
