#pragma once
// Transport sweeps. Within one octant the patches decouple and the spatial
// upwind order makes L block lower triangular, so a single pass of small
// dense solves inverts it exactly. The coarse-grid variant keeps the
// within-patch scatter implicit and Gauss-Seidels the rest.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "stamg/transport.hpp"

namespace stamg {

struct SweepPlan {
  std::array<std::vector<int>, 8> order;    // element traversal per octant
  std::array<std::vector<int>, 8> patches;  // leaf positions owned per octant
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;  // B_q, per leaf
};

SweepPlan build_sweep_plan(const ProblemOperators& ops);

// z = L^{-1} rhs, one exact block-triangular solve; z may alias rhs
void standard_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                    const FluxVector& rhs, FluxVector& z);
FluxVector standard_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                          const FluxVector& rhs);

// nu Gauss-Seidel transport sweeps on (L - S) phi = rhs with the diagonal
// scatter blocks X_q sigma X_q^T folded into the solves; updates phi in place
void coarse_scatter_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                          const FluxVector& rhs, int nu, FluxVector& phi);

// phi += L^{-1} (f - A phi) with scatter truncated at scatter_order
void smoother_step(const SweepPlan& plan, const ProblemOperators& ops,
                   const FluxVector& f, int scatter_order, FluxVector& phi);

}  // namespace stamg
