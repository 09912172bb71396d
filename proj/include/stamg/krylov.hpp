#pragma once
// Right-preconditioned BiCGSTAB. The residual reported and tested against the
// tolerance is the unpreconditioned one, so runs with different
// preconditioners share the same convergence metric.

#include <functional>
#include <vector>

#include "stamg/layout.hpp"

namespace stamg {

using LinearOp = std::function<FluxVector(const FluxVector&)>;

struct SolveReport {
  int iterations = 0;  // full steps; an early exit at the half step counts
  std::vector<double> residual_history;  // ||r|| / ||b|| per iteration
  std::vector<double> iter_seconds;      // cumulative wall time per iteration
  bool converged = false;
  bool breakdown = false;
  double final_residual = 0;  // true residual recomputed at exit
  double wall_time = 0;       // seconds
  int preconditioner_applications = 0;
};

// solves A x = b with x0 = 0; throws on NaN residuals
std::pair<FluxVector, SolveReport> bicgstab(const LinearOp& apply_op,
                                            const LinearOp& precond,
                                            const FluxVector& b, double tol,
                                            int max_iter);

}  // namespace stamg
