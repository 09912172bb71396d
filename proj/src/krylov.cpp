#include "stamg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace stamg {

std::pair<FluxVector, SolveReport> bicgstab(const LinearOp& apply_op,
                                            const LinearOp& precond,
                                            const FluxVector& b, double tol,
                                            int max_iter) {
  if (tol <= 0) throw std::invalid_argument("bicgstab: tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  FluxVector x = FluxVector::Zero(b.size());

  const double bnorm = b.norm();
  const auto finish = [&](const FluxVector& sol) {
    rep.final_residual =
        bnorm > 0 ? (b - apply_op(sol)).norm() / bnorm : 0.0;
    rep.converged = rep.final_residual < tol;
    rep.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return std::make_pair(sol, rep);
  };
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return {x, rep};
  }

  FluxVector r = b;
  const FluxVector rhat = r;
  FluxVector p = FluxVector::Zero(b.size());
  FluxVector v = FluxVector::Zero(b.size());
  double rho = 1, alpha = 1, omega = 1;

  for (int it = 1; it <= max_iter; ++it) {
    const double rho1 = rhat.dot(r);
    if (rho1 == 0.0 || omega == 0.0) {
      rep.breakdown = true;
      return finish(x);
    }
    const double beta = (rho1 / rho) * (alpha / omega);
    rho = rho1;
    p = r + beta * (p - omega * v);
    const FluxVector phat = precond(p);
    ++rep.preconditioner_applications;
    v = apply_op(phat);
    const double rv = rhat.dot(v);
    if (rv == 0.0) {
      rep.breakdown = true;
      return finish(x);
    }
    alpha = rho / rv;
    const FluxVector s = r - alpha * v;
    x += alpha * phat;
    const double snorm = s.norm() / bnorm;
    if (std::isnan(snorm)) throw std::runtime_error("bicgstab: NaN residual");
    if (snorm < tol) {
      rep.iterations = it;  // half step taken, counted as a full one
      rep.residual_history.push_back(snorm);
      rep.iter_seconds.push_back(elapsed());
      return finish(x);
    }
    const FluxVector shat = precond(s);
    ++rep.preconditioner_applications;
    const FluxVector t = apply_op(shat);
    const double tt = t.dot(t);
    if (tt == 0.0) {
      rep.breakdown = true;
      return finish(x);
    }
    omega = t.dot(s) / tt;
    x += omega * shat;
    r = s - omega * t;
    const double rnorm = r.norm() / bnorm;
    if (std::isnan(rnorm)) throw std::runtime_error("bicgstab: NaN residual");
    rep.iterations = it;
    rep.residual_history.push_back(rnorm);
    rep.iter_seconds.push_back(elapsed());
    if (rnorm < tol) return finish(x);
  }
  return finish(x);
}

}  // namespace stamg
