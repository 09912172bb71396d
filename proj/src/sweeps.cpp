#include "stamg/sweeps.hpp"

#include <stdexcept>

namespace stamg {

SweepPlan build_sweep_plan(const ProblemOperators& ops) {
  SweepPlan plan;
  for (int oct = 0; oct < 8; ++oct)
    plan.order[oct] = sweep_order(ops.mesh, oct);
  const int P = ops.layout.n_patch;
  plan.lu.reserve(P);
  for (int q = 0; q < P; ++q) {
    plan.patches[ops.angular.patch(ops.angular.leaves[q]).octant].push_back(q);
    plan.lu.emplace_back(ops.diag[q]);
  }
  return plan;
}

void standard_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                    const FluxVector& rhs, FluxVector& z) {
  const Layout& lo = ops.layout;
  if (rhs.size() != lo.size())
    throw std::invalid_argument("standard_sweep: layout mismatch");
  z.resize(lo.size());
  const int bs = lo.D * lo.S;
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < lo.n_patch; ++q) {
    const int oct = ops.angular.patch(ops.angular.leaves[q]).octant;
    Eigen::VectorXd r(bs);
    for (const int el : plan.order[oct]) {
      r = rhs.segment(lo.block(el, q), bs);
      for (int xi = 0; xi < 3; ++xi) {
        const int up = ops.mesh.neighbor(el, ops.inflow_face[q][xi]);
        if (up < 0) continue;
        r.noalias() -= ops.inflow[q][xi] *
                       z.segment(lo.block(up, q), bs);
      }
      z.segment(lo.block(el, q), bs) = plan.lu[q].solve(r);
    }
  }
}

FluxVector standard_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                          const FluxVector& rhs) {
  FluxVector z(ops.layout.size());
  standard_sweep(plan, ops, rhs, z);
  return z;
}

void coarse_scatter_sweep(const SweepPlan& plan, const ProblemOperators& ops,
                          const FluxVector& rhs, int nu, FluxVector& phi) {
  const Layout& lo = ops.layout;
  if (rhs.size() != lo.size() || phi.size() != lo.size())
    throw std::invalid_argument("coarse_scatter_sweep: layout mismatch");
  if (nu <= 0) return;
  const int D = lo.D, S = lo.S, bs = D * S;
  const Eigen::VectorXd sig = sigma_by_harmonic(ops.kernel, ops.kernel.N);

  // fold the self-scatter block into each diagonal solve
  std::vector<Eigen::MatrixXd> xq(lo.n_patch);
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
  lu.reserve(lo.n_patch);
  for (int q = 0; q < lo.n_patch; ++q) {
    xq[q] = ops.coup.X.middleRows(q * D, D);
    const Eigen::MatrixXd sq = xq[q] * sig.asDiagonal() * xq[q].transpose();
    Eigen::MatrixXd B = ops.diag[q];
    for (int m = 0; m < D; ++m)
      for (int d = 0; d < D; ++d)
        B.block(m * S, d * S, S, S).noalias() -= sq(m, d) * ops.em.N;
    lu.emplace_back(std::move(B));
  }

  // per-element flux moments, kept current as patches update
  std::vector<RowMat> mom(lo.n_el);
  for (int el = 0; el < lo.n_el; ++el) {
    MapConstRow chunk(phi.data() + lo.element(el), lo.n_patch * D, S);
    mom[el] = ops.coup.X.transpose() * chunk;
  }

  Eigen::VectorXd r(bs);
  RowMat znew(D, S);
  for (int pass = 0; pass < nu; ++pass)
    for (int oct = 0; oct < 8; ++oct)
      for (const int el : plan.order[oct])
        for (const int q : plan.patches[oct]) {
          r = rhs.segment(lo.block(el, q), bs);
          for (int xi = 0; xi < 3; ++xi) {
            const int up = ops.mesh.neighbor(el, ops.inflow_face[q][xi]);
            if (up < 0) continue;
            r.noalias() -= ops.inflow[q][xi] * phi.segment(lo.block(up, q), bs);
          }
          MapRow zold(phi.data() + lo.block(el, q), D, S);
          MapRow rmat(r.data(), D, S);
          rmat.noalias() +=
              xq[q] *
              (sig.asDiagonal() * (mom[el] - xq[q].transpose() * zold)) *
              ops.em.N;
          Eigen::Map<Eigen::VectorXd> zv(znew.data(), bs);
          zv = lu[q].solve(r);
          mom[el].noalias() += xq[q].transpose() * (znew - zold);
          zold = znew;
        }
}

void smoother_step(const SweepPlan& plan, const ProblemOperators& ops,
                   const FluxVector& f, int scatter_order, FluxVector& phi) {
  FluxVector r(ops.layout.size());
  apply_A_into(ops, phi, scatter_order, r);
  r = f - r;
  standard_sweep(plan, ops, r, r);
  phi += r;
}

}  // namespace stamg
