#include "stamg/krylov.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "stamg/multigrid.hpp"
#include "support/oracles.hpp"

using namespace stamg;

namespace {

const LinearOp kIdentity = [](const FluxVector& x) { return x; };

FluxVector random_flux(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FluxVector x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_SUITE("krylov") {

TEST_CASE("identity system converges immediately") {
  const FluxVector b = random_flux(40, 1u);
  const auto [x, rep] = bicgstab(kIdentity, kIdentity, b, 1e-12, 50);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(rep.preconditioner_applications == 1);  // exits at the half step
  CHECK((x - b).lpNorm<Eigen::Infinity>() < 1e-12);
  REQUIRE(!rep.residual_history.empty());
  CHECK(rep.residual_history.back() < 1e-12);
}

TEST_CASE("zero right-hand side") {
  const FluxVector b = FluxVector::Zero(17);
  const auto [x, rep] = bicgstab(kIdentity, kIdentity, b, 1e-8, 50);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(x.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK_THROWS_AS(bicgstab(kIdentity, kIdentity, b, -1.0, 5),
                  std::invalid_argument);
}

TEST_CASE("transport solve matches the dense factorization") {
  const auto k = fp_equivalent_moments(4, 1.0, 0.0);
  const auto ops = build_operators(build_hex_mesh(2, 2, 2, 1.0 / 3),
                                   build_uniform_mesh(0), BasisKind::Const, 0, k);
  const auto plan = build_sweep_plan(ops);
  SourceSpec spec;
  const FluxVector b = assemble_rhs(ops, spec);

  const Eigen::MatrixXd A = testing::dense_transport_matrix(ops) -
                            testing::dense_scatter_matrix(ops, k.N);
  const Eigen::VectorXd xlu = A.partialPivLu().solve(b);

  const LinearOp apply = [&](const FluxVector& x) { return apply_A(ops, x, k.N); };
  const LinearOp sweep = [&](const FluxVector& r) {
    return standard_sweep(plan, ops, r);
  };
  auto [xs, reps] = bicgstab(apply, sweep, b, 1e-10, 200);
  CHECK(reps.converged);
  CHECK((xs - xlu).norm() < 1e-8 * xlu.norm());

  const auto h = build_hierarchy(ops, CycleSpec{});
  const LinearOp mg = [&](const FluxVector& r) { return mg_apply(h, r); };
  auto [xm, repm] = bicgstab(apply, mg, b, 1e-10, 200);
  CHECK(repm.converged);
  CHECK((xm - xlu).norm() < 1e-8 * xlu.norm());
  CHECK(repm.preconditioner_applications <= 2 * repm.iterations);
}

TEST_CASE("reported residual is the true one") {
  const auto k = fp_equivalent_moments(8, 1.0, 0.0);
  const auto ops = build_operators(build_hex_mesh(3, 3, 3, 1.0),
                                   build_uniform_mesh(1), BasisKind::Lin, 1, k);
  const auto plan = build_sweep_plan(ops);
  SourceSpec spec;
  const FluxVector b = assemble_rhs(ops, spec);
  const LinearOp apply = [&](const FluxVector& x) { return apply_A(ops, x, k.N); };
  const LinearOp sweep = [&](const FluxVector& r) {
    return standard_sweep(plan, ops, r);
  };
  const auto [x, rep] = bicgstab(apply, sweep, b, 1e-8, 300);
  REQUIRE(rep.converged);
  CHECK(rep.final_residual < 1e-8);
  // recursion residual and recomputed residual agree: no drift
  CHECK(std::abs(rep.residual_history.back() - rep.final_residual) < 1e-10);

  // iteration count ignores the absolute scale of b
  const auto [x2, rep2] = bicgstab(apply, sweep, 1e3 * b, 1e-8, 300);
  CHECK(rep2.iterations == rep.iterations);
  CHECK((1e-3 * x2 - x).norm() < 1e-7 * x.norm());
}

TEST_CASE("iteration cap reports non-convergence") {
  const auto k = fp_equivalent_moments(8, 1.0, 0.0);
  const auto ops = build_operators(build_hex_mesh(2, 2, 2, 5.0),
                                   build_uniform_mesh(0), BasisKind::Const, 0, k);
  const auto plan = build_sweep_plan(ops);
  SourceSpec spec;
  const FluxVector b = assemble_rhs(ops, spec);
  const LinearOp apply = [&](const FluxVector& x) { return apply_A(ops, x, k.N); };
  const LinearOp sweep = [&](const FluxVector& r) {
    return standard_sweep(plan, ops, r);
  };
  const auto [x, rep] = bicgstab(apply, sweep, b, 1e-14, 3);
  CHECK(!rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(int(rep.residual_history.size()) == 3);
}

}  // TEST_SUITE
