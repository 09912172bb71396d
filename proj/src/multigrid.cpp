#include "stamg/multigrid.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace stamg {

namespace {

ScatterKernel truncate_kernel(const ScatterKernel& k, int nr) {
  ScatterKernel t = k;
  t.N = nr;
  t.moments = k.moments.head(nr + 1);
  return t;  // sigma_t keeps the full-order removal
}

// exact barycentric coordinates of a daughter vertex in the parent triangle,
// resolved on the integer lattice (vertex or edge midpoint)
Eigen::Vector3d corner_weights(const Patch& parent, const IVec3& v) {
  const auto eq = [](const IVec3& x, const IVec3& y) {
    return (x.array() == y.array()).all();
  };
  const auto& a = parent.flat[0];
  const auto& b = parent.flat[1];
  const auto& c = parent.flat[2];
  if (eq(v, a)) return {1, 0, 0};
  if (eq(v, b)) return {0, 1, 0};
  if (eq(v, c)) return {0, 0, 1};
  const IVec3 w = 2 * v;
  if (eq(w, a + b)) return {0.5, 0.5, 0};
  if (eq(w, b + c)) return {0, 0.5, 0.5};
  if (eq(w, a + c)) return {0.5, 0, 0.5};
  throw std::logic_error("corner_weights: vertex not nested in parent");
}

}  // namespace

int nr_default(int N) {
  switch (N) {
    case 4: return 2;
    case 8: return 4;
    case 12: return 6;
    case 16: return 7;
    case 20: return 8;
    case 24: return 9;
    default: return std::min(9, (N + 1) / 2);
  }
}

MgHierarchy build_hierarchy(const ProblemOperators& fine, const CycleSpec& cycle) {
  MgHierarchy h;
  h.cycle = cycle;
  h.nr = cycle.nr < 0 ? fine.kernel.N : cycle.nr;
  if (h.nr > fine.kernel.N)
    throw std::invalid_argument("build_hierarchy: nr exceeds N");
  const ScatterKernel kr = truncate_kernel(fine.kernel, h.nr);

  const int L = fine.angular.max_level;
  h.level.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    const AngularMesh mesh =
        l == L ? fine.angular : coarsen_to_level(fine.angular, l);
    h.level[l].ops = build_operators(fine.mesh, mesh, fine.kind, fine.p, kr);
    h.level[l].plan = build_sweep_plan(h.level[l].ops);
  }

  const int D = dofs_per_patch(fine.kind);
  for (int l = 1; l <= L; ++l) {
    const AngularMesh& cm = h.level[l - 1].ops.angular;
    const AngularMesh& fm = h.level[l].ops.angular;
    std::unordered_map<int, int> coarse_pos;
    for (int c = 0; c < cm.n_leaves(); ++c) coarse_pos[cm.leaves[c]] = c;

    auto& up = h.level[l].up;
    up.resize(fm.n_leaves());
    for (int q = 0; q < fm.n_leaves(); ++q) {
      const Patch& p = fm.patch(fm.leaves[q]);
      if (auto it = coarse_pos.find(p.id); it != coarse_pos.end()) {
        up[q] = {it->second, Eigen::MatrixXd::Identity(D, D)};
        continue;
      }
      const auto it = coarse_pos.find(p.parent);
      if (it == coarse_pos.end())
        throw std::logic_error("build_hierarchy: meshes are not nested");
      Eigen::MatrixXd B(D, D);
      if (fine.kind == BasisKind::Const) {
        B(0, 0) = 1.0;
      } else {
        const Patch& parent = cm.patch(p.parent);
        for (int d = 0; d < 3; ++d)
          B.row(d) = corner_weights(parent, p.flat[d]).transpose();
      }
      up[q] = {it->second, std::move(B)};
    }
  }
  return h;
}

FluxVector prolongate(const MgHierarchy& h, int l, const FluxVector& coarse) {
  if (l < 1 || l >= int(h.level.size()))
    throw std::invalid_argument("prolongate: level out of range");
  const Layout& lf = h.level[l].ops.layout;
  const Layout& lc = h.level[l - 1].ops.layout;
  if (coarse.size() != lc.size())
    throw std::invalid_argument("prolongate: layout mismatch");
  FluxVector fine(lf.size());
#pragma omp parallel for schedule(static)
  for (int el = 0; el < lf.n_el; ++el)
    for (int q = 0; q < lf.n_patch; ++q) {
      const TransferBlock& t = h.level[l].up[q];
      MapRow dst(fine.data() + lf.block(el, q), lf.D, lf.S);
      MapConstRow src(coarse.data() + lc.block(el, t.coarse), lc.D, lc.S);
      dst.noalias() = t.B * src;
    }
  return fine;
}

FluxVector restrict_residual(const MgHierarchy& h, int l, const FluxVector& fine) {
  if (l < 1 || l >= int(h.level.size()))
    throw std::invalid_argument("restrict_residual: level out of range");
  const Layout& lf = h.level[l].ops.layout;
  const Layout& lc = h.level[l - 1].ops.layout;
  if (fine.size() != lf.size())
    throw std::invalid_argument("restrict_residual: layout mismatch");
  FluxVector coarse = FluxVector::Zero(lc.size());
#pragma omp parallel for schedule(static)
  for (int el = 0; el < lf.n_el; ++el)
    for (int q = 0; q < lf.n_patch; ++q) {
      const TransferBlock& t = h.level[l].up[q];
      MapConstRow src(fine.data() + lf.block(el, q), lf.D, lf.S);
      MapRow dst(coarse.data() + lc.block(el, t.coarse), lc.D, lc.S);
      dst.noalias() += t.B.transpose() * src;
    }
  return coarse;
}

void lmg_vcycle(const MgHierarchy& h, int l, const FluxVector& f,
                FluxVector& phi) {
  const MgLevel& lev = h.level[l];
  if (phi.size() != lev.ops.layout.size() || f.size() != lev.ops.layout.size())
    throw std::invalid_argument("lmg_vcycle: layout mismatch");
  if (l == 0) {
    if (h.cycle.coarse_tol > 0) {
      const double fnorm = f.norm();
      FluxVector r(f.size());
      for (int s = 0; s < 200; ++s) {
        coarse_scatter_sweep(lev.plan, lev.ops, f, 1, phi);
        apply_A_into(lev.ops, phi, lev.ops.kernel.N, r);
        if ((f - r).norm() <= h.cycle.coarse_tol * fnorm) break;
      }
    } else {
      coarse_scatter_sweep(lev.plan, lev.ops, f, h.cycle.coarse_sweeps, phi);
    }
    return;
  }
  for (int s = 0; s < h.cycle.nu_pre; ++s)
    smoother_step(lev.plan, lev.ops, f, h.nr, phi);

  FluxVector r(f.size());
  apply_A_into(lev.ops, phi, h.nr, r);
  r = f - r;
  const FluxVector rc = restrict_residual(h, l, r);
  FluxVector ec = FluxVector::Zero(rc.size());
  lmg_vcycle(h, l - 1, rc, ec);
  phi += prolongate(h, l, ec);

  for (int s = 0; s < h.cycle.nu_post; ++s)
    smoother_step(lev.plan, lev.ops, f, h.nr, phi);
}

FluxVector mg_apply(const MgHierarchy& h, const FluxVector& r) {
  FluxVector phi = FluxVector::Zero(r.size());
  lmg_vcycle(h, int(h.level.size()) - 1, r, phi);
  return phi;
}

}  // namespace stamg
