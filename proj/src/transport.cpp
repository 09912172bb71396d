#include "stamg/transport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stamg/kron.hpp"

namespace stamg {

namespace {

int axis_sign(int octant, int xi) { return (octant >> xi) & 1 ? -1 : 1; }

// integral of the 1D nodal shapes over [a, b] inside [0, h]
std::array<double, 2> shape_integrals(double a, double b, double h) {
  const double len = b - a, quad = (b * b - a * a) / (2 * h);
  return {len - quad, quad};
}

}  // namespace

ProblemOperators build_operators(const HexMesh& mesh, const AngularMesh& angular,
                                 BasisKind kind, int p,
                                 const ScatterKernel& kernel) {
  ProblemOperators ops;
  ops.mesh = mesh;
  ops.angular = angular;
  ops.kind = kind;
  ops.p = p;
  ops.kernel = kernel;
  ops.em = element_matrices(mesh, p);
  const int D = dofs_per_patch(kind);
  ops.layout = Layout{mesh.n_el, angular.n_leaves(), ops.em.S, D};
  ops.coup = build_couplings(angular, kind, kernel.N);

  const int P = angular.n_leaves();
  ops.pops.reserve(P);
  ops.diag.reserve(P);
  ops.inflow.reserve(P);
  ops.inflow_face.reserve(P);
  ops.outflow_face.reserve(P);
  for (int lp = 0; lp < P; ++lp) {
    const Patch& patch = angular.patch(angular.leaves[lp]);
    PatchOperators po = build_patch_operators(kind, patch);
    Eigen::MatrixXd B = kernel.sigma_t * kron(po.M, ops.em.N);
    std::array<Eigen::MatrixXd, 3> C;
    std::array<int, 3> fin, fout;
    for (int xi = 0; xi < 3; ++xi) {
      const double s = axis_sign(patch.octant, xi);
      fout[xi] = 2 * xi + (s > 0 ? 1 : 0);
      fin[xi] = 2 * xi + (s > 0 ? 0 : 1);
      B.noalias() -= kron(po.A[xi], ops.em.V[xi]);
      B.noalias() += s * kron(po.A[xi], ops.em.F_self[fout[xi]]);
      C[xi] = -s * kron(po.A[xi], ops.em.F_neigh[fin[xi]]);
    }
    ops.pops.push_back(std::move(po));
    ops.diag.push_back(std::move(B));
    ops.inflow.push_back(std::move(C));
    ops.inflow_face.push_back(fin);
    ops.outflow_face.push_back(fout);
  }
  return ops;
}

void apply_L_into(const ProblemOperators& ops, const FluxVector& phi,
                  FluxVector& y) {
  const Layout& lo = ops.layout;
  if (phi.size() != lo.size()) throw std::invalid_argument("apply_L: layout mismatch");
  y.resize(lo.size());
  const int bs = lo.D * lo.S;
#pragma omp parallel for schedule(static)
  for (int el = 0; el < lo.n_el; ++el) {
    std::array<int, 6> nb;
    for (int f = 0; f < 6; ++f) nb[f] = ops.mesh.neighbor(el, f);
    for (int q = 0; q < lo.n_patch; ++q) {
      Eigen::Map<Eigen::VectorXd> yb(y.data() + lo.block(el, q), bs);
      Eigen::Map<const Eigen::VectorXd> xb(phi.data() + lo.block(el, q), bs);
      yb.noalias() = ops.diag[q] * xb;
      for (int xi = 0; xi < 3; ++xi) {
        const int up = nb[ops.inflow_face[q][xi]];
        if (up < 0) continue;
        Eigen::Map<const Eigen::VectorXd> xu(phi.data() + lo.block(up, q), bs);
        yb.noalias() += ops.inflow[q][xi] * xu;
      }
    }
  }
}

FluxVector apply_L(const ProblemOperators& ops, const FluxVector& phi) {
  FluxVector y(ops.layout.size());
  apply_L_into(ops, phi, y);
  return y;
}

void apply_A_into(const ProblemOperators& ops, const FluxVector& phi,
                  int scatter_order, FluxVector& y) {
  apply_L_into(ops, phi, y);
  apply_scatter_into(ops.kernel, ops.coup, ops.em.N, ops.layout, phi,
                     scatter_order, -1.0, y);
}

FluxVector apply_A(const ProblemOperators& ops, const FluxVector& phi,
                   int scatter_order) {
  FluxVector y(ops.layout.size());
  apply_A_into(ops, phi, scatter_order, y);
  return y;
}

FluxVector assemble_rhs(const ProblemOperators& ops, const SourceSpec& spec) {
  const Layout& lo = ops.layout;
  FluxVector f = FluxVector::Zero(lo.size());

  if (spec.kind == SourceSpec::Kind::Uniform) {
    const Eigen::VectorXd nsum = ops.em.N.rowwise().sum();
    const double c = spec.strength / (4.0 * std::numbers::pi);
    Eigen::VectorXd chunk(std::ptrdiff_t(lo.n_patch) * lo.D * lo.S);
    for (int q = 0; q < lo.n_patch; ++q) {
      const Eigen::VectorXd msum = ops.pops[q].M.rowwise().sum();
      for (int d = 0; d < lo.D; ++d)
        chunk.segment(std::ptrdiff_t(q) * lo.D * lo.S + d * lo.S, lo.S) =
            (c * msum[d]) * nsum;
    }
    for (int el = 0; el < lo.n_el; ++el)
      f.segment(lo.element(el), chunk.size()) = chunk;
    return f;
  }

  // pencil beam along +z through the z = 0 footprint
  const HexMesh& m = ops.mesh;
  if (!(spec.x0 >= 0 && spec.x0 < spec.x1 && spec.x1 <= m.box && spec.y0 >= 0 &&
        spec.y0 < spec.y1 && spec.y1 <= m.box))
    throw std::invalid_argument("assemble_rhs: beam footprint outside boundary");

  const Vec3 pole(0, 0, 1);
  struct Receiver {
    int q;
    Eigen::VectorXd psi;  // basis values at the beam direction
  };
  std::vector<Receiver> recv;
  for (int q = 0; q < lo.n_patch; ++q) {
    const Patch& patch = ops.angular.patch(ops.angular.leaves[q]);
    if (!patch_contains(patch, pole)) continue;
    Eigen::VectorXd psi(lo.D);
    if (ops.kind == BasisKind::Const)
      psi[0] = 1.0;
    else
      psi = barycentric(patch, pole);
    recv.push_back({q, psi});
  }
  if (recv.empty()) throw std::logic_error("assemble_rhs: no patch holds the beam");
  const double share = spec.strength / double(recv.size());

  for (int iy = 0; iy < m.ny; ++iy) {
    const double ylo = iy * m.hy, yhi = ylo + m.hy;
    const double b0 = std::max(ylo, spec.y0), b1 = std::min(yhi, spec.y1);
    if (b1 <= b0) continue;
    for (int ix = 0; ix < m.nx; ++ix) {
      const double xlo = ix * m.hx, xhi = xlo + m.hx;
      const double a0 = std::max(xlo, spec.x0), a1 = std::min(xhi, spec.x1);
      if (a1 <= a0) continue;
      const int el = m.index(ix, iy, 0);
      Eigen::VectorXd t(lo.S);
      if (ops.p == 0) {
        t[0] = (a1 - a0) * (b1 - b0);
      } else {
        const auto tx = shape_integrals(a0 - xlo, a1 - xlo, m.hx);
        const auto ty = shape_integrals(b0 - ylo, b1 - ylo, m.hy);
        for (int i = 0; i < 8; ++i)
          t[i] = ((i >> 2) & 1) ? 0.0 : tx[i & 1] * ty[(i >> 1) & 1];
      }
      for (const Receiver& r : recv)
        for (int d = 0; d < lo.D; ++d)
          f.segment(lo.block(el, r.q) + std::ptrdiff_t(d) * lo.S, lo.S) +=
              (share * r.psi[d]) * t;
    }
  }
  return f;
}

double BalanceReport::defect() const {
  const double denom = std::abs(source) > 0 ? std::abs(source) : 1.0;
  return std::abs(source - absorption - leakage) / denom;
}

BalanceReport balance_report(const ProblemOperators& ops, const FluxVector& phi,
                             const FluxVector& f) {
  const Layout& lo = ops.layout;
  if (phi.size() != lo.size() || f.size() != lo.size())
    throw std::invalid_argument("balance_report: layout mismatch");
  BalanceReport rep;
  rep.source = f.sum();

  const Eigen::VectorXd nsum = ops.em.N.rowwise().sum();
  std::array<Eigen::VectorXd, 6> fsum;
  for (int face = 0; face < 6; ++face)
    fsum[face] = ops.em.F_self[face].rowwise().sum();
  std::vector<Eigen::VectorXd> msum(lo.n_patch);
  std::vector<std::array<Eigen::VectorXd, 3>> asum(lo.n_patch);
  for (int q = 0; q < lo.n_patch; ++q) {
    msum[q] = ops.pops[q].M.rowwise().sum();
    for (int xi = 0; xi < 3; ++xi) asum[q][xi] = ops.pops[q].A[xi].rowwise().sum();
  }

  double absorbed = 0, leaked = 0;
  for (int el = 0; el < lo.n_el; ++el) {
    const auto [ix, iy, iz] = ops.mesh.coords(el);
    const int lo_side[3] = {ix, iy, iz};
    const int hi_side[3] = {ops.mesh.nx - 1 - ix, ops.mesh.ny - 1 - iy,
                            ops.mesh.nz - 1 - iz};
    for (int q = 0; q < lo.n_patch; ++q) {
      MapConstRow X(phi.data() + lo.block(el, q), lo.D, lo.S);
      absorbed += msum[q].dot(X * nsum);
      for (int xi = 0; xi < 3; ++xi) {
        const int face = ops.outflow_face[q][xi];
        const bool at_boundary =
            (face % 2) ? hi_side[xi] == 0 : lo_side[xi] == 0;
        if (!at_boundary) continue;
        const double s = axis_sign(ops.angular.patch(ops.angular.leaves[q]).octant, xi);
        leaked += s * asum[q][xi].dot(X * fsum[face]);
      }
    }
  }
  rep.absorption = ops.kernel.sigma_a * absorbed;
  rep.leakage = leaked;
  return rep;
}

}  // namespace stamg
