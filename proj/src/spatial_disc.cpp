#include "stamg/spatial_disc.hpp"

#include <stdexcept>

#include "stamg/kron.hpp"

namespace stamg {

namespace {

Eigen::Matrix2d mass1d(double h) {
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  return m * (h / 6.0);
}

}  // namespace

int HexMesh::neighbor(int el, int f) const {
  auto [ix, iy, iz] = coords(el);
  const int axis = f / 2, dir = (f % 2) ? 1 : -1;
  int c[3] = {ix, iy, iz};
  c[axis] += dir;
  const int n[3] = {nx, ny, nz};
  if (c[axis] < 0 || c[axis] >= n[axis]) return -1;
  return index(c[0], c[1], c[2]);
}

HexMesh build_hex_mesh(int nx, int ny, int nz, double box) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("build_hex_mesh: zero element count");
  if (box <= 0) throw std::invalid_argument("build_hex_mesh: box must be positive");
  HexMesh m;
  m.nx = nx;
  m.ny = ny;
  m.nz = nz;
  m.box = box;
  m.hx = box / nx;
  m.hy = box / ny;
  m.hz = box / nz;
  m.n_el = nx * ny * nz;
  return m;
}

ElementMatrices element_matrices(const HexMesh& mesh, int p) {
  if (p != 0 && p != 1) throw std::invalid_argument("element_matrices: p must be 0 or 1");
  ElementMatrices em;
  if (p == 0) {
    em.S = 1;
    em.N = Eigen::MatrixXd::Constant(1, 1, mesh.volume());
    const double areas[3] = {mesh.hy * mesh.hz, mesh.hx * mesh.hz, mesh.hx * mesh.hy};
    for (int xi = 0; xi < 3; ++xi) {
      em.V[xi] = Eigen::MatrixXd::Zero(1, 1);
      for (int s = 0; s < 2; ++s) {
        em.F_self[2 * xi + s] = Eigen::MatrixXd::Constant(1, 1, areas[xi]);
        em.F_neigh[2 * xi + s] = Eigen::MatrixXd::Constant(1, 1, areas[xi]);
      }
    }
    return em;
  }

  em.S = 8;
  const Eigen::Matrix2d mx = mass1d(mesh.hx), my = mass1d(mesh.hy), mz = mass1d(mesh.hz);
  Eigen::Matrix2d g, t_lo, t_hi, c_lo, c_hi;
  g << -0.5, -0.5, 0.5, 0.5;       // int phi_l' phi_i, h-independent
  t_lo << 1, 0, 0, 0;              // own trace at the low end
  t_hi << 0, 0, 0, 1;
  c_lo << 0, 1, 0, 0;              // own low trace vs neighbor high trace
  c_hi << 0, 0, 1, 0;
  em.N = kron(mz, kron(my, mx));
  em.V[0] = kron(mz, kron(my, g));
  em.V[1] = kron(mz, kron(g, mx));
  em.V[2] = kron(g, kron(my, mx));
  for (int xi = 0; xi < 3; ++xi) {
    auto assemble = [&](const Eigen::Matrix2d& t) {
      switch (xi) {
        case 0: return kron(mz, kron(my, t));
        case 1: return kron(mz, kron(t, mx));
        default: return kron(t, kron(my, mx));
      }
    };
    em.F_self[2 * xi] = assemble(t_lo);
    em.F_self[2 * xi + 1] = assemble(t_hi);
    em.F_neigh[2 * xi] = assemble(c_lo);
    em.F_neigh[2 * xi + 1] = assemble(c_hi);
  }
  return em;
}

std::vector<int> sweep_order(const HexMesh& mesh, int octant) {
  if (octant < 0 || octant > 7) throw std::invalid_argument("sweep_order: bad octant");
  auto axis_range = [&](int n, bool reversed) {
    std::vector<int> r(n);
    for (int i = 0; i < n; ++i) r[i] = reversed ? n - 1 - i : i;
    return r;
  };
  const auto xs = axis_range(mesh.nx, octant & 1);
  const auto ys = axis_range(mesh.ny, octant & 2);
  const auto zs = axis_range(mesh.nz, octant & 4);
  std::vector<int> order;
  order.reserve(mesh.n_el);
  for (int iz : zs)
    for (int iy : ys)
      for (int ix : xs) order.push_back(mesh.index(ix, iy, iz));
  return order;
}

}  // namespace stamg
