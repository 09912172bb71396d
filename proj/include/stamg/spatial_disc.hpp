#pragma once
// Structured hexahedral DG discretization: uniform grids, tensor-product
// element matrices (p = 0 or trilinear p = 1), and octant sweep orderings.

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace stamg {

struct HexMesh {
  int nx = 0, ny = 0, nz = 0;
  double box = 0;            // cube edge length (cm)
  double hx = 0, hy = 0, hz = 0;
  int n_el = 0;

  int index(int ix, int iy, int iz) const { return (iz * ny + iy) * nx + ix; }
  std::array<int, 3> coords(int el) const {
    return {el % nx, (el / nx) % ny, el / (nx * ny)};
  }
  // face f in 0..5: axis f/2, direction (f%2 ? +1 : -1); -1 at the boundary
  int neighbor(int el, int f) const;
  double volume() const { return hx * hy * hz; }
};

HexMesh build_hex_mesh(int nx, int ny, int nz, double box);

struct ElementMatrices {
  int S = 0;                              // dofs per element
  Eigen::MatrixXd N;                      // mass (cm^3)
  std::array<Eigen::MatrixXd, 3> V;       // gradient matrices (cm^2)
  std::array<Eigen::MatrixXd, 6> F_self;  // face mass, own trace (cm^2)
  std::array<Eigen::MatrixXd, 6> F_neigh; // face mass vs neighbor trace (cm^2)
};

// p = 0 (constant) or p = 1 (trilinear, dof i = ix + 2*iy + 4*iz)
ElementMatrices element_matrices(const HexMesh& mesh, int p);

// Upwind topological order for the octant's sign pattern (lexicographic with
// per-axis direction). octant bits: 0 means increasing coordinate.
std::vector<int> sweep_order(const HexMesh& mesh, int octant);

}  // namespace stamg
