#pragma once
// Hierarchical spherical-triangle mesh on the unit sphere.
//
// The base mesh is the 8 cardinal octants. Refinement halves the edges of the
// flat octahedron triangle (exact in an integer lattice) and projects the
// midpoints to the sphere, so the Lin nodal spaces are nested across levels.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace stamg {

using Vec3 = Eigen::Vector3d;
using IVec3 = Eigen::Matrix<std::int64_t, 3, 1>;

// Flat octahedron coordinates live on |x|+|y|+|z| = kFlatScale.
inline constexpr std::int64_t kFlatScale = std::int64_t(1) << 20;

struct Patch {
  int id = -1;
  int level = 0;
  int octant = 0;       // bit0: x<0, bit1: y<0, bit2: z<0
  int parent = -1;
  std::array<int, 4> kids{-1, -1, -1, -1};
  bool leaf = true;
  std::array<IVec3, 3> flat;  // vertices on the octahedron face (lattice)
  std::array<Vec3, 3> vert;   // unit-sphere vertices (normalized flat)
};

struct AngularMesh {
  std::vector<Patch> all;    // full tree; may contain inactive subtrees
  std::vector<int> leaves;   // active leaf patch ids, ascending
  int max_level = 0;

  const Patch& patch(int id) const { return all[id]; }
  int n_leaves() const { return static_cast<int>(leaves.size()); }
  // position of patch id in `leaves`, -1 if not a leaf
  int leaf_pos(int id) const;
};

AngularMesh build_base_mesh();
// Splits leaf `patch_id` into 4 daughters and restores two-irregularity.
void refine(AngularMesh& mesh, int patch_id);
AngularMesh build_uniform_mesh(int level);
// Polar-banded refinement driven by the max vertex Omega_z of each leaf.
AngularMesh build_banded_mesh(int l_max);
// Every leaf deeper than `level` is replaced by its ancestor at that level.
// Patch ids are preserved, so results of successive coarsenings are nested.
AngularMesh coarsen_to_level(const AngularMesh& mesh, int level);

double patch_area(const Patch& p);
double total_area(const AngularMesh& mesh);

// Edge-adjacent leaves per leaf position; entries are patch ids, sorted.
std::vector<std::vector<int>> leaf_neighbors(const AngularMesh& mesh);
bool two_irregular(const AngularMesh& mesh);

// One leaf per line: id level octant v0x v0y v0z v1x v1y v1z v2x v2y v2z
void dump_mesh(const AngularMesh& mesh, std::ostream& os);

}  // namespace stamg
