#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "stamg/sphere_mesh.hpp"

using namespace stamg;

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_mesh_invariants(const AngularMesh& m) {
  CHECK(std::abs(total_area(m) - kFourPi) < 1e-10);
  CHECK(two_irregular(m));
  for (int id : m.leaves) {
    const Patch& p = m.patch(id);
    std::int64_t l1 = std::abs(p.flat[0][0]) + std::abs(p.flat[0][1]) + std::abs(p.flat[0][2]);
    CHECK(l1 == kFlatScale);
    for (int v = 0; v < 3; ++v) CHECK(std::abs(p.vert[v].norm() - 1.0) < 1e-14);
    if (p.parent >= 0) CHECK(m.patch(p.parent).level == p.level - 1);
  }
}
}  // namespace

TEST_SUITE("sphere_mesh") {

TEST_CASE("base mesh is the 8 cardinal octants") {
  AngularMesh m = build_base_mesh();
  CHECK(m.n_leaves() == 8);
  CHECK(total_area(m) == doctest::Approx(kFourPi).epsilon(1e-12));
  for (int id : m.leaves)
    CHECK(patch_area(m.patch(id)) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  const Patch& ppp = m.patch(0);  // octant (+,+,+)
  CHECK(ppp.octant == 0);
  CHECK((ppp.vert[0] - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK((ppp.vert[1] - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK((ppp.vert[2] - Vec3(0, 0, 1)).norm() < 1e-15);
  check_mesh_invariants(m);
  auto nbr = leaf_neighbors(m);
  for (const auto& v : nbr) CHECK(v.size() == 3);
}

TEST_CASE("refine replaces a leaf by four daughters") {
  AngularMesh m = build_base_mesh();
  refine(m, 0);
  CHECK(m.n_leaves() == 11);
  const Patch& p = m.patch(0);
  CHECK_FALSE(p.leaf);
  double kid_area = 0;
  for (int k : p.kids) {
    CHECK(m.patch(k).level == 1);
    CHECK(m.patch(k).parent == 0);
    kid_area += patch_area(m.patch(k));
  }
  CHECK(kid_area == doctest::Approx(patch_area(p)).epsilon(1e-12));
  check_mesh_invariants(m);
}

TEST_CASE("refine errors") {
  AngularMesh m = build_base_mesh();
  CHECK_THROWS_AS(refine(m, -1), std::invalid_argument);
  CHECK_THROWS_AS(refine(m, 99), std::invalid_argument);
  refine(m, 3);
  CHECK_THROWS_AS(refine(m, 3), std::invalid_argument);  // no longer a leaf
}

TEST_CASE("deep local refinement propagates to keep two-irregularity") {
  AngularMesh m = build_base_mesh();
  refine(m, 0);
  refine(m, m.patch(0).kids[0]);
  int gk = m.patch(m.patch(0).kids[0]).kids[0];
  refine(m, gk);  // a level-3 leaf appears next to former level-0 octants
  CHECK(m.max_level == 3);
  CHECK(two_irregular(m));
  auto nbr = leaf_neighbors(m);
  for (int id : m.patch(gk).kids) {
    int pos = m.leaf_pos(id);
    REQUIRE(pos >= 0);
    for (int n : nbr[pos]) CHECK(m.patch(n).level >= 1);
  }
  check_mesh_invariants(m);
}

TEST_CASE("uniform meshes") {
  CHECK(build_uniform_mesh(0).n_leaves() == 8);
  AngularMesh m1 = build_uniform_mesh(1);
  CHECK(m1.n_leaves() == 32);
  AngularMesh m2 = build_uniform_mesh(2);
  CHECK(m2.n_leaves() == 128);
  CHECK(total_area(m2) == doctest::Approx(kFourPi).epsilon(1e-11));
  AngularMesh m3 = build_uniform_mesh(3);
  CHECK(m3.n_leaves() == 512);
  check_mesh_invariants(m3);
  auto nbr = leaf_neighbors(m2);
  for (const auto& v : nbr) CHECK(v.size() == 3);
}

TEST_CASE("banded meshes match the published leaf counts") {
  const int expected[] = {20, 32, 44, 128, 440, 1388};
  for (int lmax = 1; lmax <= 6; ++lmax) {
    AngularMesh m = build_banded_mesh(lmax);
    CHECK(m.n_leaves() == expected[lmax - 1]);
    CHECK(m.max_level == lmax);
    check_mesh_invariants(m);
  }
  CHECK_THROWS_AS(build_banded_mesh(0), std::invalid_argument);
}

TEST_CASE("coarsen_to_level caps levels and preserves nestedness") {
  AngularMesh m3 = build_uniform_mesh(3);
  AngularMesh m2 = coarsen_to_level(m3, 2);
  CHECK(m2.n_leaves() == 128);
  for (int id : m2.leaves) CHECK(m2.patch(id).level == 2);
  CHECK(coarsen_to_level(m3, 0).n_leaves() == 8);
  CHECK_THROWS_AS(coarsen_to_level(m3, -1), std::invalid_argument);

  AngularMesh b4 = build_banded_mesh(4);
  AngularMesh b3 = coarsen_to_level(b4, 3);
  CHECK(two_irregular(b3));
  CHECK(total_area(b3) == doctest::Approx(kFourPi).epsilon(1e-11));
  // every input leaf has an ancestor-or-self among the output leaves
  for (int id : b4.leaves) {
    int a = id;
    while (a >= 0 && !b3.patch(a).leaf) a = b3.patch(a).parent;
    CHECK(a >= 0);
  }
  // nestedness between consecutive coarsenings
  AngularMesh b2 = coarsen_to_level(b4, 2);
  for (int id : b3.leaves) {
    int a = id;
    while (a >= 0 && !b2.patch(a).leaf) a = b2.patch(a).parent;
    CHECK(a >= 0);
  }
}

TEST_CASE("mesh dump format") {
  AngularMesh m = build_uniform_mesh(1);
  std::ostringstream os;
  dump_mesh(m, os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    int id, level, octant;
    REQUIRE(static_cast<bool>(ls >> id >> level >> octant));
    double x;
    int coords = 0;
    while (ls >> x) ++coords;
    CHECK(coords == 9);
    if (lines == 0) {
      const Patch& p = m.patch(m.leaves[0]);
      CHECK(id == p.id);
      CHECK(level == p.level);
      CHECK(octant == p.octant);
    }
    ++lines;
  }
  CHECK(lines == m.n_leaves());
}

}  // TEST_SUITE
