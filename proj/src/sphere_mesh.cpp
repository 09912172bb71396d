#include "stamg/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace stamg {

namespace {

Vec3 to_unit(const IVec3& f) {
  Vec3 v(static_cast<double>(f[0]), static_cast<double>(f[1]),
         static_cast<double>(f[2]));
  return v.normalized();
}

Patch make_patch(int id, int level, int octant, int parent,
                 const IVec3& a, const IVec3& b, const IVec3& c) {
  Patch p;
  p.id = id;
  p.level = level;
  p.octant = octant;
  p.parent = parent;
  p.flat = {a, b, c};
  p.vert = {to_unit(a), to_unit(b), to_unit(c)};
  return p;
}

void rebuild_leaf_list(AngularMesh& mesh) {
  mesh.leaves.clear();
  mesh.max_level = 0;
  for (const Patch& p : mesh.all) {
    if (p.leaf) {
      mesh.leaves.push_back(p.id);
      mesh.max_level = std::max(mesh.max_level, p.level);
    }
  }
}

// Split without the two-irregularity repair; callers restore it afterwards.
void split_patch(AngularMesh& mesh, int id) {
  Patch& p = mesh.all[id];
  if (!p.leaf) throw std::invalid_argument("refine: patch is not a leaf");
  const IVec3 a = p.flat[0], b = p.flat[1], c = p.flat[2];
  const IVec3 mab = (a + b) / 2, mbc = (b + c) / 2, mca = (c + a) / 2;
  const int base = static_cast<int>(mesh.all.size());
  const int lvl = p.level + 1, oct = p.octant;
  p.leaf = false;
  p.kids = {base, base + 1, base + 2, base + 3};
  mesh.all.push_back(make_patch(base + 0, lvl, oct, id, a, mab, mca));
  mesh.all.push_back(make_patch(base + 1, lvl, oct, id, mab, b, mbc));
  mesh.all.push_back(make_patch(base + 2, lvl, oct, id, mca, mbc, c));
  mesh.all.push_back(make_patch(base + 3, lvl, oct, id, mab, mbc, mca));
  mesh.max_level = std::max(mesh.max_level, lvl);
}

struct SegKey {
  std::array<std::int64_t, 6> v;
  bool operator==(const SegKey&) const = default;
};

struct SegKeyHash {
  std::size_t operator()(const SegKey& k) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::int64_t x : k.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

SegKey make_seg_key(const IVec3& u, const IVec3& v) {
  std::array<std::int64_t, 3> a{u[0], u[1], u[2]}, b{v[0], v[1], v[2]};
  if (b < a) std::swap(a, b);
  return SegKey{{a[0], a[1], a[2], b[0], b[1], b[2]}};
}

// Map from atomic edge segment (at the current max level) to bordering leaves.
std::unordered_map<SegKey, std::array<int, 2>, SegKeyHash>
segment_table(const AngularMesh& mesh) {
  std::unordered_map<SegKey, std::array<int, 2>, SegKeyHash> table;
  table.reserve(mesh.leaves.size() * 6);
  for (int id : mesh.leaves) {
    const Patch& p = mesh.all[id];
    const std::int64_t k = std::int64_t(1) << (mesh.max_level - p.level);
    for (int e = 0; e < 3; ++e) {
      const IVec3 u = p.flat[e], v = p.flat[(e + 1) % 3];
      const IVec3 step = (v - u) / k;
      for (std::int64_t t = 0; t < k; ++t) {
        const IVec3 s0 = u + step * t;
        auto [it, fresh] = table.try_emplace(make_seg_key(s0, s0 + step),
                                             std::array<int, 2>{id, -1});
        if (!fresh) it->second[1] = id;
      }
    }
  }
  return table;
}

void enforce_two_irregularity(AngularMesh& mesh) {
  for (bool changed = true; changed;) {
    changed = false;
    rebuild_leaf_list(mesh);
    auto table = segment_table(mesh);
    for (const auto& [key, pair] : table) {
      if (pair[1] < 0) continue;
      const Patch& x = mesh.all[pair[0]];
      const Patch& y = mesh.all[pair[1]];
      if (std::abs(x.level - y.level) > 2) {
        split_patch(mesh, x.level < y.level ? x.id : y.id);
        changed = true;
        break;  // the table is stale now
      }
    }
  }
  rebuild_leaf_list(mesh);
}

int banded_target(const Patch& p, int l_max) {
  double z = std::max({p.vert[0].z(), p.vert[1].z(), p.vert[2].z()});
  int t;
  if (z > 0.9875) t = l_max;
  else if (z > 0.9) t = l_max - 1;
  else if (z > 0.8) t = l_max - 2;
  else if (z > 0.6) t = l_max - 3;
  else t = l_max - 4;
  return std::max(t, 0);
}

}  // namespace

int AngularMesh::leaf_pos(int id) const {
  auto it = std::lower_bound(leaves.begin(), leaves.end(), id);
  if (it == leaves.end() || *it != id) return -1;
  return static_cast<int>(it - leaves.begin());
}

AngularMesh build_base_mesh() {
  AngularMesh mesh;
  for (int oct = 0; oct < 8; ++oct) {
    const std::int64_t sx = (oct & 1) ? -1 : 1;
    const std::int64_t sy = (oct & 2) ? -1 : 1;
    const std::int64_t sz = (oct & 4) ? -1 : 1;
    IVec3 a(sx * kFlatScale, 0, 0), b(0, sy * kFlatScale, 0), c(0, 0, sz * kFlatScale);
    if (sx * sy * sz < 0) std::swap(b, c);  // keep outward orientation
    mesh.all.push_back(make_patch(oct, 0, oct, -1, a, b, c));
  }
  rebuild_leaf_list(mesh);
  return mesh;
}

void refine(AngularMesh& mesh, int patch_id) {
  if (patch_id < 0 || patch_id >= static_cast<int>(mesh.all.size()))
    throw std::invalid_argument("refine: unknown patch id");
  split_patch(mesh, patch_id);
  enforce_two_irregularity(mesh);
}

AngularMesh build_uniform_mesh(int level) {
  if (level < 0) throw std::invalid_argument("build_uniform_mesh: level < 0");
  AngularMesh mesh = build_base_mesh();
  for (int l = 0; l < level; ++l) {
    std::vector<int> current = mesh.leaves;
    for (int id : current) split_patch(mesh, id);
    rebuild_leaf_list(mesh);
  }
  return mesh;
}

AngularMesh build_banded_mesh(int l_max) {
  if (l_max < 1) throw std::invalid_argument("build_banded_mesh: l_max < 1");
  AngularMesh mesh = build_base_mesh();
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> current = mesh.leaves;
    for (int id : current) {
      if (mesh.all[id].level < banded_target(mesh.all[id], l_max)) {
        split_patch(mesh, id);
        changed = true;
      }
    }
    rebuild_leaf_list(mesh);
  }
  enforce_two_irregularity(mesh);
  return mesh;
}

AngularMesh coarsen_to_level(const AngularMesh& mesh, int level) {
  if (level < 0) throw std::invalid_argument("coarsen_to_level: level < 0");
  AngularMesh out = mesh;
  if (level >= mesh.max_level) return out;
  for (Patch& p : out.all) p.leaf = false;
  for (int id : mesh.leaves) {
    int a = id;
    while (out.all[a].level > level) a = out.all[a].parent;
    out.all[a].leaf = true;
  }
  rebuild_leaf_list(out);
  return out;
}

double patch_area(const Patch& p) {
  const Vec3 &a = p.vert[0], &b = p.vert[1], &c = p.vert[2];
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

double total_area(const AngularMesh& mesh) {
  double s = 0.0;
  for (int id : mesh.leaves) s += patch_area(mesh.all[id]);
  return s;
}

std::vector<std::vector<int>> leaf_neighbors(const AngularMesh& mesh) {
  std::vector<std::vector<int>> nbr(mesh.leaves.size());
  for (const auto& [key, pair] : segment_table(mesh)) {
    if (pair[1] < 0) continue;
    nbr[mesh.leaf_pos(pair[0])].push_back(pair[1]);
    nbr[mesh.leaf_pos(pair[1])].push_back(pair[0]);
  }
  for (auto& v : nbr) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return nbr;
}

bool two_irregular(const AngularMesh& mesh) {
  auto nbr = leaf_neighbors(mesh);
  for (std::size_t i = 0; i < nbr.size(); ++i) {
    const int li = mesh.all[mesh.leaves[i]].level;
    for (int id : nbr[i])
      if (std::abs(li - mesh.all[id].level) > 2) return false;
  }
  return true;
}

void dump_mesh(const AngularMesh& mesh, std::ostream& os) {
  char buf[512];
  for (int id : mesh.leaves) {
    const Patch& p = mesh.all[id];
    std::snprintf(buf, sizeof buf,
                  "%d %d %d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  p.id, p.level, p.octant,
                  p.vert[0].x(), p.vert[0].y(), p.vert[0].z(),
                  p.vert[1].x(), p.vert[1].y(), p.vert[1].z(),
                  p.vert[2].x(), p.vert[2].y(), p.vert[2].z());
    os << buf;
  }
}

}  // namespace stamg
