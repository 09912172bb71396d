#include "stamg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace stamg {

namespace {

// Legendre roots on [-1,1] by Newton iteration, then mapped to [0,1].
Gauss1D compute_gauss(int n) {
  Gauss1D g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    g.x[i] = 0.5 * (1.0 - t);  // descending t -> ascending x
    g.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return g;
}

}  // namespace

const Gauss1D& gauss_legendre_01(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre_01: bad order");
  static std::map<int, Gauss1D> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

QuadratureRule patch_quadrature(const Patch& patch, int order) {
  if (order < 1 || order > 64)
    throw std::invalid_argument("patch_quadrature: unsupported order");
  const int n = order;
  const Gauss1D& g = gauss_legendre_01(n);

  const double inv = 1.0 / static_cast<double>(kFlatScale);
  Vec3 a = patch.flat[0].cast<double>() * inv;
  Vec3 b = patch.flat[1].cast<double>() * inv;
  Vec3 c = patch.flat[2].cast<double>() * inv;
  const Vec3 cr = (b - a).cross(c - a);
  const double two_area = cr.norm();
  const Vec3 nrm = cr / two_area;        // outward by construction
  const double h = a.dot(nrm);           // plane distance from origin

  QuadratureRule rule;
  rule.nodes.resize(3, n * n);
  rule.bary.resize(3, n * n);
  rule.weights.resize(n * n);
  int idx = 0;
  for (int iu = 0; iu < n; ++iu) {
    const double u = g.x[iu];
    for (int iv = 0; iv < n; ++iv, ++idx) {
      const double v = g.x[iv];
      const Vec3 x = (1.0 - u) * a + u * ((1.0 - v) * b + v * c);
      const double r = x.norm();
      const double wf = g.w[iu] * g.w[iv] * u * two_area;  // flat area weight
      rule.nodes.col(idx) = x / r;
      rule.bary.col(idx) = Vec3(1.0 - u, u * (1.0 - v), u * v);
      rule.weights[idx] = wf * h / (r * r * r);
    }
  }
  return rule;
}

}  // namespace stamg
