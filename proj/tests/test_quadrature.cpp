#include "doctest.h"

#include <cmath>
#include <numbers>

#include "stamg/quadrature.hpp"
#include "stamg/sphere_mesh.hpp"
#include "support/oracles.hpp"

using namespace stamg;
namespace st = stamg::testing;

namespace {
double integrate(const QuadratureRule& rule,
                 const std::function<double(const Vec3&)>& f) {
  double s = 0;
  for (int g = 0; g < rule.size(); ++g) s += rule.weights[g] * f(rule.nodes.col(g));
  return s;
}
}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss rule integrates polynomials exactly") {
  for (int n : {2, 5, 12}) {
    const Gauss1D& g = gauss_legendre_01(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS(gauss_legendre_01(0));
}

TEST_CASE("patch rule integrates octant basics") {
  AngularMesh m = build_base_mesh();
  // the level-0 octant is the hardest patch; order 8 sits near 3e-6 there
  // while the level-aware default (20) reaches rounding
  QuadratureRule coarse = patch_quadrature(m.patch(0), 8);
  CHECK(coarse.weights.minCoeff() > 0);
  CHECK(std::abs(coarse.weights.sum() - std::numbers::pi / 2) < 1e-5);

  QuadratureRule rule = patch_quadrature(m.patch(0), default_patch_order(0));
  CHECK(rule.weights.minCoeff() > 0);
  CHECK(std::abs(rule.weights.sum() - std::numbers::pi / 2) < 1e-12);
  CHECK(std::abs(integrate(rule, [](const Vec3&) { return 1.0; }) -
                 std::numbers::pi / 2) < 1e-12);
  // analytic: int_octant Omega_z = pi/4, int_octant Omega_x Omega_y = 1/3
  const double iz = integrate(rule, [](const Vec3& o) { return o.z(); });
  CHECK(std::abs(iz - std::numbers::pi / 4) < 1e-12);
  const double ixy = integrate(rule, [](const Vec3& o) { return o.x() * o.y(); });
  CHECK(std::abs(ixy - 1.0 / 3.0) < 1e-12);
  CHECK_THROWS(patch_quadrature(m.patch(0), 0));
}

TEST_CASE("patch rule agrees with the Monte Carlo oracle") {
  AngularMesh m = build_base_mesh();
  const Patch& p = m.patch(0);
  QuadratureRule rule = patch_quadrature(p, 8);
  auto in_octant = [](const Vec3& o) {
    return o.x() >= 0 && o.y() >= 0 && o.z() >= 0;
  };
  auto est = st::mc_sphere_integral(
      [&](const Vec3& o) { return in_octant(o) ? o.z() : 0.0; }, 1000000, 42);
  const double iz = integrate(rule, [](const Vec3& o) { return o.z(); });
  CHECK(std::abs(iz - est.mean) < 3 * est.std_err);
}

TEST_CASE("weights sum to patch area on refined patches") {
  AngularMesh m = build_uniform_mesh(2);
  double total = 0;
  for (int id : m.leaves) {
    QuadratureRule rule = patch_quadrature(m.patch(id), 8);
    CHECK(std::abs(rule.weights.sum() - patch_area(m.patch(id))) < 1e-11);
    total += rule.weights.sum();
  }
  CHECK(std::abs(total - 4 * std::numbers::pi) < 1e-9);
}

TEST_CASE("integral invariant under node relabeling") {
  AngularMesh m = build_base_mesh();
  QuadratureRule rule = patch_quadrature(m.patch(0), 8);
  double fwd = 0, rev = 0;
  for (int g = 0; g < rule.size(); ++g)
    fwd += rule.weights[g] * rule.nodes(2, g);
  for (int g = rule.size() - 1; g >= 0; --g)
    rev += rule.weights[g] * rule.nodes(2, g);
  CHECK(std::abs(fwd - rev) < 1e-13);
}

}  // TEST_SUITE
