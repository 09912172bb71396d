#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace stamg::testing {

McEstimate mc_sphere_integral(const std::function<double(const Vec3&)>& f,
                              std::size_t n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double z = 2.0 * uni(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uni(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double v = f(Vec3(r * std::cos(phi), r * std::sin(phi), z));
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  const double area = 4.0 * std::numbers::pi;
  return {area * mean, area * std::sqrt(var / n)};
}

Eigen::MatrixXd dense_transport_matrix(const ProblemOperators& ops) {
  const Layout& lo = ops.layout;
  const int S = lo.S, D = lo.D;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(lo.size(), lo.size());
  for (int el = 0; el < lo.n_el; ++el) {
    for (int q = 0; q < lo.n_patch; ++q) {
      const Patch& patch = ops.angular.patch(ops.angular.leaves[q]);
      const PatchOperators& po = ops.pops[q];
      const auto row0 = lo.block(el, q);
      for (int m = 0; m < D; ++m)
        for (int d = 0; d < D; ++d)
          for (int l = 0; l < S; ++l)
            for (int i = 0; i < S; ++i) {
              double v = ops.kernel.sigma_t * po.M(m, d) * ops.em.N(l, i);
              for (int xi = 0; xi < 3; ++xi)
                v -= po.A[xi](m, d) * ops.em.V[xi](l, i);
              L(row0 + m * S + l, row0 + d * S + i) += v;
            }
      for (int f = 0; f < 6; ++f) {
        Vec3 normal = Vec3::Zero();
        normal[f / 2] = (f % 2) ? 1.0 : -1.0;
        const auto [a_out, a_in] = face_split(ops.kind, patch, normal);
        for (int m = 0; m < D; ++m)
          for (int d = 0; d < D; ++d)
            for (int l = 0; l < S; ++l)
              for (int i = 0; i < S; ++i)
                L(row0 + m * S + l, row0 + d * S + i) +=
                    a_out(m, d) * ops.em.F_self[f](l, i);
        const int nb = ops.mesh.neighbor(el, f);
        if (nb < 0) continue;  // vacuum: no incoming content
        const auto col0 = lo.block(nb, q);
        for (int m = 0; m < D; ++m)
          for (int d = 0; d < D; ++d)
            for (int l = 0; l < S; ++l)
              for (int i = 0; i < S; ++i)
                L(row0 + m * S + l, col0 + d * S + i) +=
                    a_in(m, d) * ops.em.F_neigh[f](l, i);
      }
    }
  }
  return L;
}

Eigen::MatrixXd dense_scatter_matrix(const ProblemOperators& ops, int max_order) {
  const Layout& lo = ops.layout;
  const int S = lo.S, D = lo.D;
  const Eigen::VectorXd sig = sigma_by_harmonic(ops.kernel, max_order);
  Eigen::MatrixXd Sm = Eigen::MatrixXd::Zero(lo.size(), lo.size());
  for (int el = 0; el < lo.n_el; ++el)
    for (int q = 0; q < lo.n_patch; ++q)
      for (int p = 0; p < lo.n_patch; ++p)
        for (int m = 0; m < D; ++m)
          for (int d = 0; d < D; ++d) {
            double ang = 0;
            for (int h = 0; h < sig.size(); ++h)
              ang += sig[h] * ops.coup.X(q * D + m, h) * ops.coup.X(p * D + d, h);
            for (int l = 0; l < S; ++l)
              for (int i = 0; i < S; ++i)
                Sm(lo.block(el, q) + m * S + l, lo.block(el, p) + d * S + i) +=
                    ang * ops.em.N(l, i);
          }
  return Sm;
}

}  // namespace stamg::testing
