#include "stamg/scatter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stamg {

ScatterKernel fp_equivalent_moments(int N, double alpha, double sigma_a) {
  if (N < 1) throw std::invalid_argument("fp_equivalent_moments: N < 1");
  if (alpha <= 0) throw std::invalid_argument("fp_equivalent_moments: alpha <= 0");
  ScatterKernel k;
  k.N = N;
  k.alpha = alpha;
  k.sigma_a = sigma_a;
  k.moments.resize(N + 1);
  for (int n = 0; n <= N; ++n)
    k.moments[n] = 0.5 * alpha * (double(N) * (N + 1) - double(n) * (n + 1));
  k.sigma_t = sigma_a + k.moments[0];
  return k;
}

ScatterKernel absorber_kernel(double sigma_a) {
  ScatterKernel k;
  k.N = 0;
  k.alpha = 0;
  k.sigma_a = sigma_a;
  k.sigma_t = sigma_a;
  k.moments = Eigen::VectorXd::Zero(1);
  return k;
}

void eval_real_harmonics(int N, const Vec3& omega, Eigen::VectorXd& out) {
  const int H = harmonic_count(N);
  out.resize(H);
  const double z = omega.z();
  const double rxy = std::hypot(omega.x(), omega.y());
  const double phi = std::atan2(omega.y(), omega.x());
  const double inv_sqrt4pi = 1.0 / std::sqrt(4.0 * std::numbers::pi);

  // fully normalized associated Legendre recurrence along each order m
  double pmm = inv_sqrt4pi;
  for (int m = 0; m <= N; ++m) {
    const double cm = m == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(m * phi);
    const double sm = m == 0 ? 0.0 : std::numbers::sqrt2 * std::sin(m * phi);
    double p_prev = 0.0;  // P~_{n-1}^m
    double p = pmm;       // P~_n^m starting at n = m
    for (int n = m; n <= N; ++n) {
      const double base = n * n + n;
      out[base + m] = cm * p;
      if (m > 0) out[base - m] = sm * p;
      // advance to n+1
      if (n < N) {
        const double nn = n + 1;
        const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - double(m) * m));
        const double b = std::sqrt(((nn - 1) * (nn - 1) - double(m) * m) /
                                   (4.0 * (nn - 1) * (nn - 1) - 1.0));
        const double p_next = a * (z * p - b * p_prev);
        p_prev = p;
        p = p_next;
      }
    }
    if (m < N) pmm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * rxy;
  }
}

double real_sph_harmonic(int n, int o, const Vec3& omega) {
  if (std::abs(o) > n) throw std::invalid_argument("real_sph_harmonic: |o| > n");
  Eigen::VectorXd all;
  eval_real_harmonics(n, omega, all);
  return all[n * n + n + o];
}

HarmonicCouplings build_couplings(const AngularMesh& mesh, BasisKind kind,
                                  int N, int order) {
  HarmonicCouplings coup;
  coup.N = N;
  coup.kind = kind;
  coup.D = dofs_per_patch(kind);
  const int H = harmonic_count(N);
  coup.X = Eigen::MatrixXd::Zero(std::ptrdiff_t(mesh.n_leaves()) * coup.D, H);
  Eigen::VectorXd Y(H), psi(coup.D);
  for (int lp = 0; lp < mesh.n_leaves(); ++lp) {
    const Patch& patch = mesh.patch(mesh.leaves[lp]);
    const int ord =
        order > 0 ? order : default_patch_order(patch.level, default_quad_order(N));
    const QuadratureRule rule = patch_quadrature(patch, ord);
    auto Xq = coup.X.middleRows(std::ptrdiff_t(lp) * coup.D, coup.D);
    for (int g = 0; g < rule.size(); ++g) {
      eval_real_harmonics(N, rule.nodes.col(g), Y);
      if (kind == BasisKind::Const)
        psi[0] = 1.0;
      else
        psi = rule.bary.col(g);
      Xq.noalias() += rule.weights[g] * (psi * Y.transpose());
    }
  }
  return coup;
}

Eigen::VectorXd sigma_by_harmonic(const ScatterKernel& kernel, int max_order) {
  if (max_order > kernel.N)
    throw std::invalid_argument("sigma_by_harmonic: max_order exceeds kernel order");
  Eigen::VectorXd s = Eigen::VectorXd::Zero(harmonic_count(std::max(max_order, 0)));
  for (int n = 0; n <= max_order; ++n)
    for (int o = -n; o <= n; ++o) s[n * n + n + o] = kernel.moments[n];
  return s;
}

void apply_scatter_into(const ScatterKernel& kernel,
                        const HarmonicCouplings& coup,
                        const Eigen::MatrixXd& Nmat, const Layout& layout,
                        const FluxVector& phi, int max_order, double scale,
                        FluxVector& y) {
  if (phi.size() != layout.size() || y.size() != layout.size())
    throw std::invalid_argument("apply_scatter: layout mismatch");
  const Eigen::VectorXd sig = sigma_by_harmonic(kernel, max_order);
  const int Hr = static_cast<int>(sig.size());
  const int PD = layout.n_patch * layout.D;
  const int S = layout.S;
  const auto Xr = coup.X.leftCols(Hr);

#pragma omp parallel
  {
    Eigen::MatrixXd mom(Hr, S), src(Hr, S);
#pragma omp for schedule(static)
    for (int el = 0; el < layout.n_el; ++el) {
      MapConstRow Phi(phi.data() + layout.element(el), PD, S);
      MapRow Yel(y.data() + layout.element(el), PD, S);
      mom.noalias() = Xr.transpose() * Phi;
      src.noalias() = (sig.asDiagonal() * mom) * Nmat;
      Yel.noalias() += scale * (Xr * src);
    }
  }
}

FluxVector apply_scatter(const ScatterKernel& kernel,
                         const HarmonicCouplings& coup,
                         const Eigen::MatrixXd& Nmat, const Layout& layout,
                         const FluxVector& phi, int max_order) {
  FluxVector q = FluxVector::Zero(layout.size());
  apply_scatter_into(kernel, coup, Nmat, layout, phi, max_order, 1.0, q);
  return q;
}

}  // namespace stamg
