#pragma once
// Block layout of flux coefficient vectors.
//
// index(el, q, d, i) = ((el*P + q)*D + d)*S + i, so the (el, q) block is a
// D x S row-major chunk and a whole element is a (P*D) x S row-major matrix.
// That makes the scatter moment contraction a single GEMM per element.

#include <cstddef>

#include <Eigen/Dense>

namespace stamg {

using FluxVector = Eigen::VectorXd;

struct Layout {
  int n_el = 0;
  int n_patch = 0;
  int S = 1;  // spatial dofs per element
  int D = 1;  // angular dofs per patch

  std::ptrdiff_t size() const {
    return static_cast<std::ptrdiff_t>(n_el) * n_patch * S * D;
  }
  std::ptrdiff_t block(int el, int q) const {
    return (static_cast<std::ptrdiff_t>(el) * n_patch + q) * D * S;
  }
  std::ptrdiff_t element(int el) const {
    return static_cast<std::ptrdiff_t>(el) * n_patch * D * S;
  }
  bool operator==(const Layout&) const = default;
};

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRow = Eigen::Map<RowMat>;
using MapConstRow = Eigen::Map<const RowMat>;

}  // namespace stamg
