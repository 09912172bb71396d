#pragma once

#include <Eigen/Dense>

namespace stamg {

// K[(ia*Br + ib), (ja*Bc + jb)] = A(ia, ja) * B(ib, jb)
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

}  // namespace stamg
