#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace jcas {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Real inner product Re tr(a^H b) of the complexes viewed as a real vector
// space. Gradients in this codebase are scaled so that
// f(x + t d) = f(x) + t * real_inner(grad, d) + O(t^2).
template <typename A, typename B>
double real_inner(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.conjugate().cwiseProduct(b.derived()).real().sum();
}

}  // namespace jcas
