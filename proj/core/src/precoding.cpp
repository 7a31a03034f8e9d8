#include "jcas/precoding.hpp"

#include <cmath>
#include <stdexcept>

#include "jcas/channel.hpp"

namespace jcas {

namespace {
constexpr double kModulusTol = 1e-9;
}

RisPhases::RisPhases(CVec v) : v_(std::move(v)) {
  if (v_.size() == 0) throw std::invalid_argument("RIS phase vector is empty");
  for (Eigen::Index r = 0; r < v_.size(); ++r) {
    if (std::abs(std::abs(v_(r)) - 1.0) > kModulusTol) {
      throw std::invalid_argument("RIS phase entries must have unit modulus");
    }
  }
}

CMat RisPhases::theta() const {
  return v_.conjugate().asDiagonal().toDenseMatrix();
}

CMat RisPhases::theta_hat(int n_sc) const {
  const int r = size();
  CMat out = CMat::Zero(static_cast<Eigen::Index>(n_sc) * r, static_cast<Eigen::Index>(n_sc) * r);
  for (int n = 0; n < n_sc; ++n) {
    out.block(n * r, n * r, r, r) = v_.conjugate().asDiagonal();
  }
  return out;
}

RisPhases RisPhases::from_angles(const RVec& theta_rad) {
  CVec v(theta_rad.size());
  // v_r = exp(-j theta_r) so that Theta = diag(conj(v)) carries exp(+j theta_r).
  for (Eigen::Index r = 0; r < theta_rad.size(); ++r) {
    v(r) = std::polar(1.0, -theta_rad(r));
  }
  return RisPhases(std::move(v));
}

void HybridBeamformer::validate() const {
  if (rf.size() == 0 || bb.empty()) throw std::invalid_argument("beamformer is empty");
  if ((rf.cwiseAbs().array() - 1.0).abs().maxCoeff() > kModulusTol) {
    throw std::invalid_argument("RF precoder entries must have unit modulus");
  }
  for (const CMat& b : bb) {
    if (b.rows() != rf.cols() || b.cols() != bb.front().cols()) {
      throw std::invalid_argument("baseband precoder shapes inconsistent");
    }
  }
}

CMat rf_dft_factor(const CMat& rf, const CMat& dft) {
  const int n_sc = static_cast<int>(dft.rows());
  const Eigen::Index n_tx = rf.rows();
  const Eigen::Index n_rf = rf.cols();
  CMat out(n_sc * n_tx, n_sc * n_rf);
  for (int n = 0; n < n_sc; ++n) {
    for (int m = 0; m < n_sc; ++m) {
      // (F^H ⊗ I) block (n, m) carries conj(F(m, n)).
      out.block(n * n_tx, m * n_rf, n_tx, n_rf) = std::conj(dft(m, n)) * rf;
    }
  }
  return out;
}

EffectivePrecoder::EffectivePrecoder(CMat full, int n_tx, int n_users)
    : full_(std::move(full)), n_tx_(n_tx), n_users_(n_users) {
  if (n_tx_ < 1 || n_users_ < 1 || full_.rows() % n_tx_ != 0 || full_.cols() % n_users_ != 0 ||
      full_.rows() / n_tx_ != full_.cols() / n_users_) {
    throw std::invalid_argument("effective precoder block structure inconsistent");
  }
}

EffectivePrecoder EffectivePrecoder::compose(const HybridBeamformer& bf) {
  const int n_sc = bf.n_sc();
  const Eigen::Index n_tx = bf.rf.rows();
  const Eigen::Index k = bf.bb.front().cols();
  const CMat f = dft_matrix(n_sc);
  CMat full(n_sc * n_tx, n_sc * k);
  std::vector<CMat> rf_bb(n_sc);
  for (int m = 0; m < n_sc; ++m) rf_bb[m] = bf.rf * bf.bb[m];
  for (int n = 0; n < n_sc; ++n) {
    for (int m = 0; m < n_sc; ++m) {
      full.block(n * n_tx, m * k, n_tx, k) = std::conj(f(m, n)) * rf_bb[m];
    }
  }
  return EffectivePrecoder(std::move(full), static_cast<int>(n_tx), static_cast<int>(k));
}

CMat EffectivePrecoder::block(int n) const {
  if (n < 0 || n >= n_sc()) throw std::out_of_range("subcarrier index out of range");
  return full_.block(static_cast<Eigen::Index>(n) * n_tx_, static_cast<Eigen::Index>(n) * n_users_,
                     n_tx_, n_users_);
}

CVec EffectivePrecoder::column(int k, int n) const {
  if (k < 0 || k >= n_users_) throw std::out_of_range("user index out of range");
  return block(n).col(k);
}

double total_power(const HybridBeamformer& bf) {
  double p = 0.0;
  for (const CMat& b : bf.bb) p += (bf.rf * b).squaredNorm();
  return p;
}

}  // namespace jcas
