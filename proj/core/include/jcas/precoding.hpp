#pragma once

#include <vector>

#include "jcas/types.hpp"

namespace jcas {

// RIS phase vector on the complex circle. The stored optimization variable v
// relates to the physical phase matrix by Theta = diag(conj(v)); with that
// convention (h_bu^H + h_ru^H Theta H_br^H) w == b + v^H a holds for the
// decoupled form used by the phase-shift subproblem.
class RisPhases {
 public:
  RisPhases() = default;       // empty placeholder; populated instances come from the ctor below
  explicit RisPhases(CVec v);  // throws if any |v_r| deviates from 1 by > 1e-9

  int size() const { return static_cast<int>(v_.size()); }
  const CVec& v() const { return v_; }
  CMat theta() const;                 // R x R diagonal phase matrix
  CMat theta_hat(int n_sc) const;     // n_sc-fold block-diagonal expansion

  static RisPhases from_angles(const RVec& theta_rad);

 private:
  CVec v_;
};

// Frequency-flat analog precoder plus per-subcarrier baseband precoders.
struct HybridBeamformer {
  CMat rf;               // Nt x Nrf, unit-modulus entries
  std::vector<CMat> bb;  // per subcarrier: Nrf x K

  int n_sc() const { return static_cast<int>(bb.size()); }
  void validate() const;  // throws on off-modulus entries or shape mismatch
};

// The analog + IDFT factor (I ⊗ rf)(F^H ⊗ I) of the transmit chain,
// materialized as a dense Nc*Nt x Nc*Nrf matrix.
CMat rf_dft_factor(const CMat& rf, const CMat& dft);

// Full effective precoder W = W_rf (F^H ⊗ I) W_bb together with accessors for
// its per-subcarrier diagonal blocks W_n and per-user columns w_{k,n}.
class EffectivePrecoder {
 public:
  EffectivePrecoder(CMat full, int n_tx, int n_users);
  static EffectivePrecoder compose(const HybridBeamformer& bf);

  const CMat& full() const { return full_; }
  int n_sc() const { return static_cast<int>(full_.rows()) / n_tx_; }
  int n_tx() const { return n_tx_; }
  int n_users() const { return n_users_; }
  CMat block(int n) const;           // Nt x K diagonal block
  CVec column(int k, int n) const;   // w_{k,n}

 private:
  CMat full_;
  int n_tx_ = 0;
  int n_users_ = 0;
};

// ||W_rf (F^H ⊗ I) W_bb||_F^2, evaluated through the unitary-DFT identity
// as sum_n ||rf * bb_n||_F^2.
double total_power(const HybridBeamformer& bf);

}  // namespace jcas
