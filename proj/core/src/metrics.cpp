#include "jcas/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace jcas {

CVec combined_channel(const ChannelSet& ch, const RisPhases& ris, int k, int n) {
  if (n < 0 || n >= ch.n_sc()) throw std::out_of_range("subcarrier index out of range");
  if (k < 0 || k >= ch.h_bs_ue[n].cols()) throw std::out_of_range("user index out of range");
  return ch.h_bs_ue[n].col(k) +
         ch.h_bs_ris[n] * ris.v().cwiseProduct(ch.h_ris_ue[n].col(k));
}

double sinr(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
            double noise_var, int k, int n) {
  const CVec h = combined_channel(ch, ris, k, n);
  const CMat w = prec.block(n);
  const Eigen::RowVectorXcd u = h.adjoint() * w;
  const double signal = std::norm(u(k));
  const double interference = u.squaredNorm() - signal;
  return signal / (interference + noise_var);
}

RMat all_sinrs(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
               double noise_var) {
  const int k_users = static_cast<int>(ch.h_bs_ue[0].cols());
  RMat out(k_users, ch.n_sc());
  for (int n = 0; n < ch.n_sc(); ++n) {
    const CMat w = prec.block(n);
    for (int k = 0; k < k_users; ++k) {
      const CVec h = combined_channel(ch, ris, k, n);
      const Eigen::RowVectorXcd u = h.adjoint() * w;
      const double signal = std::norm(u(k));
      out(k, n) = signal / (u.squaredNorm() - signal + noise_var);
    }
  }
  return out;
}

namespace {

double bp_block(const CMat& h_br, const CVec& v, const CVec& a_hat, const CMat& w_block) {
  // ||a^H Theta H^H W||^2 with Theta = diag(conj(v)).
  const CVec weights = a_hat.cwiseProduct(v);
  return (weights.adjoint() * (h_br.adjoint() * w_block)).squaredNorm();
}

}  // namespace

BeampatternResult beampattern(const ChannelSet& ch, const RisPhases& ris,
                              const EffectivePrecoder& prec, double angle_deg) {
  BeampatternResult out;
  out.per_subcarrier.resize(ch.n_sc());
  const CVec a_hat = ris_steering(angle_deg, ris.size());
  for (int n = 0; n < ch.n_sc(); ++n) {
    out.per_subcarrier(n) = bp_block(ch.h_bs_ris[n], ris.v(), a_hat, prec.block(n));
  }
  out.total = out.per_subcarrier.sum();
  return out;
}

RMat beampattern_table(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
                       const std::vector<double>& grid_deg) {
  std::vector<CMat> blocks(ch.n_sc());
  for (int n = 0; n < ch.n_sc(); ++n) blocks[n] = prec.block(n);
  return beampattern_table_blocks(ch, ris, blocks, grid_deg);
}

RMat beampattern_table_blocks(const ChannelSet& ch, const RisPhases& ris,
                              const std::vector<CMat>& blocks,
                              const std::vector<double>& grid_deg) {
  RMat table(static_cast<Eigen::Index>(grid_deg.size()), ch.n_sc());
  for (int n = 0; n < ch.n_sc(); ++n) {
    const CMat projected = ch.h_bs_ris[n].adjoint() * blocks[n];  // R x K
    for (std::size_t g = 0; g < grid_deg.size(); ++g) {
      const CVec weights = ris_steering(grid_deg[g], ris.size()).cwiseProduct(ris.v());
      table(static_cast<Eigen::Index>(g), n) = (weights.adjoint() * projected).squaredNorm();
    }
  }
  return table;
}

BpMse beampattern_mse(const RMat& designed, const RMat& reference) {
  if (designed.rows() != reference.rows() || designed.cols() != reference.cols()) {
    throw std::invalid_argument("beampattern tables must have identical shapes");
  }
  BpMse out;
  out.linear = (designed - reference).squaredNorm() / static_cast<double>(designed.size());
  out.db = linear_to_db(out.linear);
  return out;
}

double pslr_db(const RVec& pattern, const std::vector<double>& grid_deg,
               const std::vector<double>& targets_deg, double halfwidth_deg) {
  if (pattern.size() != static_cast<Eigen::Index>(grid_deg.size())) {
    throw std::invalid_argument("pattern and grid sizes differ");
  }
  double main_peak = -1.0;
  double side_peak = -1.0;
  for (std::size_t g = 0; g < grid_deg.size(); ++g) {
    bool in_main = false;
    for (double t : targets_deg) {
      if (std::abs(grid_deg[g] - t) <= halfwidth_deg) {
        in_main = true;
        break;
      }
    }
    double& peak = in_main ? main_peak : side_peak;
    peak = std::max(peak, pattern(static_cast<Eigen::Index>(g)));
  }
  if (main_peak < 0.0 || side_peak < 0.0) {
    throw std::invalid_argument("pslr needs grid points both inside and outside the main lobes");
  }
  if (main_peak == 0.0 && side_peak == 0.0) {
    throw std::invalid_argument("pslr undefined for an all-zero pattern");
  }
  return linear_to_db(main_peak / side_peak);
}

double feasibility_ratio(const RMat& sinrs, const RMat& thresholds) {
  if (sinrs.rows() != thresholds.rows() || sinrs.cols() != thresholds.cols()) {
    throw std::invalid_argument("SINR and threshold tables must have identical shapes");
  }
  const auto satisfied = (sinrs.array() >= thresholds.array()).count();
  return static_cast<double>(satisfied) / static_cast<double>(sinrs.size());
}

}  // namespace jcas
