#pragma once

#include <vector>

#include "jcas/channel.hpp"
#include "jcas/precoding.hpp"

namespace jcas {

// Combined direct + reflected channel column for user k on subcarrier n:
// h = h_bu + H_br diag(v) h_ru, so that h^H = h_bu^H + h_ru^H Theta H_br^H.
CVec combined_channel(const ChannelSet& ch, const RisPhases& ris, int k, int n);

// SINR of user k on subcarrier n under the per-subcarrier precoding columns
// of `prec`. Interference comes from the other columns of the same block.
double sinr(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
            double noise_var, int k, int n);

// K x Nc table of all SINR values.
RMat all_sinrs(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
               double noise_var);

struct BeampatternResult {
  RVec per_subcarrier;  // BP_n(psi)
  double total = 0.0;   // sum over subcarriers
};

// Re-radiated power at the RIS toward `angle_deg`:
// BP_n = ||a_hat^H(psi) Theta H_br,n^H W_n||^2 per subcarrier.
BeampatternResult beampattern(const ChannelSet& ch, const RisPhases& ris,
                              const EffectivePrecoder& prec, double angle_deg);

// Grid x subcarrier table of beampattern values.
RMat beampattern_table(const ChannelSet& ch, const RisPhases& ris, const EffectivePrecoder& prec,
                       const std::vector<double>& grid_deg);

// Same, from per-subcarrier precoder blocks directly.
RMat beampattern_table_blocks(const ChannelSet& ch, const RisPhases& ris,
                              const std::vector<CMat>& blocks,
                              const std::vector<double>& grid_deg);

struct BpMse {
  double linear = 0.0;
  double db = 0.0;
};

// Mean over (angle, subcarrier) of the squared deviation between the designed
// and reference beampattern tables.
BpMse beampattern_mse(const RMat& designed, const RMat& reference);

// Peak-to-side-lobe ratio in dB of a pattern summed over subcarriers. Main
// lobes are the grid points within `halfwidth_deg` of any target.
double pslr_db(const RVec& pattern, const std::vector<double>& grid_deg,
               const std::vector<double>& targets_deg, double halfwidth_deg);

// Fraction of (user, subcarrier) pairs with sinr >= threshold.
double feasibility_ratio(const RMat& sinrs, const RMat& thresholds);

}  // namespace jcas
