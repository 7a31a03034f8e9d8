#pragma once

#include <cstdint>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/types.hpp"

namespace jcas {

// Target reference pattern: a scaled ideal mask per subcarrier.
struct ReferenceBeampattern {
  RMat values;  // grid x subcarrier, beta_n * mask
  RVec scale;   // fitted beta per subcarrier (identical entries by default)
  RVec mask;    // ideal 0/1 pattern d(psi)
};

// d(psi) = 1 when |psi - target| <= halfwidth for some target, else 0.
RVec ideal_pattern(const std::vector<double>& targets_deg, double halfwidth_deg,
                   const std::vector<double>& grid_deg);

// Closed-form least-squares scale: argmin_b sum_{psi,n} (bp - b d)^2, clamped
// at zero. Throws when the mask is identically zero.
double fit_scale(const RMat& achieved, const RVec& mask);
RVec fit_scale_per_subcarrier(const RMat& achieved, const RVec& mask);

// Builds the per-scenario reference by alternating a sensing-only manifold
// optimization (all transmit power on the beampattern, no SINR terms) with
// the closed-form scale fit, for config.ref_rounds rounds.
ReferenceBeampattern design_reference(const ScenarioConfig& config, const ChannelSet& ch,
                                      std::uint64_t seed);

}  // namespace jcas
