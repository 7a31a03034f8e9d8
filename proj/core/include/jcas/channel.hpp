#pragma once

#include <cstdint>
#include <vector>

#include "jcas/rng.hpp"
#include "jcas/scenario.hpp"
#include "jcas/types.hpp"

namespace jcas {

// Unitary DFT matrix; entry (n, n') = exp(-j 2 pi (n-1)(n'-1) / N) / sqrt(N).
CMat dft_matrix(int n_sc);

// Half-wavelength ULA response at the BS, unit Euclidean norm:
// entry m = exp(j pi (m-1) sin(angle)) / sqrt(n).
CVec bs_steering(double angle_deg, int n_elements);

// ULA response at the RIS toward a detection angle. Entries have modulus one;
// this vector intentionally carries no 1/sqrt(R) normalization.
CVec ris_steering(double angle_deg, int n_elements);

// One clustered multipath parameter draw.
struct SvPaths {
  CMat gains;                      // n_clusters x n_paths, CN(0, 1)
  RMat aod_deg;                    // departure angles, n_clusters x n_paths
  RMat aoa_deg;                    // arrival angles; empty for vector channels
  std::vector<int> cluster_delay;  // per cluster, in {0, ..., n_sc - 1}
};

SvPaths sample_paths(Rng& rng, int n_clusters, int n_paths, int n_sc, bool with_aoa);

// Clustered vector channel on one subcarrier:
//   sqrt(n_elem / (N_cl N_p)) sum_{c,p} gain conj(a(aod)) exp(-j 2 pi delay_c n / N_c)
// with a(.) the unit-norm ULA response of n_elem elements. Steering phase
// ramps are conjugated so the stored value is a column vector.
CVec sv_vector_channel(const SvPaths& paths, int subcarrier, int n_sc, int n_elem);

// Clustered matrix channel (n_rows x n_cols) on one subcarrier:
//   sqrt(n_rows n_cols / (N_cl N_p)) sum_{c,p} gain conj(a_row(aod)) a_col(aoa)^T exp(...)
CMat sv_matrix_channel(const SvPaths& paths, int subcarrier, int n_sc, int n_rows, int n_cols);

// Per-subcarrier channel triplet for one realization.
struct ChannelSet {
  std::vector<CMat> h_bs_ue;   // per subcarrier: Nt x K
  std::vector<CMat> h_bs_ris;  // per subcarrier: Nt x R
  std::vector<CMat> h_ris_ue;  // per subcarrier: R x K
  std::uint64_t seed = 0;

  int n_sc() const { return static_cast<int>(h_bs_ue.size()); }
  void validate_against(const ScenarioConfig& config) const;
};

// Draws every channel of the scenario. Identical (config, seed) pairs produce
// bit-identical output.
ChannelSet sample_channels(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace jcas
