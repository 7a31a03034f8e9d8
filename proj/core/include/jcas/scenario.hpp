#pragma once

#include <cstdint>
#include <vector>

#include "jcas/types.hpp"

namespace jcas {

// Riemannian conjugate gradient settings shared by all subproblems.
struct RcgSettings {
  int max_iters = 1000;             // iteration cap
  double grad_tol = 1e-3;           // stop once ||grad||_F drops below
  double armijo_c1 = 1e-4;          // sufficient-decrease constant
  double armijo_shrink = 0.5;       // backtracking factor
  double armijo_initial_step = 1.0;
  bool pr_plus = true;              // clip the Polak-Ribiere beta at 0
};

// Complete description of one simulation scenario: array geometry, powers,
// thresholds, detection grid, channel statistics and solver settings.
struct ScenarioConfig {
  int n_tx = 64;
  int n_rf = 16;
  int n_sc = 8;
  int n_users = 4;
  int n_ris = 40;
  std::vector<double> target_angles_deg = {-50.0, 0.0, 50.0};
  double p_max_w = 1.0;             // total transmit power (30 dBm default)
  RMat sinr_threshold;              // K x Nc, linear scale
  double noise_var_w = 1e-2;
  std::vector<double> angle_grid_deg;  // detection angles over [-90, 90]
  double lobe_halfwidth_deg = 6.0;
  int n_clusters = 4;
  int n_paths = 5;
  RcgSettings rcg;
  int admm_max_iters = 30;
  double admm_tol_rel = 1e-2;       // primal residual tolerance, rel. ||W||_F
  std::uint64_t base_seed = 1;
  bool ref_per_subcarrier = false;  // distinct reference scale per subcarrier
  int ref_rounds = 5;               // scale-fit alternation rounds
  // Scenario metadata; no computation reads these two.
  double subcarrier_spacing_hz = 120e3;
  int symbol_length = 14;

  int n_grid() const { return static_cast<int>(angle_grid_deg.size()); }
  void set_uniform_threshold_db(double gamma_db);
  void set_snr_db(double snr_db);   // noise_var = p_max / 10^(snr/10)
  double snr_db() const;
  double gamma_db() const;          // threshold of user 0, subcarrier 0

  // Throws std::invalid_argument when any structural invariant is violated.
  void validate() const;
};

double dbm_to_watts(double dbm);
double db_to_linear(double db);
double linear_to_db(double v);

// Uniformly spaced angles covering [-90, 90] inclusive.
std::vector<double> uniform_grid_deg(double step_deg);

// Table-scale defaults: 64 antennas, 16 RF chains, 8 subcarriers, 4 users,
// 40 RIS elements, 30 dBm, targets at -50/0/50 deg, 10 dB threshold, 25 dB SNR.
ScenarioConfig paper_scale_config();

// Small verification scale used by the test and gradcheck suites.
ScenarioConfig desk_scale_config();

}  // namespace jcas
