#include "jcas/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jcas {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double v) { return 10.0 * std::log10(v); }

std::vector<double> uniform_grid_deg(double step_deg) {
  if (step_deg <= 0.0 || step_deg > 180.0) {
    throw std::invalid_argument("grid step must lie in (0, 180]");
  }
  std::vector<double> grid;
  const int n = static_cast<int>(std::round(180.0 / step_deg));
  grid.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    grid.push_back(-90.0 + i * step_deg);
  }
  grid.back() = 90.0;
  return grid;
}

void ScenarioConfig::set_uniform_threshold_db(double gamma_db) {
  sinr_threshold = RMat::Constant(n_users, n_sc, db_to_linear(gamma_db));
}

void ScenarioConfig::set_snr_db(double snr_db) {
  noise_var_w = p_max_w / db_to_linear(snr_db);
}

double ScenarioConfig::snr_db() const { return linear_to_db(p_max_w / noise_var_w); }

double ScenarioConfig::gamma_db() const {
  if (sinr_threshold.size() == 0) throw std::logic_error("threshold matrix unset");
  return linear_to_db(sinr_threshold(0, 0));
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (n_tx < 1) fail("n_tx must be positive");
  if (n_rf < 1 || n_rf > n_tx) fail("n_rf must satisfy 1 <= n_rf <= n_tx");
  if (n_sc < 1) fail("n_sc must be at least 1");
  if (n_users < 1) fail("n_users must be positive");
  if (n_ris < 1) fail("n_ris must be positive");
  if (p_max_w <= 0.0) fail("p_max must be positive");
  if (noise_var_w <= 0.0) fail("noise variance must be positive");
  if (sinr_threshold.rows() != n_users || sinr_threshold.cols() != n_sc) {
    fail("sinr_threshold must be n_users x n_sc");
  }
  if ((sinr_threshold.array() <= 0.0).any()) fail("all SINR thresholds must be positive");
  if (angle_grid_deg.size() < 2) fail("angle grid needs at least two points");
  for (std::size_t i = 0; i < angle_grid_deg.size(); ++i) {
    if (angle_grid_deg[i] < -90.0 || angle_grid_deg[i] > 90.0) {
      fail("angle grid must lie within [-90, 90]");
    }
    if (i > 0 && angle_grid_deg[i] <= angle_grid_deg[i - 1]) {
      fail("angle grid must be strictly increasing");
    }
  }
  if (target_angles_deg.empty()) fail("at least one target angle required");
  for (double t : target_angles_deg) {
    if (t < angle_grid_deg.front() || t > angle_grid_deg.back()) {
      fail("target angles must lie within the grid range");
    }
  }
  if (lobe_halfwidth_deg < 0.0) fail("lobe halfwidth must be nonnegative");
  if (n_clusters < 1 || n_paths < 1) fail("channel statistics need n_clusters, n_paths >= 1");
  if (admm_max_iters < 1) fail("admm_max_iters must be at least 1");
  if (admm_tol_rel <= 0.0) fail("admm_tol_rel must be positive");
  if (ref_rounds < 1) fail("ref_rounds must be at least 1");
  if (rcg.max_iters < 0) fail("rcg.max_iters must be nonnegative");
  if (rcg.grad_tol <= 0.0) fail("rcg.grad_tol must be positive");
  if (rcg.armijo_c1 <= 0.0 || rcg.armijo_c1 >= 1.0) fail("armijo_c1 must lie in (0, 1)");
  if (rcg.armijo_shrink <= 0.0 || rcg.armijo_shrink >= 1.0) fail("armijo_shrink must lie in (0, 1)");
  if (rcg.armijo_initial_step <= 0.0) fail("armijo_initial_step must be positive");
}

ScenarioConfig paper_scale_config() {
  ScenarioConfig c;
  c.n_tx = 64;
  c.n_rf = 16;
  c.n_sc = 8;
  c.n_users = 4;
  c.n_ris = 40;
  c.target_angles_deg = {-50.0, 0.0, 50.0};
  c.p_max_w = dbm_to_watts(30.0);
  c.angle_grid_deg = uniform_grid_deg(1.0);
  c.lobe_halfwidth_deg = 6.0;
  c.set_uniform_threshold_db(10.0);
  c.set_snr_db(25.0);
  c.n_clusters = 4;
  c.n_paths = 5;
  c.rcg.max_iters = 1000;
  c.rcg.grad_tol = 1e-3;
  c.admm_max_iters = 30;
  c.base_seed = 1;
  return c;
}

ScenarioConfig desk_scale_config() {
  ScenarioConfig c = paper_scale_config();
  c.n_tx = 8;
  c.n_rf = 4;
  c.n_sc = 2;
  c.n_users = 2;
  // More RIS elements than BS antennas, so the phase configuration genuinely
  // shapes the reachable incident field (with R <= Nt a digital precoder can
  // absorb any phase setting and the RIS stops mattering).
  c.n_ris = 16;
  c.angle_grid_deg = uniform_grid_deg(5.0);
  c.set_uniform_threshold_db(6.0);
  c.set_snr_db(25.0);
  c.rcg.max_iters = 150;
  c.rcg.grad_tol = 1e-4;
  return c;
}

}  // namespace jcas
