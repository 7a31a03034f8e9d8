#include "jcas/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jcas {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;
}  // namespace

CMat dft_matrix(int n_sc) {
  if (n_sc < 1) throw std::invalid_argument("dft_matrix: n_sc must be >= 1");
  CMat f(n_sc, n_sc);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_sc));
  for (int n = 0; n < n_sc; ++n) {
    for (int m = 0; m < n_sc; ++m) {
      const double phase = -2.0 * kPi * static_cast<double>(n) * m / n_sc;
      f(n, m) = scale * std::polar(1.0, phase);
    }
  }
  return f;
}

CVec bs_steering(double angle_deg, int n_elements) {
  CVec a(n_elements);
  const double s = std::sin(angle_deg * kDegToRad);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
  for (int m = 0; m < n_elements; ++m) {
    a(m) = scale * std::polar(1.0, kPi * m * s);
  }
  return a;
}

CVec ris_steering(double angle_deg, int n_elements) {
  CVec a(n_elements);
  const double s = std::sin(angle_deg * kDegToRad);
  for (int m = 0; m < n_elements; ++m) {
    a(m) = std::polar(1.0, kPi * m * s);
  }
  return a;
}

SvPaths sample_paths(Rng& rng, int n_clusters, int n_paths, int n_sc, bool with_aoa) {
  SvPaths p;
  p.gains.resize(n_clusters, n_paths);
  p.aod_deg.resize(n_clusters, n_paths);
  if (with_aoa) p.aoa_deg.resize(n_clusters, n_paths);
  p.cluster_delay.resize(n_clusters);
  for (int c = 0; c < n_clusters; ++c) {
    for (int q = 0; q < n_paths; ++q) {
      p.gains(c, q) = rng.cnormal();
      p.aod_deg(c, q) = rng.uniform(-90.0, 90.0);
      if (with_aoa) p.aoa_deg(c, q) = rng.uniform(-90.0, 90.0);
    }
    p.cluster_delay[c] = rng.uniform_int(n_sc);
  }
  return p;
}

namespace {

cxd delay_phase(int delay, int subcarrier, int n_sc) {
  // Subcarriers are indexed from 1 in the delay ramp.
  const double phase = -2.0 * kPi * delay * (subcarrier + 1) / n_sc;
  return std::polar(1.0, phase);
}

}  // namespace

CVec sv_vector_channel(const SvPaths& paths, int subcarrier, int n_sc, int n_elem) {
  const int n_cl = static_cast<int>(paths.gains.rows());
  const int n_p = static_cast<int>(paths.gains.cols());
  const double lead = std::sqrt(static_cast<double>(n_elem) / (n_cl * n_p));
  CVec h = CVec::Zero(n_elem);
  for (int c = 0; c < n_cl; ++c) {
    const cxd ramp = delay_phase(paths.cluster_delay[c], subcarrier, n_sc);
    for (int q = 0; q < n_p; ++q) {
      h += (paths.gains(c, q) * ramp) * bs_steering(paths.aod_deg(c, q), n_elem).conjugate();
    }
  }
  return lead * h;
}

CMat sv_matrix_channel(const SvPaths& paths, int subcarrier, int n_sc, int n_rows, int n_cols) {
  const int n_cl = static_cast<int>(paths.gains.rows());
  const int n_p = static_cast<int>(paths.gains.cols());
  const double lead = std::sqrt(static_cast<double>(n_rows) * n_cols / (n_cl * n_p));
  CMat h = CMat::Zero(n_rows, n_cols);
  for (int c = 0; c < n_cl; ++c) {
    const cxd ramp = delay_phase(paths.cluster_delay[c], subcarrier, n_sc);
    for (int q = 0; q < n_p; ++q) {
      const CVec row_side = bs_steering(paths.aod_deg(c, q), n_rows).conjugate();
      const CVec col_side = bs_steering(paths.aoa_deg(c, q), n_cols);
      h += (paths.gains(c, q) * ramp) * (row_side * col_side.transpose());
    }
  }
  return lead * h;
}

void ChannelSet::validate_against(const ScenarioConfig& config) const {
  if (n_sc() != config.n_sc || static_cast<int>(h_bs_ris.size()) != config.n_sc ||
      static_cast<int>(h_ris_ue.size()) != config.n_sc) {
    throw std::invalid_argument("channel set does not cover all subcarriers");
  }
  for (int n = 0; n < config.n_sc; ++n) {
    if (h_bs_ue[n].rows() != config.n_tx || h_bs_ue[n].cols() != config.n_users ||
        h_bs_ris[n].rows() != config.n_tx || h_bs_ris[n].cols() != config.n_ris ||
        h_ris_ue[n].rows() != config.n_ris || h_ris_ue[n].cols() != config.n_users) {
      throw std::invalid_argument("channel dimensions inconsistent with scenario");
    }
    if (!h_bs_ue[n].allFinite() || !h_bs_ris[n].allFinite() || !h_ris_ue[n].allFinite()) {
      throw std::invalid_argument("channel entries must be finite");
    }
  }
}

ChannelSet sample_channels(const ScenarioConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const int k_users = config.n_users;
  // Draw order is fixed: BS->UE paths per user, BS->RIS paths, RIS->UE paths
  // per user. Changing it breaks seed reproducibility.
  std::vector<SvPaths> bu(k_users);
  for (int k = 0; k < k_users; ++k) {
    bu[k] = sample_paths(rng, config.n_clusters, config.n_paths, config.n_sc, false);
  }
  SvPaths br = sample_paths(rng, config.n_clusters, config.n_paths, config.n_sc, true);
  std::vector<SvPaths> ru(k_users);
  for (int k = 0; k < k_users; ++k) {
    ru[k] = sample_paths(rng, config.n_clusters, config.n_paths, config.n_sc, false);
  }

  ChannelSet ch;
  ch.seed = seed;
  ch.h_bs_ue.resize(config.n_sc);
  ch.h_bs_ris.resize(config.n_sc);
  ch.h_ris_ue.resize(config.n_sc);
  for (int n = 0; n < config.n_sc; ++n) {
    ch.h_bs_ue[n].resize(config.n_tx, k_users);
    ch.h_ris_ue[n].resize(config.n_ris, k_users);
    for (int k = 0; k < k_users; ++k) {
      ch.h_bs_ue[n].col(k) = sv_vector_channel(bu[k], n, config.n_sc, config.n_tx);
      ch.h_ris_ue[n].col(k) = sv_vector_channel(ru[k], n, config.n_sc, config.n_ris);
    }
    ch.h_bs_ris[n] = sv_matrix_channel(br, n, config.n_sc, config.n_tx, config.n_ris);
  }
  return ch;
}

}  // namespace jcas
