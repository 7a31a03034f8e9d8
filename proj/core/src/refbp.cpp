#include "jcas/refbp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jcas/metrics.hpp"
#include "jcas/rng.hpp"
#include "jcas/solver.hpp"

namespace jcas {

RVec ideal_pattern(const std::vector<double>& targets_deg, double halfwidth_deg,
                   const std::vector<double>& grid_deg) {
  if (targets_deg.empty()) throw std::invalid_argument("ideal_pattern: no targets");
  RVec d = RVec::Zero(static_cast<Eigen::Index>(grid_deg.size()));
  for (std::size_t g = 0; g < grid_deg.size(); ++g) {
    for (double t : targets_deg) {
      if (std::abs(grid_deg[g] - t) <= halfwidth_deg) {
        d(static_cast<Eigen::Index>(g)) = 1.0;
        break;
      }
    }
  }
  return d;
}

double fit_scale(const RMat& achieved, const RVec& mask) {
  const double denom = mask.squaredNorm() * static_cast<double>(achieved.cols());
  if (denom <= 0.0) throw std::invalid_argument("fit_scale: mask is identically zero");
  const double num = (mask.transpose() * achieved).sum();
  return std::max(num / denom, 0.0);
}

RVec fit_scale_per_subcarrier(const RMat& achieved, const RVec& mask) {
  const double denom = mask.squaredNorm();
  if (denom <= 0.0) throw std::invalid_argument("fit_scale: mask is identically zero");
  RVec beta = (mask.transpose() * achieved).transpose() / denom;
  return beta.cwiseMax(0.0);
}

ReferenceBeampattern design_reference(const ScenarioConfig& config, const ChannelSet& ch,
                                      std::uint64_t seed) {
  config.validate();
  ch.validate_against(config);
  const RVec mask =
      ideal_pattern(config.target_angles_deg, config.lobe_halfwidth_deg, config.angle_grid_deg);
  if (mask.maxCoeff() <= 0.0) {
    throw std::invalid_argument("design_reference: ideal pattern is identically zero");
  }

  Rng rng(derive_seed(seed, 0));
  const double radius = std::sqrt(config.p_max_w);
  const Eigen::Index cols = static_cast<Eigen::Index>(config.n_sc) * config.n_users;
  CMat w(config.n_tx, cols);
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.cnormal();
  }
  w *= radius / w.norm();
  CVec v(config.n_ris);
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    v(r) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  RisPhases ris(v);

  const ManifoldSpec sphere = ManifoldSpec::power_sphere(radius, config.n_tx, cols);
  const ManifoldSpec circle = ManifoldSpec::complex_circle(config.n_ris, 1);

  RVec beta = RVec::Ones(config.n_sc);
  auto blocks_of = [&](const CMat& stacked) {
    std::vector<CMat> blocks(config.n_sc);
    for (int n = 0; n < config.n_sc; ++n) {
      blocks[n] = stacked.middleCols(static_cast<Eigen::Index>(n) * config.n_users,
                                     config.n_users);
    }
    return blocks;
  };

  for (int round = 0; round < config.ref_rounds; ++round) {
    RMat target(mask.size(), config.n_sc);
    for (int n = 0; n < config.n_sc; ++n) target.col(n) = beta(n) * mask;

    const auto w_res = rcg_minimize(cost_grad_digital(ch, ris, target, config, 0.0), sphere, w,
                                    config.rcg);
    w = w_res.point;
    const auto v_res = rcg_minimize(cost_grad_ris(ch, blocks_of(w), target, config, 0.0), circle,
                                    ris.v(), config.rcg);
    ris = RisPhases(v_res.point);

    const RMat achieved = beampattern_table_blocks(ch, ris, blocks_of(w), config.angle_grid_deg);
    if (config.ref_per_subcarrier) {
      beta = fit_scale_per_subcarrier(achieved, mask);
    } else {
      beta.setConstant(fit_scale(achieved, mask));
    }
  }

  ReferenceBeampattern out;
  out.mask = mask;
  out.scale = beta;
  out.values.resize(mask.size(), config.n_sc);
  for (int n = 0; n < config.n_sc; ++n) out.values.col(n) = beta(n) * mask;
  return out;
}

}  // namespace jcas
