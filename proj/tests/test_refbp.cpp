#include "jcas/refbp.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "jcas/metrics.hpp"
#include "jcas/rng.hpp"

namespace jcas {
namespace {

ScenarioConfig ref_config() {
  ScenarioConfig c = desk_scale_config();
  c.n_tx = 4;
  c.n_rf = 2;
  c.n_sc = 2;
  c.n_users = 1;
  c.n_ris = 8;
  c.set_uniform_threshold_db(6.0);
  c.rcg.max_iters = 60;
  c.rcg.grad_tol = 1e-4;
  c.ref_rounds = 3;
  return c;
}

TEST(IdealPattern, TableScenario) {
  const auto grid = uniform_grid_deg(1.0);
  const RVec d = ideal_pattern({-50.0, 0.0, 50.0}, 6.0, grid);
  // 1 degree grid: value 1 at 0 deg (index 90), 0 at 90 deg (index 180).
  EXPECT_EQ(d(90), 1.0);
  EXPECT_EQ(d(180), 0.0);
  // Three disjoint lobes of 13 points each.
  EXPECT_EQ(d.sum(), 39.0);
}

TEST(IdealPattern, ZeroHalfwidthMarksExactGridPoints) {
  const std::vector<double> grid = {-10.0, 0.0, 10.0, 20.0};
  const RVec d = ideal_pattern({0.0, 20.0}, 0.0, grid);
  EXPECT_EQ(d(0), 0.0);
  EXPECT_EQ(d(1), 1.0);
  EXPECT_EQ(d(2), 0.0);
  EXPECT_EQ(d(3), 1.0);
}

TEST(IdealPattern, RejectsEmptyTargets) {
  EXPECT_THROW(ideal_pattern({}, 5.0, uniform_grid_deg(5.0)), std::invalid_argument);
}

TEST(FitScale, ExactFitGivesUnitScale) {
  const auto grid = uniform_grid_deg(5.0);
  const RVec mask = ideal_pattern({0.0}, 6.0, grid);
  RMat achieved(mask.size(), 3);
  for (int n = 0; n < 3; ++n) achieved.col(n) = mask;
  EXPECT_NEAR(fit_scale(achieved, mask), 1.0, 1e-12);
}

TEST(FitScale, RejectsZeroMask) {
  EXPECT_THROW(fit_scale(RMat::Ones(5, 2), RVec::Zero(5)), std::invalid_argument);
}

TEST(FitScale, ClampsNegativeFitToZero) {
  const RVec mask = (RVec(3) << 1.0, 1.0, 0.0).finished();
  EXPECT_EQ(fit_scale(RMat::Constant(3, 1, -2.0), mask), 0.0);
}

TEST(FitScale, MatchesOneDimensionalGridSearch) {
  Rng rng(31);
  const auto grid = uniform_grid_deg(5.0);
  const RVec mask = ideal_pattern({-30.0, 30.0}, 8.0, grid);
  RMat achieved(mask.size(), 2);
  for (int i = 0; i < achieved.size(); ++i) achieved(i) = rng.uniform(0.0, 4.0);
  const double fitted = fit_scale(achieved, mask);

  auto objective = [&](double beta) {
    double acc = 0.0;
    for (int n = 0; n < achieved.cols(); ++n) {
      acc += (achieved.col(n) - beta * mask).squaredNorm();
    }
    return acc;
  };
  double best_beta = 0.0;
  double best = objective(0.0);
  for (double beta = 0.0; beta <= 8.0; beta += 1e-4) {
    const double val = objective(beta);
    if (val < best) {
      best = val;
      best_beta = beta;
    }
  }
  EXPECT_NEAR(fitted, best_beta, 1e-3);
  EXPECT_LE(objective(fitted), best + 1e-6);
}

TEST(DesignReference, ValuesAreScaledMask) {
  const ScenarioConfig c = ref_config();
  const ChannelSet ch = sample_channels(c, 41);
  const ReferenceBeampattern ref = design_reference(c, ch, 42);
  ASSERT_EQ(ref.values.rows(), c.n_grid());
  ASSERT_EQ(ref.values.cols(), c.n_sc);
  EXPECT_GE(ref.scale.minCoeff(), 0.0);
  for (int n = 0; n < c.n_sc; ++n) {
    for (int g = 0; g < c.n_grid(); ++g) {
      EXPECT_NEAR(ref.values(g, n), ref.scale(n) * ref.mask(g), 1e-12);
      if (ref.mask(g) == 0.0) EXPECT_EQ(ref.values(g, n), 0.0);
    }
  }
  // Identical across subcarriers by default.
  EXPECT_NEAR((ref.values.col(0) - ref.values.col(1)).norm(), 0.0, 1e-12);
}

TEST(DesignReference, RejectsEmptyMask) {
  ScenarioConfig c = ref_config();
  c.angle_grid_deg = uniform_grid_deg(5.0);
  c.target_angles_deg = {2.5};  // off-grid target
  c.lobe_halfwidth_deg = 1.0;   // narrower than the grid step
  const ChannelSet ch = sample_channels(c, 43);
  EXPECT_THROW(design_reference(c, ch, 44), std::invalid_argument);
}

TEST(DesignReference, MainLobeLevelGrowsWithRisSize) {
  // Paired-seed comparison: beta for R=16 should be at least beta for R=8 on
  // most seeds.
  ScenarioConfig small = ref_config();
  small.ref_rounds = 2;
  ScenarioConfig large = small;
  large.n_ris = 16;
  small.n_ris = 8;
  int wins = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const ChannelSet ch_small = sample_channels(small, derive_seed(900, s));
    const ChannelSet ch_large = sample_channels(large, derive_seed(900, s));
    const double beta_small = design_reference(small, ch_small, derive_seed(901, s)).scale(0);
    const double beta_large = design_reference(large, ch_large, derive_seed(901, s)).scale(0);
    if (beta_large >= beta_small) ++wins;
  }
  EXPECT_GE(wins, 14) << "R=16 reference should dominate R=8 on >= 70% of seeds";
}

}  // namespace
}  // namespace jcas
