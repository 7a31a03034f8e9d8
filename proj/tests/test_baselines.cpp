#include "jcas/baselines.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "jcas/refbp.hpp"
#include "jcas/rng.hpp"

namespace jcas {
namespace {

ScenarioConfig quick_config() {
  ScenarioConfig c = desk_scale_config();
  c.n_tx = 4;
  c.n_rf = 2;
  c.n_sc = 2;
  c.n_users = 2;
  c.n_ris = 4;
  c.angle_grid_deg = uniform_grid_deg(15.0);
  c.target_angles_deg = {-45.0, 45.0};
  c.set_uniform_threshold_db(6.0);
  c.rcg.max_iters = 40;
  c.admm_max_iters = 5;
  c.ref_rounds = 2;
  return c;
}

TEST(SchemeId, RoundTripNames) {
  for (SchemeId id : all_schemes()) {
    EXPECT_EQ(scheme_from_string(to_string(id)), id);
  }
  EXPECT_THROW(scheme_from_string("zero_forcing"), std::invalid_argument);
}

TEST(RandomRis, UnitModulusAndDeterminism) {
  const RisPhases a = random_ris(16, 321);
  const RisPhases b = random_ris(16, 321);
  const RisPhases c = random_ris(16, 322);
  EXPECT_TRUE(a.v() == b.v());
  EXPECT_FALSE(a.v() == c.v());
  for (int r = 0; r < 16; ++r) {
    EXPECT_NEAR(std::abs(a.v()(r)), 1.0, 1e-12);
  }
}

TEST(RandomRis, PhasesAreUniformOnAverage) {
  // Mean of v over many draws approaches zero for uniform phases.
  const int draws = 100000;
  const int r = 4;
  CVec acc = CVec::Zero(r);
  for (int i = 0; i < draws; ++i) {
    acc += random_ris(r, 40000 + i).v();
  }
  acc /= static_cast<double>(draws);
  for (int i = 0; i < r; ++i) {
    EXPECT_LE(std::abs(acc(i).real()), 0.02);
    EXPECT_LE(std::abs(acc(i).imag()), 0.02);
  }
}

TEST(SolveFdb, FrozenRisEqualsSeededDraw) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 51);
  const RMat ref = RMat::Ones(c.n_grid(), c.n_sc);
  const std::uint64_t seed = 52;
  const SchemeRun run = solve_fdb(c, ch, ref, false, seed);
  // The frozen-RIS contract: the returned phases are the seeded draw itself.
  const RisPhases expected = random_ris(c.n_ris, derive_seed(seed, 1));
  EXPECT_TRUE(run.ris.v() == expected.v());
}

TEST(SolveFdb, DeterministicForSeed) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 53);
  const RMat ref = RMat::Ones(c.n_grid(), c.n_sc);
  const SchemeRun a = solve_fdb(c, ch, ref, true, 54);
  const SchemeRun b = solve_fdb(c, ch, ref, true, 54);
  EXPECT_TRUE(a.ris.v() == b.ris.v());
  for (int n = 0; n < c.n_sc; ++n) {
    EXPECT_TRUE(a.blocks[n] == b.blocks[n]);
  }
}

TEST(SolveFdb, PowerBudgetOnJointSphere) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 55);
  const RMat ref = RMat::Ones(c.n_grid(), c.n_sc);
  const SchemeRun run = solve_fdb(c, ch, ref, true, 56);
  double power = 0.0;
  for (const CMat& b : run.blocks) power += b.squaredNorm();
  EXPECT_NEAR(power, c.p_max_w, 1e-9 * c.p_max_w);
}

TEST(DigitalOracle, MatchesAuxiliaryCostOnBlockDiagonalInput) {
  // Handing the digital oracle the diagonal blocks of a full precoder must
  // reproduce the beampattern + penalty part of the auxiliary oracle.
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 57);
  Rng rng(58);
  CVec v(c.n_ris);
  for (int r = 0; r < c.n_ris; ++r) v(r) = std::polar(1.0, rng.uniform(0.0, 6.28));
  SolverState st;
  st.ris = RisPhases(v);
  st.rho1 = 0.9;
  st.rho2 = 1.7;
  st.w_aux.resize(c.n_sc * c.n_tx, c.n_sc * c.n_users);
  for (int i = 0; i < st.w_aux.size(); ++i) st.w_aux(i) = rng.cnormal();
  st.dual = CMat::Zero(st.w_aux.rows(), st.w_aux.cols());
  st.bf.rf = CMat::Ones(c.n_tx, c.n_rf);
  st.bf.bb.assign(c.n_sc, CMat::Zero(c.n_rf, c.n_users));

  RMat ref(c.n_grid(), c.n_sc);
  for (int i = 0; i < ref.size(); ++i) ref(i) = rng.uniform(0.0, 2.0);

  CMat stacked(c.n_tx, c.n_sc * c.n_users);
  for (int n = 0; n < c.n_sc; ++n) {
    stacked.middleCols(n * c.n_users, c.n_users) =
        st.w_aux.block(n * c.n_tx, n * c.n_users, c.n_tx, c.n_users);
  }

  const double full_cost = cost_grad_w(st, ch, ref, c).cost(st.w_aux);
  const double coupling =
      0.5 * st.rho1 *
      (st.w_aux + st.dual / st.rho1 - EffectivePrecoder::compose(st.bf).full()).squaredNorm();
  const double digital_cost =
      cost_grad_digital(ch, st.ris, ref, c, st.rho2).cost(stacked);
  EXPECT_NEAR(full_cost - coupling, digital_cost, 1e-9 * (1.0 + digital_cost));
}

TEST(RunScheme, FrozenRisSchemesNeverMutatePhases) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 59);
  const ReferenceBeampattern ref = design_reference(c, ch, 60);
  const std::uint64_t seed = 61;

  const SchemeOutput hb = run_scheme(SchemeId::kHbRndRis, c, ch, ref.values, seed);
  const std::uint64_t hb_seed = derive_seed(seed, 100 + static_cast<std::uint64_t>(SchemeId::kHbRndRis));
  EXPECT_TRUE(hb.run.ris.v() == random_ris(c.n_ris, derive_seed(hb_seed, 1)).v());

  const SchemeOutput fdb = run_scheme(SchemeId::kFdbRndRis, c, ch, ref.values, seed);
  const std::uint64_t fdb_seed = derive_seed(seed, 100 + static_cast<std::uint64_t>(SchemeId::kFdbRndRis));
  EXPECT_TRUE(fdb.run.ris.v() == random_ris(c.n_ris, derive_seed(fdb_seed, 1)).v());
}

TEST(RunScheme, DeterministicMetrics) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 62);
  const ReferenceBeampattern ref = design_reference(c, ch, 63);
  const SchemeOutput a = run_scheme(SchemeId::kProposed, c, ch, ref.values, 64);
  const SchemeOutput b = run_scheme(SchemeId::kProposed, c, ch, ref.values, 64);
  EXPECT_EQ(a.metrics.bp_mse_db, b.metrics.bp_mse_db);
  EXPECT_EQ(a.metrics.feasibility, b.metrics.feasibility);
  EXPECT_EQ(a.metrics.avg_sinr_db, b.metrics.avg_sinr_db);
}

TEST(RunScheme, ReportsFiniteMetricsForAllSchemes) {
  const ScenarioConfig c = quick_config();
  const ChannelSet ch = sample_channels(c, 65);
  const ReferenceBeampattern ref = design_reference(c, ch, 66);
  for (SchemeId id : all_schemes()) {
    const SchemeOutput out = run_scheme(id, c, ch, ref.values, 67);
    EXPECT_TRUE(std::isfinite(out.metrics.bp_mse_db)) << to_string(id);
    EXPECT_TRUE(std::isfinite(out.metrics.pslr_db)) << to_string(id);
    EXPECT_GE(out.metrics.feasibility, 0.0);
    EXPECT_LE(out.metrics.feasibility, 1.0);
    EXPECT_GE(out.metrics.iterations, 1);
  }
}

}  // namespace
}  // namespace jcas
