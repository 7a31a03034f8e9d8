#include <benchmark/benchmark.h>

#include "jcas/refbp.hpp"
#include "jcas/rng.hpp"
#include "jcas/solver.hpp"

namespace {

using namespace jcas;

struct Fixture {
  ScenarioConfig config;
  ChannelSet ch;
  SolverState state;
  RMat ref;
};

Fixture make_fixture() {
  Fixture f;
  f.config = desk_scale_config();
  f.ch = sample_channels(f.config, 11);
  Rng rng(12);
  const int rows = f.config.n_sc * f.config.n_tx;
  const int cols = f.config.n_sc * f.config.n_users;
  CMat w(rows, cols);
  for (int i = 0; i < w.size(); ++i) w(i) = rng.cnormal();
  f.state.w_aux = (std::sqrt(f.config.p_max_w) / w.norm()) * w;
  CMat rf(f.config.n_tx, f.config.n_rf);
  for (int i = 0; i < rf.size(); ++i) rf(i) = std::polar(1.0, rng.uniform(0.0, 6.28));
  f.state.bf.rf = rf;
  f.state.bf.bb.resize(f.config.n_sc);
  for (int n = 0; n < f.config.n_sc; ++n) {
    f.state.bf.bb[n].resize(f.config.n_rf, f.config.n_users);
    for (int i = 0; i < f.state.bf.bb[n].size(); ++i) f.state.bf.bb[n](i) = rng.cnormal();
  }
  CVec v(f.config.n_ris);
  for (int r = 0; r < f.config.n_ris; ++r) v(r) = std::polar(1.0, rng.uniform(0.0, 6.28));
  f.state.ris = RisPhases(v);
  f.state.dual = CMat::Zero(rows, cols);
  f.ref.resize(f.config.n_grid(), f.config.n_sc);
  for (int i = 0; i < f.ref.size(); ++i) f.ref(i) = rng.uniform(0.0, 1.0);
  return f;
}

void BM_SampleChannels(benchmark::State& state) {
  const ScenarioConfig config = desk_scale_config();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_channels(config, seed++));
  }
}
BENCHMARK(BM_SampleChannels);

void BM_BeampatternTable(benchmark::State& state) {
  const Fixture f = make_fixture();
  const EffectivePrecoder prec = EffectivePrecoder::compose(f.state.bf);
  for (auto _ : state) {
    benchmark::DoNotOptimize(beampattern_table(f.ch, f.state.ris, prec, f.config.angle_grid_deg));
  }
}
BENCHMARK(BM_BeampatternTable);

void BM_CostGradW(benchmark::State& state) {
  const Fixture f = make_fixture();
  const CostOracle oracle = cost_grad_w(f.state, f.ch, f.ref, f.config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.cost(f.state.w_aux));
    benchmark::DoNotOptimize(oracle.grad(f.state.w_aux));
  }
}
BENCHMARK(BM_CostGradW);

void BM_CostGradV(benchmark::State& state) {
  const Fixture f = make_fixture();
  const CostOracle oracle = cost_grad_v(f.state, f.ch, f.ref, f.config);
  const CMat v = f.state.ris.v();
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.cost(v));
    benchmark::DoNotOptimize(oracle.grad(v));
  }
}
BENCHMARK(BM_CostGradV);

void BM_UpdateWbb(benchmark::State& state) {
  const Fixture f = make_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(update_wbb(f.state, f.config));
  }
}
BENCHMARK(BM_UpdateWbb);

void BM_RcgAuxPrecoder(benchmark::State& state) {
  Fixture f = make_fixture();
  f.config.rcg.max_iters = 25;
  const CostOracle oracle = cost_grad_w(f.state, f.ch, f.ref, f.config);
  const auto sphere = ManifoldSpec::power_sphere(
      std::sqrt(f.config.p_max_w), f.state.w_aux.rows(), f.state.w_aux.cols());
  for (auto _ : state) {
    benchmark::DoNotOptimize(rcg_minimize(oracle, sphere, f.state.w_aux, f.config.rcg));
  }
}
BENCHMARK(BM_RcgAuxPrecoder)->Unit(benchmark::kMillisecond);

void BM_DesignReference(benchmark::State& state) {
  Fixture f = make_fixture();
  f.config.ref_rounds = 2;
  f.config.rcg.max_iters = 50;
  std::uint64_t seed = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_reference(f.config, f.ch, seed++));
  }
}
BENCHMARK(BM_DesignReference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
