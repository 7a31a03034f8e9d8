#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jcas/manifold.hpp"
#include "jcas/metrics.hpp"

namespace jcas {

// Variables of the alternating solver. `w_aux` is the auxiliary full-matrix
// precoder on the power sphere; the coupling W = W_rf (F^H ⊗ I) W_bb is
// enforced through the dual matrix and the rho1 penalty.
struct SolverState {
  CMat w_aux;            // NcNt x NcK
  HybridBeamformer bf;
  RisPhases ris;
  CMat dual;             // NcNt x NcK
  double rho1 = 0.1;
  double rho2 = 0.1;
  double rho3 = 0.1;
  int iter = 0;
};

// gamma' of user k on subcarrier n: the linearized SINR margin numerator
//   (1 + Gamma) |h^H w_k|^2 - Gamma sum_i |h^H w_i|^2,
// whose sign against sigma^2 Gamma matches the sign of (sinr - Gamma)
// whenever interference + noise is positive.
double gamma_prime(const ChannelSet& ch, const RisPhases& ris, const std::vector<CMat>& w_blocks,
                   int k, int n, double gamma_kn);

// Subproblem cost oracles. All gradients follow the convention
// f(X + tD) = f(X) + t Re<grad, D> + O(t^2) and were validated against
// central finite differences (the scale factor is exactly one).

// Auxiliary-precoder cost over the power sphere: beampattern deviation on the
// diagonal blocks, rho1/2 coupling to the hybrid factorization on the full
// matrix, rho2 hinge penalty for the per-(user, subcarrier) SINR margins.
CostOracle cost_grad_w(const SolverState& state, const ChannelSet& ch, const RMat& ref_bp,
                       const ScenarioConfig& config);

// RF-precoder coupling cost over the complex circle (Nt x Nrf).
CostOracle cost_grad_wrf(const SolverState& state, const ScenarioConfig& config);

// Exact per-subcarrier minimizer of the coupling cost for the baseband
// precoders: bb_n = (rf^H rf)^{-1} M_nn with M = (W_rf (F^H ⊗ I))^H (W + Λ/ρ1).
// Throws when rf^H rf is numerically singular (condition number > 1e12).
std::vector<CMat> update_wbb(const SolverState& state, const ScenarioConfig& config);

// Phase-shift cost over the complex circle (length R): beampattern deviation
// through C_{psi,n} plus the rho3 hinge penalty of the transformed SINR.
CostOracle cost_grad_v(const SolverState& state, const ChannelSet& ch, const RMat& ref_bp,
                       const ScenarioConfig& config);

// Same cost family for a plain per-subcarrier digital precoder, horizontally
// stacked as an Nt x (Nc K) matrix on the power sphere. Used by the
// fully-digital baseline and the sensing-only reference design
// (rho_sinr = 0 drops the penalty term).
CostOracle cost_grad_digital(const ChannelSet& ch, const RisPhases& ris, const RMat& ref_bp,
                             const ScenarioConfig& config, double rho_sinr);

// Phase-shift cost against explicit precoder blocks (one Nt x K per
// subcarrier) instead of a SolverState.
CostOracle cost_grad_ris(const ChannelSet& ch, const std::vector<CMat>& w_blocks,
                         const RMat& ref_bp, const ScenarioConfig& config, double rho_sinr);

// Dual ascent: Lambda + rho1 (W - W_rf (F^H ⊗ I) W_bb).
CMat dual_update(const SolverState& state);

// Penalty schedule step: min(10 rho, 1000).
double penalty_update(double rho);

// Compact diagnostics of one inner RCG run.
struct RcgTrace {
  std::vector<double> cost_history;
  int iterations = 0;
  double final_grad_norm = 0.0;
  double max_constraint_violation = 0.0;
  double max_tangency_residual = 0.0;
};

RcgTrace make_trace(const RcgResult& r);

struct AdmmIterRecord {
  double objective = 0.0;        // beampattern MSE (linear) of the composed precoder
  double primal_residual = 0.0;  // ||W - W_rf (F^H ⊗ I) W_bb||_F
  double feasibility = 0.0;
  RcgTrace w_trace;
  RcgTrace rf_trace;
  RcgTrace v_trace;  // left empty when the RIS is frozen
};

struct AdmmOptions {
  bool optimize_ris = true;
  // Initial phase vector; kept frozen when optimize_ris is false. A random
  // draw from the init seed is used when absent.
  std::optional<RisPhases> initial_ris;
  double obj_rel_tol = 1e-4;  // per-iteration relative objective change
  int obj_window = 3;         // consecutive iterations below obj_rel_tol
};

struct AdmmResult {
  SolverState state;  // best recorded iterate (see below)
  std::vector<AdmmIterRecord> history;
  int iterations = 0;
  bool converged = false;
  int best_iteration = 0;  // 1-based iteration the returned state comes from
};

// Alternating loop: RCG for W on the sphere, RCG for the RF precoder on the
// circle, closed-form baseband update, RCG for the RIS phases on the circle,
// dual ascent, capped x10 penalty ramp. Stops early once the primal residual
// drops below admm_tol_rel * ||W||_F and the objective change stays below
// obj_rel_tol for obj_window consecutive iterations.
//
// The returned state is the recorded iterate that ranks best under the
// problem's own preference order (highest SINR feasibility, then lowest
// beampattern objective); with a hinge penalty the margins of the very last
// iterate sit wherever the final alternation step left them, so reporting the
// best constrained candidate is the faithful readout. The history always
// covers every iteration.
AdmmResult admm_solve(const ScenarioConfig& config, const ChannelSet& ch, const RMat& ref_bp,
                      std::uint64_t init_seed, const AdmmOptions& options = {});

}  // namespace jcas
