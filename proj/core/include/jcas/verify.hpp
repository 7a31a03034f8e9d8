#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jcas/manifold.hpp"

namespace jcas {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;  // tolerances and measured values
};

struct VerifyOptions {
  // Reduced instance/seed counts for quick interactive runs.
  bool small_scale = false;
  // Test hook: wraps the phase-shift cost oracle before gradient checking.
  std::function<CostOracle(const CostOracle&)> ris_oracle_wrapper;
};

// Gradient consistency of the three subproblem oracles against central
// finite differences (h = 1e-6, 20 coordinates, relative error <= 1e-4 after
// a single fitted positive scale).
SuiteResult verify_gradient_w(const VerifyOptions& options = {});
SuiteResult verify_gradient_wrf(const VerifyOptions& options = {});
SuiteResult verify_gradient_v(const VerifyOptions& options = {});

// Manifold feasibility of every iterate of a full solver run plus strict
// tangency of the projected gradients.
SuiteResult verify_manifold_invariants(const VerifyOptions& options = {});

// Closed-form baseband update against a dense normal-equation solve.
SuiteResult verify_wbb_closed_form(const VerifyOptions& options = {});

// Sign equivalence of the linearized SINR margin with the direct SINR test.
SuiteResult verify_penalty_equivalence(const VerifyOptions& options = {});

// Non-increasing inner cost traces and the two-element circle toy problem
// against an exhaustive 0.1-degree grid search.
SuiteResult verify_rcg_descent(const VerifyOptions& options = {});

// Primal residual and objective decay over full solver runs.
SuiteResult verify_admm_convergence(const VerifyOptions& options = {});

// Paired-seed wins of the optimized-RIS schemes over their random-RIS twins.
SuiteResult verify_ris_benefit_trend(const VerifyOptions& options = {});

// Monotone mean MSE in the user count and mean feasibility in SNR.
SuiteResult verify_monotone_trends(const VerifyOptions& options = {});

// DFT unitarity, the two total-power routes, and pslr/feasibility against
// brute-force oracles.
SuiteResult verify_metric_plumbing(const VerifyOptions& options = {});

// Bit-identical repeated sweeps (runtime column excluded).
SuiteResult verify_sweep_determinism(const VerifyOptions& options = {});

// All suites in a fixed order.
std::vector<SuiteResult> run_verification(const VerifyOptions& options = {});

}  // namespace jcas
