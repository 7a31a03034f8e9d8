#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "jcas/baselines.hpp"
#include "jcas/refbp.hpp"

namespace jcas {

enum class SweepAxis { kUsers, kRis, kSinrThresholdDb, kSnrDb, kRfChains };

std::string to_string(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);  // throws on unknown names

struct SweepSpec {
  ScenarioConfig base;
  SweepAxis axis = SweepAxis::kUsers;
  std::vector<double> values;
  int trials = 20;
  std::vector<SchemeId> schemes;
};

struct MetricsRow {
  std::string scheme;
  std::uint64_t seed = 0;
  double axis_value = std::numeric_limits<double>::quiet_NaN();
  int k = 0;
  int r = 0;
  int n_rf = 0;
  double gamma_db = 0.0;
  double snr_db = 0.0;
  double bp_mse_db = 0.0;
  double pslr_db = 0.0;
  double feasibility = 0.0;
  double avg_sinr_db = 0.0;
  int admm_iters = 0;
  double runtime_s = 0.0;
  bool failed = false;  // metrics are NaN when set
};

// Returns `base` with one axis replaced. Resizing the user count refills the
// threshold matrix at the base gamma.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

// Trial seed: derive_seed(base_seed, trial_index) (see rng.hpp for the mix).
std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index);

// Samples channels, designs the reference, runs the scheme and fills one row.
// Failures are recorded in the row instead of propagating.
MetricsRow run_trial(const ScenarioConfig& config, SchemeId scheme, int trial_index);

struct SweepSummaryRow {
  double axis_value = 0.0;
  std::string scheme;
  int n_ok = 0;
  double mean_bp_mse_db = 0.0, std_bp_mse_db = 0.0;
  double mean_pslr_db = 0.0, std_pslr_db = 0.0;
  double mean_feasibility = 0.0, std_feasibility = 0.0;
  double mean_avg_sinr_db = 0.0, std_avg_sinr_db = 0.0;
};

struct SweepTable {
  std::vector<MetricsRow> rows;           // |values| x trials x |schemes|
  std::vector<SweepSummaryRow> summary;   // per (axis value, scheme)
};

// Runs every (value, trial, scheme) combination. Trials may execute on
// n_threads workers; rows land in pre-assigned slots so the output order is
// independent of scheduling.
SweepTable run_sweep(const SweepSpec& spec, int n_threads = 1);

enum class EmitFormat { kCsv, kJson };
EmitFormat format_from_string(const std::string& name);

std::string to_csv(const std::vector<MetricsRow>& rows);
std::string to_json(const std::vector<MetricsRow>& rows);
std::string summary_to_text(const std::vector<SweepSummaryRow>& summary);
void emit(const std::vector<MetricsRow>& rows, const std::string& path, EmitFormat format);

// Flat `key = value` scenario files; '#' starts a comment. Unknown keys are
// rejected. See tools/configs for the known keys.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(ScenarioConfig& config, const std::map<std::string, std::string>& kv);

}  // namespace jcas
