#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jcas/solver.hpp"

namespace jcas {

// Compared schemes: the proposed hybrid design and the three benchmarks.
enum class SchemeId { kProposed, kFdbRis, kFdbRndRis, kHbRndRis };

std::string to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& name);  // throws on unknown names
const std::vector<SchemeId>& all_schemes();

// Phases theta_r i.i.d. uniform on [0, 2 pi).
RisPhases random_ris(int r, std::uint64_t seed);

// Final per-subcarrier precoder blocks plus the RIS configuration of one run.
struct SchemeRun {
  std::vector<CMat> blocks;  // per subcarrier: Nt x K
  RisPhases ris;
  int iterations = 0;
  std::vector<double> objective_history;
  std::vector<double> residual_history;  // empty for fully-digital schemes
};

// Fully-digital baseline: per-subcarrier precoders on the joint power sphere,
// alternated with the RIS phases when optimize_ris is set. When it is not,
// the phase vector stays at its seeded random draw.
SchemeRun solve_fdb(const ScenarioConfig& config, const ChannelSet& ch, const RMat& ref_bp,
                    bool optimize_ris, std::uint64_t seed);

struct SchemeMetrics {
  double bp_mse_linear = 0.0;
  double bp_mse_db = 0.0;
  double pslr_db = 0.0;
  double feasibility = 0.0;
  double avg_sinr_db = 0.0;
  int iterations = 0;
  double runtime_s = 0.0;
};

struct SchemeOutput {
  SchemeRun run;
  SchemeMetrics metrics;
};

SchemeMetrics compute_metrics(const ScenarioConfig& config, const ChannelSet& ch,
                              const SchemeRun& run, const RMat& ref_bp);

// Dispatches one scheme on a shared (channel, reference) pair and reports its
// metrics. All schemes consume the very same inputs, so paired comparisons
// across schemes are valid.
SchemeOutput run_scheme(SchemeId id, const ScenarioConfig& config, const ChannelSet& ch,
                        const RMat& ref_bp, std::uint64_t seed);

}  // namespace jcas
