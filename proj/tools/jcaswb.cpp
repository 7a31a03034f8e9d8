// jcaswb: command-line workbench for the RIS-assisted mmWave OFDM joint
// communication and sensing simulator. Subcommands:
//   run          one scenario/scheme trial, prints a metrics row
//   sweep        seeded Monte-Carlo sweep over one scenario axis
//   gradcheck    verification suites (gradients, invariants, trends)
//   refbp        dump the reference beampattern for a scenario
//   convergence  dump the per-iteration solver history

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jcas/harness.hpp"
#include "jcas/verify.hpp"

namespace {

struct ScenarioFlags {
  std::string config_path;
  bool desk = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags* flags) {
  cmd->add_option("--config", flags->config_path, "scenario config file (key = value lines)");
  cmd->add_flag("--desk", flags->desk, "start from the small verification scale");
  cmd->add_option("--seed", flags->seed, "override the base seed")
      ->each([flags](const std::string&) { flags->seed_set = true; });
}

jcas::ScenarioConfig resolve_scenario(const ScenarioFlags& flags) {
  jcas::ScenarioConfig config =
      flags.desk ? jcas::desk_scale_config() : jcas::paper_scale_config();
  if (!flags.config_path.empty()) {
    jcas::apply_config(config, jcas::parse_config_file(flags.config_path));
  }
  if (flags.seed_set) config.base_seed = flags.seed;
  config.validate();
  return config;
}

std::vector<jcas::SchemeId> parse_schemes(const std::string& csv) {
  std::vector<jcas::SchemeId> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(jcas::scheme_from_string(item));
  }
  if (out.empty()) throw CLI::ValidationError("--scheme", "no schemes given");
  return out;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted mmWave OFDM joint communication and sensing workbench"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one scenario trial and print its metrics row");
  ScenarioFlags run_flags;
  add_scenario_flags(run_cmd, &run_flags);
  std::string run_scheme_name = "proposed";
  int run_trial_index = 0;
  std::string run_out;
  std::string run_format = "csv";
  run_cmd->add_option("--scheme", run_scheme_name, "scheme id")->capture_default_str();
  run_cmd->add_option("--trial", run_trial_index, "trial index")->capture_default_str();
  run_cmd->add_option("--out", run_out, "write the row to this file instead of stdout");
  run_cmd->add_option("--format", run_format, "csv|json")->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over one scenario axis");
  ScenarioFlags sweep_flags;
  add_scenario_flags(sweep_cmd, &sweep_flags);
  std::string axis_name = "n_users";
  std::vector<double> sweep_values;
  int sweep_trials = 20;
  std::string sweep_schemes = "proposed,fdb_ris,fdb_rnd_ris,hb_rnd_ris";
  std::string sweep_out;
  std::string sweep_format = "csv";
  int sweep_parallel = 1;
  sweep_cmd->add_option("--axis", axis_name, "n_users|n_ris|sinr_threshold_db|snr_db|n_rf")
      ->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--trials", sweep_trials, "trials per point")->capture_default_str();
  sweep_cmd->add_option("--scheme", sweep_schemes, "comma-separated scheme ids")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output file (stdout when omitted)");
  sweep_cmd->add_option("--format", sweep_format, "csv|json")->capture_default_str();
  sweep_cmd->add_option("--parallel", sweep_parallel, "worker threads")->capture_default_str();

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "run the verification suites");
  std::string grad_scale = "default";
  grad_cmd->add_option("--scale", grad_scale, "small|default")->capture_default_str();

  // refbp
  auto* ref_cmd = app.add_subcommand("refbp", "dump the reference beampattern");
  ScenarioFlags ref_flags;
  add_scenario_flags(ref_cmd, &ref_flags);
  std::string ref_out;
  ref_cmd->add_option("--out", ref_out, "output CSV (stdout when omitted)");

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "dump the per-iteration solver history");
  ScenarioFlags conv_flags;
  add_scenario_flags(conv_cmd, &conv_flags);
  std::string conv_scheme_name = "proposed";
  int conv_trial_index = 0;
  std::string conv_out;
  conv_cmd->add_option("--scheme", conv_scheme_name, "proposed|hb_rnd_ris|fdb_ris|fdb_rnd_ris")
      ->capture_default_str();
  conv_cmd->add_option("--trial", conv_trial_index, "trial index")->capture_default_str();
  conv_cmd->add_option("--out", conv_out, "output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const jcas::ScenarioConfig config = resolve_scenario(run_flags);
      const jcas::MetricsRow row =
          jcas::run_trial(config, jcas::scheme_from_string(run_scheme_name), run_trial_index);
      const auto format = jcas::format_from_string(run_format);
      write_or_print(format == jcas::EmitFormat::kCsv ? jcas::to_csv({row}) : jcas::to_json({row}),
                     run_out);
      return row.failed ? 1 : 0;
    }

    if (sweep_cmd->parsed()) {
      jcas::SweepSpec spec;
      spec.base = resolve_scenario(sweep_flags);
      spec.axis = jcas::axis_from_string(axis_name);
      spec.values = sweep_values;
      spec.trials = sweep_trials;
      spec.schemes = parse_schemes(sweep_schemes);
      const jcas::SweepTable table = jcas::run_sweep(spec, sweep_parallel);
      const auto format = jcas::format_from_string(sweep_format);
      if (sweep_out.empty()) {
        std::cout << (format == jcas::EmitFormat::kCsv ? jcas::to_csv(table.rows)
                                                       : jcas::to_json(table.rows));
      } else {
        jcas::emit(table.rows, sweep_out, format);
      }
      std::cerr << "\nper-point summary (mean/std over trials):\n"
                << jcas::summary_to_text(table.summary);
      return 0;
    }

    if (grad_cmd->parsed()) {
      if (grad_scale != "small" && grad_scale != "default") {
        throw std::invalid_argument("--scale must be small or default");
      }
      jcas::VerifyOptions options;
      options.small_scale = grad_scale == "small";
      bool all_pass = true;
      for (const jcas::SuiteResult& res : jcas::run_verification(options)) {
        all_pass = all_pass && res.pass;
        std::printf("%-22s %s  %s\n", res.name.c_str(), res.pass ? "PASS" : "FAIL",
                    res.detail.c_str());
      }
      std::printf("overall: %s\n", all_pass ? "PASS" : "FAIL");
      return all_pass ? 0 : 1;
    }

    if (ref_cmd->parsed()) {
      const jcas::ScenarioConfig config = resolve_scenario(ref_flags);
      const jcas::ChannelSet ch =
          jcas::sample_channels(config, jcas::derive_seed(config.base_seed, 1));
      const jcas::ReferenceBeampattern ref =
          jcas::design_reference(config, ch, jcas::derive_seed(config.base_seed, 2));
      std::ostringstream out;
      out << "angle_deg,subcarrier,mask,reference\n";
      for (int n = 0; n < config.n_sc; ++n) {
        for (int g = 0; g < config.n_grid(); ++g) {
          char buf[96];
          std::snprintf(buf, sizeof(buf), "%.9g,%d,%.0f,%.9g\n", config.angle_grid_deg[g], n,
                        ref.mask(g), ref.values(g, n));
          out << buf;
        }
      }
      write_or_print(out.str(), ref_out);
      return 0;
    }

    if (conv_cmd->parsed()) {
      const jcas::ScenarioConfig config = resolve_scenario(conv_flags);
      const std::uint64_t seed = jcas::trial_seed(config.base_seed, conv_trial_index);
      const jcas::ChannelSet ch = jcas::sample_channels(config, jcas::derive_seed(seed, 1));
      const jcas::ReferenceBeampattern ref =
          jcas::design_reference(config, ch, jcas::derive_seed(seed, 2));
      const jcas::SchemeOutput out = jcas::run_scheme(
          jcas::scheme_from_string(conv_scheme_name), config, ch, ref.values,
          jcas::derive_seed(seed, 3));
      std::ostringstream text;
      text << "iteration,objective_mse,primal_residual\n";
      for (std::size_t i = 0; i < out.run.objective_history.size(); ++i) {
        char buf[96];
        const double resid = i < out.run.residual_history.size()
                                 ? out.run.residual_history[i]
                                 : std::numeric_limits<double>::quiet_NaN();
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", i + 1, out.run.objective_history[i],
                      resid);
        text << buf;
      }
      write_or_print(text.str(), conv_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
