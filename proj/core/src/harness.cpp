#include "jcas/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "jcas/rng.hpp"

namespace jcas {

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kUsers: return "n_users";
    case SweepAxis::kRis: return "n_ris";
    case SweepAxis::kSinrThresholdDb: return "sinr_threshold_db";
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kRfChains: return "n_rf";
  }
  throw std::logic_error("unreachable axis");
}

SweepAxis axis_from_string(const std::string& name) {
  for (SweepAxis a : {SweepAxis::kUsers, SweepAxis::kRis, SweepAxis::kSinrThresholdDb,
                      SweepAxis::kSnrDb, SweepAxis::kRfChains}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis: " + name);
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  switch (axis) {
    case SweepAxis::kUsers: {
      const double gamma = base.gamma_db();
      c.n_users = static_cast<int>(std::lround(value));
      c.set_uniform_threshold_db(gamma);
      break;
    }
    case SweepAxis::kRis:
      c.n_ris = static_cast<int>(std::lround(value));
      break;
    case SweepAxis::kSinrThresholdDb:
      c.set_uniform_threshold_db(value);
      break;
    case SweepAxis::kSnrDb:
      c.set_snr_db(value);
      break;
    case SweepAxis::kRfChains:
      c.n_rf = static_cast<int>(std::lround(value));
      break;
  }
  c.validate();
  return c;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(trial_index));
}

MetricsRow run_trial(const ScenarioConfig& config, SchemeId scheme, int trial_index) {
  MetricsRow row;
  row.scheme = to_string(scheme);
  row.seed = trial_seed(config.base_seed, trial_index);
  row.k = config.n_users;
  row.r = config.n_ris;
  row.n_rf = config.n_rf;
  row.gamma_db = config.gamma_db();
  row.snr_db = config.snr_db();
  try {
    const ChannelSet ch = sample_channels(config, derive_seed(row.seed, 1));
    const ReferenceBeampattern ref = design_reference(config, ch, derive_seed(row.seed, 2));
    const SchemeOutput out = run_scheme(scheme, config, ch, ref.values, derive_seed(row.seed, 3));
    row.bp_mse_db = out.metrics.bp_mse_db;
    row.pslr_db = out.metrics.pslr_db;
    row.feasibility = out.metrics.feasibility;
    row.avg_sinr_db = out.metrics.avg_sinr_db;
    row.admm_iters = out.metrics.iterations;
    row.runtime_s = out.metrics.runtime_s;
  } catch (const std::exception&) {
    row.failed = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.bp_mse_db = row.pslr_db = row.feasibility = row.avg_sinr_db = row.runtime_s = nan;
    row.admm_iters = 0;
  }
  return row;
}

namespace {

struct Task {
  ScenarioConfig config;
  SchemeId scheme;
  int trial_index;
  double axis_value;
};

void summarize(SweepTable& table, const SweepSpec& spec) {
  for (double value : spec.values) {
    for (SchemeId scheme : spec.schemes) {
      SweepSummaryRow s;
      s.axis_value = value;
      s.scheme = to_string(scheme);
      std::vector<const MetricsRow*> rows;
      for (const MetricsRow& r : table.rows) {
        if (!r.failed && r.scheme == s.scheme && r.axis_value == value) rows.push_back(&r);
      }
      s.n_ok = static_cast<int>(rows.size());
      auto stats = [&](auto getter, double& mean, double& stdev) {
        if (rows.empty()) return;
        double sum = 0.0;
        for (auto* r : rows) sum += getter(*r);
        mean = sum / rows.size();
        double ss = 0.0;
        for (auto* r : rows) ss += (getter(*r) - mean) * (getter(*r) - mean);
        stdev = rows.size() > 1 ? std::sqrt(ss / (rows.size() - 1)) : 0.0;
      };
      stats([](const MetricsRow& r) { return r.bp_mse_db; }, s.mean_bp_mse_db, s.std_bp_mse_db);
      stats([](const MetricsRow& r) { return r.pslr_db; }, s.mean_pslr_db, s.std_pslr_db);
      stats([](const MetricsRow& r) { return r.feasibility; }, s.mean_feasibility,
            s.std_feasibility);
      stats([](const MetricsRow& r) { return r.avg_sinr_db; }, s.mean_avg_sinr_db,
            s.std_avg_sinr_db);
      table.summary.push_back(std::move(s));
    }
  }
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, int n_threads) {
  if (spec.values.empty()) throw std::invalid_argument("sweep values must be nonempty");
  if (spec.schemes.empty()) throw std::invalid_argument("sweep schemes must be nonempty");
  if (spec.trials < 1) throw std::invalid_argument("sweep needs at least one trial");

  std::vector<Task> tasks;
  for (double value : spec.values) {
    const ScenarioConfig config = apply_axis(spec.base, spec.axis, value);
    for (int t = 0; t < spec.trials; ++t) {
      for (SchemeId scheme : spec.schemes) {
        tasks.push_back({config, scheme, t, value});
      }
    }
  }

  SweepTable table;
  table.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      MetricsRow row = run_trial(tasks[i].config, tasks[i].scheme, tasks[i].trial_index);
      row.axis_value = tasks[i].axis_value;
      table.rows[i] = std::move(row);
    }
  };
  const int workers = std::max(1, std::min<int>(n_threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  summarize(table, spec);
  return table;
}

EmitFormat format_from_string(const std::string& name) {
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "json") return EmitFormat::kJson;
  throw std::invalid_argument("unknown format: " + name);
}

namespace {

constexpr const char* kCsvHeader =
    "scheme,seed,axis,k,r,n_rf,gamma_db,snr_db,bp_mse_db,pslr_db,feasibility,avg_sinr_db,"
    "admm_iters,runtime_s";

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt9(v).c_str(), nullptr);
}

}  // namespace

std::string to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    out << r.scheme << ',' << r.seed << ',' << fmt9(r.axis_value) << ',' << r.k << ',' << r.r
        << ',' << r.n_rf << ',' << fmt9(r.gamma_db) << ',' << fmt9(r.snr_db) << ','
        << fmt9(r.bp_mse_db) << ',' << fmt9(r.pslr_db) << ',' << fmt9(r.feasibility) << ','
        << fmt9(r.avg_sinr_db) << ',' << r.admm_iters << ',' << fmt9(r.runtime_s) << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<MetricsRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricsRow& r : rows) {
    nlohmann::json obj;
    obj["scheme"] = r.scheme;
    obj["seed"] = r.seed;
    obj["axis"] = round9(r.axis_value);
    obj["k"] = r.k;
    obj["r"] = r.r;
    obj["n_rf"] = r.n_rf;
    obj["gamma_db"] = round9(r.gamma_db);
    obj["snr_db"] = round9(r.snr_db);
    obj["bp_mse_db"] = round9(r.bp_mse_db);
    obj["pslr_db"] = round9(r.pslr_db);
    obj["feasibility"] = round9(r.feasibility);
    obj["avg_sinr_db"] = round9(r.avg_sinr_db);
    obj["admm_iters"] = r.admm_iters;
    obj["runtime_s"] = round9(r.runtime_s);
    obj["failed"] = r.failed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string summary_to_text(const std::vector<SweepSummaryRow>& summary) {
  std::ostringstream out;
  out << "axis_value scheme n mean_bp_mse_db std mean_pslr_db std mean_feasibility std "
         "mean_avg_sinr_db std\n";
  for (const auto& s : summary) {
    out << fmt9(s.axis_value) << ' ' << s.scheme << ' ' << s.n_ok << ' ' << fmt9(s.mean_bp_mse_db)
        << ' ' << fmt9(s.std_bp_mse_db) << ' ' << fmt9(s.mean_pslr_db) << ' '
        << fmt9(s.std_pslr_db) << ' ' << fmt9(s.mean_feasibility) << ' '
        << fmt9(s.std_feasibility) << ' ' << fmt9(s.mean_avg_sinr_db) << ' '
        << fmt9(s.std_avg_sinr_db) << '\n';
  }
  return out.str();
}

void emit(const std::vector<MetricsRow>& rows, const std::string& path, EmitFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << (format == EmitFormat::kCsv ? to_csv(rows) : to_json(rows));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
    }
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  const double v = std::stod(value, &pos);
  if (pos != value.size()) throw std::invalid_argument("config key " + key + ": bad number");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw std::invalid_argument("config key " + key + ": expected integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key " + key + ": expected true/false");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw std::invalid_argument("config key " + key + ": empty list");
  return out;
}

}  // namespace

void apply_config(ScenarioConfig& config, const std::map<std::string, std::string>& kv) {
  // Threshold/noise keys are applied after the dimensions so that a changed
  // n_users or p_max ends up reflected in the derived matrices.
  double gamma_db = config.sinr_threshold.size() > 0 ? config.gamma_db() : 10.0;
  double snr_db = config.snr_db();
  for (const auto& [key, value] : kv) {
    if (key == "n_tx") config.n_tx = parse_int(key, value);
    else if (key == "n_rf") config.n_rf = parse_int(key, value);
    else if (key == "n_sc") config.n_sc = parse_int(key, value);
    else if (key == "n_users") config.n_users = parse_int(key, value);
    else if (key == "n_ris") config.n_ris = parse_int(key, value);
    else if (key == "targets_deg") config.target_angles_deg = parse_list(key, value);
    else if (key == "p_max_dbm") config.p_max_w = dbm_to_watts(parse_double(key, value));
    else if (key == "gamma_db") gamma_db = parse_double(key, value);
    else if (key == "snr_db") snr_db = parse_double(key, value);
    else if (key == "grid_step_deg") config.angle_grid_deg = uniform_grid_deg(parse_double(key, value));
    else if (key == "lobe_halfwidth_deg") config.lobe_halfwidth_deg = parse_double(key, value);
    else if (key == "n_clusters") config.n_clusters = parse_int(key, value);
    else if (key == "n_paths") config.n_paths = parse_int(key, value);
    else if (key == "rcg_max_iters") config.rcg.max_iters = parse_int(key, value);
    else if (key == "rcg_grad_tol") config.rcg.grad_tol = parse_double(key, value);
    else if (key == "armijo_c1") config.rcg.armijo_c1 = parse_double(key, value);
    else if (key == "armijo_shrink") config.rcg.armijo_shrink = parse_double(key, value);
    else if (key == "armijo_initial_step") config.rcg.armijo_initial_step = parse_double(key, value);
    else if (key == "pr_plus") config.rcg.pr_plus = parse_bool(key, value);
    else if (key == "admm_max_iters") config.admm_max_iters = parse_int(key, value);
    else if (key == "admm_tol_rel") config.admm_tol_rel = parse_double(key, value);
    else if (key == "seed") config.base_seed = std::stoull(value);
    else if (key == "ref_per_subcarrier") config.ref_per_subcarrier = parse_bool(key, value);
    else if (key == "ref_rounds") config.ref_rounds = parse_int(key, value);
    else if (key == "subcarrier_spacing_hz") config.subcarrier_spacing_hz = parse_double(key, value);
    else if (key == "symbol_length") config.symbol_length = parse_int(key, value);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  config.set_uniform_threshold_db(gamma_db);
  config.set_snr_db(snr_db);
  config.validate();
}

}  // namespace jcas
