#include "nmsim/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nmsim/errors.hpp"
#include "nmsim/ising.hpp"
#include "nmsim/measures.hpp"
#include "nmsim/tomography.hpp"

namespace nmsim::cli {

namespace {

using dynamics::NoiseModel;
using dynamics::Regime;
using dynamics::SimConfig;
using dynamics::StepRecord;
using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + text + "' is not a number");
  }
  if (used != t.size() || !std::isfinite(v)) throw ConfigError(key + ": '" + text + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + text + "' is not an integer");
  }
  if (used != t.size()) throw ConfigError(key + ": '" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

Regime parse_regime(const std::string& text) {
  if (text == "coherent") return Regime::Coherent;
  if (text == "reset") return Regime::Reset;
  throw ConfigError("regime: expected 'coherent' or 'reset', got '" + text + "'");
}

const std::vector<std::string>& noise_knob_keys() {
  static const std::vector<std::string> keys{"bs1_reflect_h", "bs1_reflect_v",       "bs2_reflect_h",
                                             "bs2_reflect_v", "spurious_fraction", "phase_flip_fraction",
                                             "phase_pol_offset"};
  return keys;
}

void apply_noise_knobs(NoiseModel& n, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "bs1_reflect_h") n.bs1_reflect_h = parse_double(key, value);
    else if (key == "bs1_reflect_v") n.bs1_reflect_v = parse_double(key, value);
    else if (key == "bs2_reflect_h") n.bs2_reflect_h = parse_double(key, value);
    else if (key == "bs2_reflect_v") n.bs2_reflect_v = parse_double(key, value);
    else if (key == "spurious_fraction") n.spurious_fraction = parse_double(key, value);
    else if (key == "phase_flip_fraction") n.phase_flip_fraction = parse_double(key, value);
    else if (key == "phase_pol_offset") n.phase_pol_offset = parse_double(key, value);
  }
}

std::ostream* open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return &fallback;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  return &file;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

void print_matrix(std::ostream& out, const std::string& title, const Matrix& m) {
  out << title << "\n";
  char buf[64];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << " ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "  %+.6f%+.6fi", m(r, c).real(), m(r, c).imag());
      out << buf;
    }
    out << "\n";
  }
}

json config_json(const SimConfig& cfg) {
  json j;
  j["regime"] = dynamics::to_string(cfg.regime);
  j["steps"] = cfg.steps;
  j["alpha"] = cfg.alpha;
  j["phases"] = cfg.phases;
  j["seed"] = cfg.seed;
  j["record_tomography"] = cfg.record_tomography;
  j["tomography_counts"] = cfg.tomography_counts;
  json n;
  n["enabled"] = cfg.noise.enabled;
  if (cfg.noise.enabled) {
    n["bs1_reflect_h"] = cfg.noise.bs1_reflect_h;
    n["bs1_reflect_v"] = cfg.noise.bs1_reflect_v;
    n["bs2_reflect_h"] = cfg.noise.bs2_reflect_h;
    n["bs2_reflect_v"] = cfg.noise.bs2_reflect_v;
    n["spurious_fraction"] = cfg.noise.spurious_fraction;
    n["phase_flip_fraction"] = cfg.noise.phase_flip_fraction;
    n["phase_pol_offset"] = cfg.noise.phase_pol_offset;
  }
  j["noise"] = n;
  return j;
}

// Options shared by every subcommand that builds a SimConfig.
struct RunOptions {
  std::string config_path;
  std::string regime;
  int steps = 0;
  double alpha = 0.0;
  std::string phases;
  bool ideal = false;
  std::string noise;
  std::uint64_t seed = 0;
  std::uint64_t tomography_counts = 0;
  bool record_tomography = false;

  CLI::Option* o_regime = nullptr;
  CLI::Option* o_steps = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_phases = nullptr;
  CLI::Option* o_noise = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_tcounts = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "flat key = value configuration file");
    o_regime = app->add_option("--regime", regime, "coherent | reset");
    o_steps = app->add_option("--steps", steps, "number of steps");
    o_alpha = app->add_option("--alpha", alpha, "environment amplitude on |r>, in [0, 1]");
    o_phases = app->add_option("--phases", phases, "comma-separated splitter phases per step (radians)");
    app->add_flag("--ideal", ideal, "disable all noise");
    o_noise = app->add_option("--noise", noise, "off | paper-defaults | PATH");
    o_seed = app->add_option("--seed", seed, "seed for sampled tomography counts");
    app->add_flag("--tomography", record_tomography, "record reconstructed S-A and E states");
    o_tcounts = app->add_option("--tomography-counts", tomography_counts,
                                "counts per projector for recorded tomography (0 = noiseless)");
    app->get_option("--ideal")->excludes(o_noise);
  }

  SimConfig build() const {
    SimConfig cfg;
    if (!config_path.empty()) apply_config(cfg, read_key_value_file(config_path));
    if (o_regime->count()) cfg.regime = parse_regime(regime);
    if (o_steps->count()) cfg.steps = steps;
    if (o_alpha->count()) cfg.alpha = alpha;
    if (o_phases->count()) cfg.phases = parse_list(phases);
    if (ideal) cfg.noise = NoiseModel::off();
    if (o_noise->count()) cfg.noise = parse_noise_option(noise);
    if (o_seed->count()) cfg.seed = seed;
    if (record_tomography) cfg.record_tomography = true;
    if (o_tcounts->count()) {
      cfg.tomography_counts = tomography_counts;
      cfg.record_tomography = true;
    }
    try {
      cfg.validate();
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
    return cfg;
  }
};

void emit_run(std::ostream& out, const std::string& format, const SimConfig& cfg,
              const std::vector<StepRecord>& records) {
  if (format == "json") write_json(out, cfg, records);
  else write_csv(out, records);
}

int cmd_run(const RunOptions& opts, const std::string& out_path, const std::string& format, std::ostream& out) {
  const SimConfig cfg = opts.build();
  const auto records = dynamics::run(cfg);
  check_run_invariants(cfg, records);
  std::ofstream file;
  emit_run(*open_output(out_path, file, out), format, cfg, records);
  return 0;
}

int cmd_compile_ising(double phi, int n, double tau, const std::string& format, std::ostream& out) {
  const ising::CompiledGate g = ising::compile_controlled_rotation(phi, n, tau);
  const ising::IsingParams cyc = ising::to_cycle_units(g.params);
  const double nu0 = ising::block_frequency(g.params, 0), nu1 = ising::block_frequency(g.params, 1);
  if (format == "json") {
    json j;
    j["phi"] = phi;
    j["n"] = n;
    j["tau"] = tau;
    j["params"] = {{"J", g.params.J},
                   {"eps_S_x", g.params.eps_S_x},
                   {"eps_S_y", g.params.eps_S_y},
                   {"eps_S_z", g.params.eps_S_z},
                   {"eps_E_x", g.params.eps_E_x},
                   {"eps_E_z", g.params.eps_E_z}};
    j["params_cycle_units"] = {{"J", cyc.J}, {"eps_S_y", cyc.eps_S_y}, {"eps_S_z", cyc.eps_S_z}};
    j["nu0"] = nu0;
    j["nu1"] = nu1;
    j["residual_u0"] = g.residual_u0;
    j["residual_u1"] = g.residual_u1;
    j["blockwise_residual"] = g.blockwise_residual;
    j["global_residual"] = g.global_residual;
    j["relative_block_phase"] = g.relative_block_phase;
    j["u0"] = matrix_json(g.u0);
    j["u1"] = matrix_json(g.u1);
    j["conditional"] = matrix_json(g.conditional);
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "phi                   " << format_double(phi) << "\n"
      << "n                     " << n << "\n"
      << "tau                   " << format_double(tau) << "\n"
      << "J                     " << format_double(g.params.J) << "\n"
      << "eps_S_x               " << format_double(g.params.eps_S_x) << "\n"
      << "eps_S_y               " << format_double(g.params.eps_S_y) << "\n"
      << "eps_S_z               " << format_double(g.params.eps_S_z) << "\n"
      << "eps_E_x               " << format_double(g.params.eps_E_x) << "\n"
      << "J (cycle units)       " << format_double(cyc.J) << "\n"
      << "eps_S_y (cycle units) " << format_double(cyc.eps_S_y) << "\n"
      << "nu0                   " << format_double(nu0) << "\n"
      << "nu1                   " << format_double(nu1) << "\n"
      << "residual_u0           " << format_double(g.residual_u0) << "\n"
      << "residual_u1           " << format_double(g.residual_u1) << "\n"
      << "blockwise_residual    " << format_double(g.blockwise_residual) << "\n"
      << "global_residual       " << format_double(g.global_residual) << "\n"
      << "relative_block_phase  " << format_double(g.relative_block_phase) << "\n";
  print_matrix(out, "u0", g.u0);
  print_matrix(out, "u1", g.u1);
  print_matrix(out, "conditional (S-major, E control)", g.conditional);
  return 0;
}

int cmd_tomo_demo(const RunOptions& opts, const std::string& state, long long counts, std::uint64_t seed,
                  std::ostream& out) {
  namespace tomo = tomography;
  if (counts < 0) throw ConfigError("--counts must be non-negative");
  const bool noisy = counts > 0;
  const std::uint64_t total = noisy ? static_cast<std::uint64_t>(counts) : 10000;
  const std::optional<std::uint64_t> poisson = noisy ? std::optional(seed) : std::nullopt;
  const auto sa_set = tomo::ProjectorSet::two_qubit();

  Matrix truth;
  Matrix raw;
  if (state == "bell" || state == "mixed") {
    truth = state == "bell" ? states::phi_plus().projector() : 0.25 * Matrix::identity(4);
    raw = tomo::reconstruct_linear(tomo::simulate_counts(truth, sa_set, total, poisson), sa_set);
  } else if (state.rfind("step-", 0) == 0) {
    const long long k = parse_integer("--state", state.substr(5));
    if (k < 0) throw ConfigError("--state: step index must be non-negative");
    SimConfig cfg = opts.build();
    cfg.steps = std::max<int>(cfg.steps, static_cast<int>(k));
    if (!cfg.phases.empty() && cfg.phases.size() < static_cast<std::size_t>(cfg.steps))
      throw ConfigError("--phases: not enough values for step " + std::to_string(k));
    const auto records = dynamics::run(cfg);
    const DensityMatrix& joint = records.at(static_cast<std::size_t>(k)).rho_ase;
    truth = partial_trace(joint, {Subsystem::A, Subsystem::S}).matrix();
    const auto joint_set = tomo::joint_projectors_for_sa(sa_set);
    raw = tomo::reconstruct_linear(
        tomo::marginalize_counts_for_sa(tomo::simulate_counts(joint, joint_set, total, poisson), sa_set), sa_set);
  } else {
    throw ConfigError("--state: unknown state '" + state + "' (bell | mixed | step-K)");
  }
  const DensityMatrix physical = tomo::project_to_physical(raw, {Subsystem::A, Subsystem::S});

  out << "state           " << state << "\n"
      << "counts          " << (noisy ? std::to_string(total) : std::string("noiseless")) << "\n";
  if (noisy) out << "seed            " << seed << "\n";
  out << "fidelity        " << format_double(measures::state_fidelity(truth, physical.matrix())) << "\n"
      << "trace_distance  " << format_double(trace_distance(truth, physical.matrix())) << "\n"
      << "eof_true        " << format_double(measures::eof(DensityMatrix(truth, {Subsystem::A, Subsystem::S})))
      << "\n"
      << "eof_recon       " << format_double(measures::eof(physical)) << "\n";
  print_matrix(out, "true", truth);
  print_matrix(out, "reconstructed (linear inversion)", raw);
  print_matrix(out, "reconstructed (physical)", physical.matrix());
  print_matrix(out, "reconstructed (Bell basis)", tomo::to_bell_basis(physical.matrix()));
  return 0;
}

int cmd_sweep(const RunOptions& opts, const std::string& param, const std::string& values_text,
              const std::string& out_dir, const std::string& out_path, std::ostream& out) {
  const SimConfig base = opts.build();
  const std::vector<double> values = parse_list(values_text);
  if (values.empty()) throw ConfigError("--values: empty list");
  if (param != "alpha" && param != "phase" && param != "phase_pol_offset")
    throw ConfigError("--param: expected alpha | phase | phase_pol_offset");

  std::vector<SimConfig> configs;
  for (double v : values) {
    SimConfig c = base;
    if (param == "alpha") c.alpha = v;
    else if (param == "phase") c.phases.assign(static_cast<std::size_t>(c.steps), v);
    else {
      if (!c.noise.enabled) c.noise = NoiseModel::calibrated();
      c.noise.phase_pol_offset = v;
    }
    try {
      c.validate();
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
    configs.push_back(std::move(c));
  }
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  std::vector<std::future<std::vector<StepRecord>>> jobs;
  for (const auto& c : configs)
    jobs.push_back(std::async(std::launch::async, [c] {
      auto r = dynamics::run(c);
      check_run_invariants(c, r);
      return r;
    }));

  std::ofstream file;
  std::ostream& sink = *open_output(out_path, file, out);
  sink << "param,value,revivals,eof_min,eof_final,file\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto records = jobs[i].get();
    std::string path;
    if (!out_dir.empty()) {
      path = (std::filesystem::path(out_dir) / (param + "_" + std::to_string(i) + ".csv")).string();
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw ConfigError("cannot open output file '" + path + "'");
      write_csv(f, records);
    }
    double eof_min = records.front().eof_sa;
    for (const auto& r : records) eof_min = std::min(eof_min, r.eof_sa);
    sink << param << "," << format_double(values[i]) << "," << dynamics::count_revivals(records, 1e-9) << ","
         << format_double(eof_min) << "," << format_double(records.back().eof_sa) << "," << path << "\n";
  }
  return 0;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_key_values(in, path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double("list", item));
  }
  return out;
}

NoiseModel parse_noise_option(const std::string& value) {
  if (value == "off") return NoiseModel::off();
  if (value == "paper-defaults") return NoiseModel::calibrated();
  const auto kv = read_key_value_file(value);
  NoiseModel n = NoiseModel::calibrated();
  for (const auto& [key, v] : kv)
    if (std::find(noise_knob_keys().begin(), noise_knob_keys().end(), key) == noise_knob_keys().end())
      throw ConfigError(value + ": unknown noise key '" + key + "'");
  apply_noise_knobs(n, kv);
  return n;
}

void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& kv) {
  bool any_knob = false;
  for (const auto& [key, value] : kv) {
    if (key == "regime") cfg.regime = parse_regime(value);
    else if (key == "steps") cfg.steps = static_cast<int>(parse_integer(key, value));
    else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "phases") cfg.phases = parse_list(value);
    else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "record_tomography") cfg.record_tomography = parse_bool(key, value);
    else if (key == "tomography_counts") {
      const long long c = parse_integer(key, value);
      if (c < 0) throw ConfigError("tomography_counts must be non-negative");
      cfg.tomography_counts = static_cast<std::uint64_t>(c);
    } else if (key == "noise") {
      // handled below so knob keys can refine it
    } else if (std::find(noise_knob_keys().begin(), noise_knob_keys().end(), key) != noise_knob_keys().end()) {
      any_knob = true;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  const auto mode = kv.find("noise");
  if (mode != kv.end()) {
    if (mode->second == "off") {
      if (any_knob) throw ConfigError("noise knobs given together with 'noise = off'");
      cfg.noise = NoiseModel::off();
    } else if (mode->second == "paper-defaults" || mode->second == "on") {
      cfg.noise = NoiseModel::calibrated();
    } else {
      throw ConfigError("noise: expected off | paper-defaults | on, got '" + mode->second + "'");
    }
  } else if (any_knob && !cfg.noise.enabled) {
    cfg.noise = NoiseModel::calibrated();
  }
  apply_noise_knobs(cfg.noise, kv);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  out << kCsvHeader << "\n";
  for (const auto& r : records)
    out << r.step << "," << format_double(r.eof_sa) << "," << format_double(r.entropy_e) << ","
        << format_double(r.negativity_se) << "," << (r.ppt_se ? 1 : 0) << "," << format_double(r.purity_ase)
        << "\n";
}

void write_json(std::ostream& out, const SimConfig& cfg, const std::vector<StepRecord>& records) {
  json j;
  j["schema"] = kRunSchema;
  j["config"] = config_json(cfg);
  json rows = json::array();
  for (const auto& r : records) {
    json row{{"step", r.step},
             {"eof_sa", r.eof_sa},
             {"entropy_e", r.entropy_e},
             {"negativity_se", r.negativity_se},
             {"ppt_se", r.ppt_se},
             {"purity", r.purity_ase}};
    if (r.reconstructed_sa) row["reconstructed_sa"] = matrix_json(*r.reconstructed_sa);
    if (r.reconstructed_e) row["reconstructed_e"] = matrix_json(*r.reconstructed_e);
    rows.push_back(row);
  }
  j["rows"] = rows;
  out << j.dump(2) << "\n";
}

void check_run_invariants(const SimConfig& cfg, const std::vector<StepRecord>& records) {
  using enum Subsystem;
  if (records.size() != static_cast<std::size_t>(cfg.steps) + 1)
    throw InvariantViolation("row count must equal steps + 1");
  const Matrix ancilla0 = partial_trace(records.front().rho_ase, {A}).matrix();
  for (const auto& r : records) {
    if (max_abs_diff(partial_trace(r.rho_ase, {A}).matrix(), ancilla0) > kStructuralTol)
      throw InvariantViolation("ancilla marginal changed at step " + std::to_string(r.step));
    if (!(r.eof_sa >= 0.0 && r.eof_sa <= 1.0 + 1e-12) || !(r.entropy_e >= 0.0 && r.entropy_e <= 1.0 + 1e-12))
      throw InvariantViolation("observable out of range at step " + std::to_string(r.step));
  }
  if (cfg.regime == Regime::Reset)
    for (std::size_t k = 1; k < records.size(); ++k)
      if (records[k].eof_sa > records[k - 1].eof_sa + 1e-9)
        throw InvariantViolation("reset regime: EOF(SA) increased at step " + std::to_string(k));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-qubit simulator of stroboscopic (non-)Markovian system-environment dynamics"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string out_path = "-";
  std::string format = "csv";
  auto* run = app.add_subcommand("run", "run the stroboscopic experiment and write per-step observables");
  run_opts.attach(run);
  run->add_option("--out", out_path, "output path ('-' for stdout)");
  run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  double phi = 0.0;
  int n = 1;
  double tau = 1.0;
  std::string ising_format = "text";
  auto* compile = app.add_subcommand("compile-ising", "solve Ising parameters for a controlled rotation");
  compile->add_option("--phi", phi, "target rotation angle (radians)")->required();
  compile->add_option("--n", n, "resonance index (>= 1)");
  compile->add_option("--tau", tau, "gate time (> 0)");
  compile->add_option("--format", ising_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  RunOptions tomo_opts;
  std::string tomo_state = "bell";
  long long tomo_counts = 0;
  std::uint64_t tomo_seed = 0;
  auto* tomo = app.add_subcommand("tomo-demo", "simulate tomography of a named state and reconstruct it");
  tomo->add_option("--state", tomo_state, "bell | mixed | step-K");
  tomo->add_option("--counts", tomo_counts, "counts per projector (0 = noiseless)");
  tomo_opts.attach(tomo);
  // --seed is shared with the run options; keep one value.
  tomo->get_option("--seed")->description("Poisson seed for sampled counts");

  RunOptions sweep_opts;
  std::string sweep_param = "alpha";
  std::string sweep_values;
  std::string sweep_dir;
  std::string sweep_out = "-";
  auto* sweep = app.add_subcommand("sweep", "run independent configurations concurrently");
  sweep_opts.attach(sweep);
  sweep->add_option("--param", sweep_param, "alpha | phase | phase_pol_offset");
  sweep->add_option("--values", sweep_values, "comma-separated parameter values")->required();
  sweep->add_option("--out-dir", sweep_dir, "directory for per-run CSV files");
  sweep->add_option("--out", sweep_out, "summary output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts, out_path, format, out);
    if (*compile) return cmd_compile_ising(phi, n, tau, ising_format, out);
    if (*tomo) {
      tomo_seed = tomo_opts.seed;
      return cmd_tomo_demo(tomo_opts, tomo_state, tomo_counts, tomo_seed, out);
    }
    if (*sweep) return cmd_sweep(sweep_opts, sweep_param, sweep_values, sweep_dir, sweep_out, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NoSolution& e) {
    err << "no solution: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"nmsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nmsim::cli
