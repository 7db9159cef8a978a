// Command-line driver: JC sweep, Rabi demonstrator, Gibbs solver and the
// closed-form Bekenstein / Pendry rates.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qsl/entropy_thermo.hpp"
#include "qsl/qsl_rates.hpp"
#include "qsl/sweep.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw qsl::Error(qsl::ErrorCode::ConfigInvalid, std::string("config parse error: ") + e.what());
  }
}

template <class T>
void overlay(const json& cfg, const char* key, T& target) {
  if (!cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw qsl::Error(qsl::ErrorCode::ConfigInvalid, std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& cfg, std::initializer_list<std::string_view> known) {
  if (!cfg.is_object()) throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
  }
}

void write_json(const json& j, const std::string& path) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw qsl::Error(qsl::ErrorCode::IoError, "cannot open '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw qsl::Error(qsl::ErrorCode::IoError, "write failed for '" + path + "'");
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum speed limits and information-rate bounds"};
  app.require_subcommand(1);

  // jc-sweep -----------------------------------------------------------------
  auto* sweep = app.add_subcommand("jc-sweep", "Damped Jaynes-Cummings sweep over gamma0");
  std::string sweep_config;
  qsl::SweepConfig cli_cfg;
  std::string format = "csv";
  std::string sweep_output = "-";
  int workers = 1;
  bool no_additive = false;
  sweep->add_option("--config", sweep_config, "JSON config file");
  auto* o_lambda = sweep->add_option("--lambda", cli_cfg.lambda, "Spectral width");
  auto* o_omega0 = sweep->add_option("--omega0", cli_cfg.omega0, "Qubit frequency");
  auto* o_tau = sweep->add_option("--tau", cli_cfg.tau, "Evolution time");
  auto* o_gmin = sweep->add_option("--gamma0-min", cli_cfg.gamma0_grid.min, "Smallest coupling");
  auto* o_gmax = sweep->add_option("--gamma0-max", cli_cfg.gamma0_grid.max, "Largest coupling");
  auto* o_gcount = sweep->add_option("--gamma0-count", cli_cfg.gamma0_grid.count, "Number of log-spaced points");
  auto* o_dim = sweep->add_option("--dimension", cli_cfg.dimension_for_bound, "Hilbert dimension used in the bound");
  auto* o_steps = sweep->add_option("--steps", cli_cfg.steps, "RK4 steps per unit of max(lambda, gamma0) t");
  auto* o_noadd = sweep->add_flag("--no-additive", no_additive, "Check rows against the bound without the 1/e term");
  auto* o_seed = sweep->add_option("--seed", cli_cfg.seed, "Seed (recorded with the run)");
  auto* o_hbar = sweep->add_option("--hbar", cli_cfg.constants.hbar, "Reduced Planck constant");
  auto* o_kb = sweep->add_option("--kb", cli_cfg.constants.k_b, "Boltzmann constant");
  sweep->add_option("--workers", workers, "OpenMP worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("-o,--output", sweep_output, "Output path, '-' for stdout");

  // rabi-demo ----------------------------------------------------------------
  auto* rabi = app.add_subcommand("rabi-demo", "Driven qubit: marginal speed limit and Shannon-rate bound");
  std::string rabi_config;
  double omega = 1.0;
  double rabi_tau = 3.141592653589793;
  int rabi_steps = 10000;
  double c1 = 1.0;
  double c2 = 0.0;
  std::string rabi_output = "-";
  rabi->add_option("--config", rabi_config, "JSON config file");
  auto* o_omega = rabi->add_option("--omega", omega, "Rabi frequency");
  auto* o_rtau = rabi->add_option("--tau", rabi_tau, "Evolution time");
  auto* o_rsteps = rabi->add_option("--steps", rabi_steps, "RK4 steps");
  auto* o_c1 = rabi->add_option("--c1", c1, "Continuity constant c1 > 0");
  auto* o_c2 = rabi->add_option("--c2", c2, "Continuity constant c2 >= 0");
  rabi->add_option("-o,--output", rabi_output, "Output path, '-' for stdout");

  // gibbs ---------------------------------------------------------------------
  auto* gibbs = app.add_subcommand("gibbs", "Solve tr(exp(-beta H)(H - E)) = 0 for beta");
  std::string gibbs_config;
  std::vector<double> diag;
  int cutoff = 0;
  double hbar_omega = 1.0;
  double energy = 0.0;
  double gibbs_kb = 1.0;
  std::string gibbs_output = "-";
  gibbs->add_option("--config", gibbs_config, "JSON config file");
  auto* o_diag = gibbs->add_option("--diag", diag, "Diagonal Hamiltonian entries")->delimiter(',');
  auto* o_cut = gibbs->add_option("--oscillator-cutoff", cutoff, "Truncated oscillator with this many levels");
  auto* o_hw = gibbs->add_option("--hbar-omega", hbar_omega, "Oscillator level spacing");
  auto* o_energy = gibbs->add_option("--energy", energy, "Mean energy E");
  auto* o_gkb = gibbs->add_option("--kb", gibbs_kb, "Boltzmann constant");
  gibbs->add_option("-o,--output", gibbs_output, "Output path, '-' for stdout");

  // bounds --------------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Bekenstein and Pendry rates in bits per unit time");
  std::string bounds_config;
  double b_energy = 0.0;
  double b_power = 0.0;
  double b_hbar = 1.0;
  std::string bounds_output = "-";
  bounds->add_option("--config", bounds_config, "JSON config file");
  auto* o_benergy = bounds->add_option("--energy", b_energy, "Message energy E");
  auto* o_power = bounds->add_option("--power", b_power, "Power E_dot");
  auto* o_bhbar = bounds->add_option("--hbar", b_hbar, "Reduced Planck constant");
  bounds->add_option("-o,--output", bounds_output, "Output path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sweep->parsed()) {
      qsl::SweepConfig cfg = qsl::sweep_config_from_json(load_config(sweep_config));
      auto set = [](CLI::Option* o, auto& dst, const auto& src) {
        if (o->count() > 0) dst = src;
      };
      set(o_lambda, cfg.lambda, cli_cfg.lambda);
      set(o_omega0, cfg.omega0, cli_cfg.omega0);
      set(o_tau, cfg.tau, cli_cfg.tau);
      set(o_gmin, cfg.gamma0_grid.min, cli_cfg.gamma0_grid.min);
      set(o_gmax, cfg.gamma0_grid.max, cli_cfg.gamma0_grid.max);
      set(o_gcount, cfg.gamma0_grid.count, cli_cfg.gamma0_grid.count);
      set(o_dim, cfg.dimension_for_bound, cli_cfg.dimension_for_bound);
      set(o_steps, cfg.steps, cli_cfg.steps);
      set(o_seed, cfg.seed, cli_cfg.seed);
      set(o_hbar, cfg.constants.hbar, cli_cfg.constants.hbar);
      set(o_kb, cfg.constants.k_b, cli_cfg.constants.k_b);
      if (o_noadd->count() > 0) cfg.include_additive = !no_additive;
      cfg.validate();

      const auto rows = qsl::run_jc_sweep(cfg, workers);
      qsl::emit(rows, qsl::parse_format(format), sweep_output);

      std::size_t flagged = 0;
      std::size_t violations = 0;
      for (const auto& r : rows) {
        const double bound = cfg.include_additive ? r.report.bound_micro_with_additive : r.report.bound_micro;
        if (!r.report.flags.empty()) ++flagged;
        if (r.report.flags.empty() && r.report.info_rate_exact > bound + 1e-9) ++violations;
      }
      std::cerr << "jc-sweep: " << rows.size() << " rows, " << flagged << " flagged, " << violations
                << " unflagged rows above the " << (cfg.include_additive ? "additive " : "") << "bound\n";
      return 0;
    }

    if (rabi->parsed()) {
      const json cfg = load_config(rabi_config);
      reject_unknown(cfg, {"omega", "tau", "steps", "c1", "c2"});
      double w = 1.0, t = 3.141592653589793, a1 = 1.0, a2 = 0.0;
      int n = 10000;
      overlay(cfg, "omega", w);
      overlay(cfg, "tau", t);
      overlay(cfg, "steps", n);
      overlay(cfg, "c1", a1);
      overlay(cfg, "c2", a2);
      if (o_omega->count()) w = omega;
      if (o_rtau->count()) t = rabi_tau;
      if (o_rsteps->count()) n = rabi_steps;
      if (o_c1->count()) a1 = c1;
      if (o_c2->count()) a2 = c2;
      write_json(qsl::to_json(qsl::run_rabi_demo(w, t, n, a1, a2)), rabi_output);
      return 0;
    }

    if (gibbs->parsed()) {
      const json cfg = load_config(gibbs_config);
      reject_unknown(cfg, {"diag", "oscillator_cutoff", "hbar_omega", "energy", "k_b"});
      std::vector<double> d;
      int n = 0;
      double hw = 1.0, e = 0.0, kb = 1.0;
      overlay(cfg, "diag", d);
      overlay(cfg, "oscillator_cutoff", n);
      overlay(cfg, "hbar_omega", hw);
      overlay(cfg, "energy", e);
      overlay(cfg, "k_b", kb);
      if (o_diag->count()) d = diag;
      if (o_cut->count()) n = cutoff;
      if (o_hw->count()) hw = hbar_omega;
      if (o_energy->count()) e = energy;
      if (o_gkb->count()) kb = gibbs_kb;
      if (!cfg.contains("energy") && !o_energy->count()) {
        throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "gibbs: --energy is required");
      }
      if (d.empty() == (n == 0)) {
        throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "gibbs: give exactly one of --diag or --oscillator-cutoff");
      }
      qsl::ComplexMatrix h;
      if (n > 0) {
        h = qsl::truncated_oscillator_hamiltonian(hw, n);
      } else {
        h = qsl::ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
      }
      if (!(kb > 0.0)) throw qsl::Error(qsl::ErrorCode::ConfigInvalid, "gibbs: k_b must be positive");
      const qsl::ThermalState ts = qsl::gibbs_state(h, e);
      write_json(json{{"beta", ts.beta},
                      {"Z", number_or_null(ts.z)},
                      {"log_Z", ts.log_z},
                      {"F", number_or_null(ts.free_energy)},
                      {"E", ts.energy},
                      {"gibbs_entropy", qsl::gibbs_entropy(ts, kb)},
                      {"von_neumann_entropy", qsl::von_neumann_entropy(ts.state)}},
                 gibbs_output);
      return 0;
    }

    if (bounds->parsed()) {
      const json cfg = load_config(bounds_config);
      reject_unknown(cfg, {"energy", "power", "hbar"});
      double e = 0.0, p = 0.0, hb = 1.0;
      overlay(cfg, "energy", e);
      overlay(cfg, "power", p);
      overlay(cfg, "hbar", hb);
      if (o_benergy->count()) e = b_energy;
      if (o_power->count()) p = b_power;
      if (o_bhbar->count()) hb = b_hbar;
      write_json(json{{"energy", e},
                      {"power", p},
                      {"hbar", hb},
                      {"bekenstein", qsl::bekenstein_bound(e, hb)},
                      {"pendry", qsl::pendry_bound(p, hb)}},
                 bounds_output);
      return 0;
    }
  } catch (const qsl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == qsl::ErrorCode::ConfigInvalid ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
