#include "qsl/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <omp.h>

namespace qsl {

using nlohmann::json;

std::vector<double> Gamma0Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  const double lo = std::log10(min);
  const double hi = std::log10(max);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (count - 1));
  v.front() = min;
  v.back() = max;
  return v;
}

void SweepConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::ConfigInvalid, std::string(name) + " must be positive");
  };
  positive(lambda, "lambda");
  positive(omega0, "omega0");
  positive(tau, "tau");
  positive(gamma0_grid.min, "gamma0_grid.min");
  positive(gamma0_grid.max, "gamma0_grid.max");
  positive(constants.hbar, "constants.hbar");
  positive(constants.k_b, "constants.k_b");
  if (!(gamma0_grid.min < gamma0_grid.max)) throw Error(ErrorCode::ConfigInvalid, "gamma0_grid: need min < max");
  if (gamma0_grid.count < 2) throw Error(ErrorCode::ConfigInvalid, "gamma0_grid: need count >= 2");
  if (dimension_for_bound < 2) throw Error(ErrorCode::ConfigInvalid, "dimension_for_bound must be >= 2");
  if (steps < 2) throw Error(ErrorCode::ConfigInvalid, "steps must be >= 2");
}

namespace {

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorCode::ConfigInvalid, std::string("unknown key '") + key + "' in " + where);
  }
}

}  // namespace

SweepConfig sweep_config_from_json(const json& j, SweepConfig cfg) {
  reject_unknown(j,
                 {"lambda", "omega0", "tau", "gamma0_grid", "dimension_for_bound", "steps", "include_additive", "seed",
                  "constants"},
                 "config");
  if (j.contains("lambda")) cfg.lambda = get_as<double>(j, "lambda");
  if (j.contains("omega0")) cfg.omega0 = get_as<double>(j, "omega0");
  if (j.contains("tau")) cfg.tau = get_as<double>(j, "tau");
  if (j.contains("gamma0_grid")) {
    const json& g = j.at("gamma0_grid");
    reject_unknown(g, {"min", "max", "count"}, "gamma0_grid");
    if (g.contains("min")) cfg.gamma0_grid.min = get_as<double>(g, "min");
    if (g.contains("max")) cfg.gamma0_grid.max = get_as<double>(g, "max");
    if (g.contains("count")) cfg.gamma0_grid.count = get_as<int>(g, "count");
  }
  if (j.contains("dimension_for_bound")) cfg.dimension_for_bound = get_as<int>(j, "dimension_for_bound");
  if (j.contains("steps")) cfg.steps = get_as<int>(j, "steps");
  if (j.contains("include_additive")) cfg.include_additive = get_as<bool>(j, "include_additive");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    reject_unknown(c, {"hbar", "k_b"}, "constants");
    if (c.contains("hbar")) cfg.constants.hbar = get_as<double>(c, "hbar");
    if (c.contains("k_b")) cfg.constants.k_b = get_as<double>(c, "k_b");
  }
  return cfg;
}

json to_json(const SweepConfig& cfg) {
  return json{{"lambda", cfg.lambda},
              {"omega0", cfg.omega0},
              {"tau", cfg.tau},
              {"gamma0_grid", {{"min", cfg.gamma0_grid.min}, {"max", cfg.gamma0_grid.max}, {"count", cfg.gamma0_grid.count}}},
              {"dimension_for_bound", cfg.dimension_for_bound},
              {"steps", cfg.steps},
              {"include_additive", cfg.include_additive},
              {"seed", cfg.seed},
              {"constants", {{"hbar", cfg.constants.hbar}, {"k_b", cfg.constants.k_b}}}};
}

int steps_for(const SweepConfig& cfg, double gamma0) {
  const double scaled = std::max(cfg.lambda, gamma0) * cfg.tau;
  return std::max(2, static_cast<int>(std::ceil(cfg.steps * scaled)));
}

SweepRow evaluate_jc_point(const SweepConfig& cfg, double gamma0) {
  const DampedJCParams params{.omega0 = cfg.omega0, .gamma0 = gamma0, .lambda = cfg.lambda};
  params.validate();
  const int n = steps_for(cfg, gamma0);
  const DensityOperator rho0 = jc_excited_state();

  SweepRow row;
  row.gamma0 = gamma0;
  row.lambda = cfg.lambda;
  row.omega0 = cfg.omega0;
  row.tau = cfg.tau;
  Flags flags;
  Trajectory traj;
  bool guarded = !jc_amplitude_zeros(params, cfg.tau).empty();
  if (!guarded) {
    try {
      EvolveResult res = evolve(jc_generator(params), rho0, cfg.tau, n);
      traj = std::move(res.trajectory);
      row.halfstep_discrepancy = res.halfstep_discrepancy;
      if (!res.converged) flags.set(Flag::NonConverged);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AmplitudeZero) throw;
      guarded = true;
    }
  }
  if (guarded) {
    flags.set(Flag::AmplitudeGuard);
    traj = jc_exact_trajectory(params, rho0, cfg.tau, n);
  }

  row.speed = speed_summary(traj);
  row.delta_h_nats = entropy_change(traj);
  row.report = make_bound_report(traj, row.speed, cfg.dimension_for_bound);
  if (flags.has(Flag::AmplitudeGuard)) row.report.flags.set(Flag::AmplitudeGuard);
  if (flags.has(Flag::NonConverged)) row.report.flags.set(Flag::NonConverged);
  return row;
}

std::vector<SweepRow> run_jc_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  if (workers < 1) throw Error(ErrorCode::ConfigInvalid, "workers must be >= 1");
  const std::vector<double> grid = cfg.gamma0_grid.values();
  std::vector<SweepRow> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      rows[k] = evaluate_jc_point(cfg, grid[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<SweepRow> run_jc_sweep_serial(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (double g : cfg.gamma0_grid.values()) rows.push_back(evaluate_jc_point(cfg, g));
  return rows;
}

// ---------------------------------------------------------------------------

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorCode::ConfigInvalid, "unknown output format '" + std::string(name) + "'");
}

namespace {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::array<double, 11> numeric_fields(const SweepRow& r) {
  return {r.gamma0,           r.lambda,         r.omega0,
          r.tau,              r.speed.ell,      r.speed.lambda_tau,
          r.speed.tau_qsl,    r.delta_h_nats,   r.report.info_rate_exact,
          r.report.bound_micro, r.report.bound_micro_with_additive};
}

}  // namespace

void emit(const std::vector<SweepRow>& rows, OutputFormat format, std::ostream& out) {
  if (rows.empty()) throw Error(ErrorCode::IoError, "emit: no rows to write");
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) out << (c ? "," : "") << kCsvColumns[c];
    out << '\n';
    for (const SweepRow& r : rows) {
      for (double v : numeric_fields(r)) out << format_number(v) << ',';
      out << r.report.flags.to_string() << '\n';
    }
  } else {
    json arr = json::array();
    for (const SweepRow& r : rows) {
      json o = json::object();
      const auto f = numeric_fields(r);
      for (std::size_t c = 0; c < f.size(); ++c) o[std::string(kCsvColumns[c])] = f[c];
      o["flags"] = r.report.flags.to_string();
      arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "emit: write failed");
}

void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::string& path) {
  if (path == "-") {
    emit(rows, format, std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "emit: cannot open '" + path + "'");
  emit(rows, format, file);
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "parse_csv: missing header");
  std::string expected;
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) expected += std::string(c ? "," : "") + std::string(kCsvColumns[c]);
  if (line != expected) throw Error(ErrorCode::IoError, "parse_csv: header mismatch");

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != kCsvColumns.size()) throw Error(ErrorCode::IoError, "parse_csv: wrong column count");
    std::array<double, 11> v{};
    for (std::size_t c = 0; c < v.size(); ++c) {
      try {
        v[c] = std::stod(cells[c]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "parse_csv: bad number '" + cells[c] + "'");
      }
    }
    SweepRow r;
    r.gamma0 = v[0];
    r.lambda = v[1];
    r.omega0 = v[2];
    r.tau = v[3];
    r.speed = {.ell = v[4], .lambda_tau = v[5], .tau_qsl = v[6], .tau = v[3]};
    r.delta_h_nats = v[7];
    r.report.info_rate_exact = v[8];
    r.report.bound_micro = v[9];
    r.report.bound_micro_with_additive = v[10];
    r.report.flags = Flags::parse(cells[11]);
    r.speed.stationary = r.report.flags.has(Flag::Stationary);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------

RabiReport run_rabi_demo(double omega, double tau, int steps, double c1, double c2) {
  if (!(omega > 0.0) || !(tau > 0.0) || steps < 2 || !(c1 > 0.0) || !(c2 >= 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "rabi-demo: need omega, tau, c1 > 0, c2 >= 0, steps >= 2");
  }
  ComplexMatrix h(2, 2);
  h << 0.0, 0.5 * omega, 0.5 * omega, 0.0;
  const DensityOperator rho0 = DensityOperator::basis_state(2, 0);
  const EvolveResult res = evolve(unitary_generator(h), rho0, tau, steps);
  const Trajectory& traj = res.trajectory;
  const ComplexMatrix z_basis = ComplexMatrix::Identity(2, 2);

  RabiReport r;
  r.omega = omega;
  r.tau = tau;
  r.steps = steps;
  r.speed = speed_summary(traj);
  r.marginal = marginal_speed_summary(traj, z_basis, "z");
  r.coeffs = continuity_coefficients(c1, c2, r.marginal.final, r.marginal.initial, {0.0, 1.0});
  r.delta_s_x_nats = shannon_information(r.marginal.final) - shannon_information(r.marginal.initial);
  r.shannon_rate_exact = shannon_rate_exact(r.marginal);
  r.bound_shannon = bound_shannon(r.marginal, r.coeffs);
  const double h0 = von_neumann_entropy(traj.states.front());
  for (const auto& s : traj.states) r.max_entropy_drift = std::max(r.max_entropy_drift, std::abs(von_neumann_entropy(s) - h0));
  r.halfstep_discrepancy = res.halfstep_discrepancy;
  r.converged = res.converged;
  return r;
}

json to_json(const RabiReport& r) {
  return json{{"omega", r.omega},
              {"tau", r.tau},
              {"steps", r.steps},
              {"ell", r.speed.ell},
              {"lambda_tau", r.speed.lambda_tau},
              {"tau_qsl", r.speed.tau_qsl},
              {"w1", r.marginal.w1},
              {"lambda_x_tau", r.marginal.lambda_x_tau},
              {"tau_qsl_x", r.marginal.tau_qsl_x},
              {"delta_S_x_nats", r.delta_s_x_nats},
              {"shannon_rate_exact", r.shannon_rate_exact},
              {"alpha", r.coeffs.alpha()},
              {"bound_shannon", r.bound_shannon},
              {"max_entropy_drift", r.max_entropy_drift},
              {"halfstep_discrepancy", r.halfstep_discrepancy},
              {"converged", r.converged}};
}

}  // namespace qsl
