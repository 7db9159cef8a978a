#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qsl/qsl_rates.hpp"
#include "qsl/units.hpp"

namespace qsl {

struct Gamma0Grid {
  double min = 1e-2;
  double max = 1e2;
  int count = 60;

  /// count log-spaced values from min to max inclusive.
  std::vector<double> values() const;
};

/// Damped Jaynes-Cummings sweep over the coupling strength gamma0.
struct SweepConfig {
  double lambda = 1.0;
  double omega0 = 1.0;
  double tau = 1.0;
  Gamma0Grid gamma0_grid;
  int dimension_for_bound = 2;
  /// RK4 steps per unit of max(lambda, gamma0) * t.
  int steps = 20000;
  bool include_additive = true;
  std::uint64_t seed = 0;
  Units constants;

  /// Throws ConfigInvalid.
  void validate() const;
};

/// Overlays keys from a JSON object onto `base`. Unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig base = {});
nlohmann::json to_json(const SweepConfig& cfg);

/// Step count used for one grid point.
int steps_for(const SweepConfig& cfg, double gamma0);

struct SweepRow {
  double gamma0 = 0.0;
  double lambda = 0.0;
  double omega0 = 0.0;
  double tau = 0.0;
  SpeedSummary speed;
  double delta_h_nats = 0.0;
  BoundReport report;
  double halfstep_discrepancy = 0.0;
};

/// One grid point: excited initial state, master-equation trajectory via
/// evolve(). If the amplitude has a zero on [0, tau] the master equation is
/// singular there; the row is then flagged AMPLITUDE_GUARD and computed from
/// the model's exact solution instead.
SweepRow evaluate_jc_point(const SweepConfig& cfg, double gamma0);

/// Grid points are evaluated concurrently on `workers` OpenMP threads; rows
/// come back in grid order.
std::vector<SweepRow> run_jc_sweep(const SweepConfig& cfg, int workers = 1);
/// Serial reference for run_jc_sweep.
std::vector<SweepRow> run_jc_sweep_serial(const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { Csv, Json };

inline constexpr std::array<std::string_view, 12> kCsvColumns = {
    "gamma0", "lambda",      "omega0",          "tau",        "ell",                       "lambda_tau",
    "tau_qsl", "delta_H_nats", "info_rate_exact", "bound_micro", "bound_micro_with_additive", "flags"};

OutputFormat parse_format(std::string_view name);

/// Throws IoError on an empty row list or a failed write.
void emit(const std::vector<SweepRow>& rows, OutputFormat format, std::ostream& out);
/// `path` of "-" writes to stdout.
void emit(const std::vector<SweepRow>& rows, OutputFormat format, const std::string& path);

/// Reads rows written by emit(CSV). Only the CSV columns are populated.
std::vector<SweepRow> parse_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Driven-qubit demonstrator for the marginal (Shannon) bound.

struct RabiReport {
  double omega = 0.0;
  double tau = 0.0;
  int steps = 0;
  SpeedSummary speed;
  MarginalSpeedSummary marginal;
  ContinuityCoefficients coeffs;
  double delta_s_x_nats = 0.0;
  double shannon_rate_exact = 0.0;
  double bound_shannon = 0.0;
  /// max_t |H(rho_t) - H(rho_0)|
  double max_entropy_drift = 0.0;
  double halfstep_discrepancy = 0.0;
  bool converged = true;
};

/// H = (Omega/2) sigma_x from |0><0|, marginals in the z basis with labels {0, 1}.
RabiReport run_rabi_demo(double omega, double tau, int steps, double c1, double c2);
nlohmann::json to_json(const RabiReport& r);

}  // namespace qsl
