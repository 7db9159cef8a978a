#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qsl/distances_bounds.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/entropy_thermo.hpp"
#include "qsl/units.hpp"

namespace qsl {

/// Row annotations. Flagged values are still reported.
enum class Flag : std::uint32_t {
  AmplitudeGuard = 1u << 0,  // master equation singular on [0, tau]; exact solution used
  NonConverged = 1u << 1,    // half-step comparison above tolerance
  Stationary = 1u << 2,      // no motion: ell = Lambda = 0
};

class Flags {
 public:
  void set(Flag f) noexcept { bits_ |= static_cast<std::uint32_t>(f); }
  bool has(Flag f) const noexcept { return (bits_ & static_cast<std::uint32_t>(f)) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  std::uint32_t bits() const noexcept { return bits_; }
  /// "AMPLITUDE_GUARD|NONCONVERGED|STATIONARY" subset, empty when unflagged.
  std::string to_string() const;
  static Flags parse(const std::string& text);

  friend bool operator==(const Flags&, const Flags&) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Motion of the full state over [0, tau].
struct SpeedSummary {
  double ell = 0.0;         // trace distance rho_tau vs rho_0
  double lambda_tau = 0.0;  // (1/tau) int ||rho_dot||_1 dt
  double tau_qsl = 0.0;     // 2 ell / Lambda_tau
  double tau = 0.0;
  bool stationary = false;
};

/// Motion of the marginal over an eigenbasis.
struct MarginalSpeedSummary {
  double w1 = 0.0;
  double lambda_x_tau = 0.0;  // (1/tau) int sum_x |<x|rho_dot|x>| dt
  double tau_qsl_x = 0.0;     // W1 / Lambda^X_tau
  double tau = 0.0;
  bool stationary = false;
  MarginalDistribution initial;
  MarginalDistribution final;
};

struct BoundReport {
  double info_rate_exact = 0.0;  // bits / time
  double bound_micro = 0.0;
  double bound_micro_with_additive = 0.0;
  std::optional<double> bound_canonical;
  std::optional<double> bound_shannon;
  Flags flags;
};

/// Composite trapezoid rule on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> times, std::span<const double> values);

/// Trapezoid time average of the trace norm of the stored rates. A trajectory
/// with ell = Lambda = 0 is flagged stationary and gets tau_qsl = tau.
SpeedSummary speed_summary(const Trajectory& traj);
MarginalSpeedSummary marginal_speed_summary(const Trajectory& traj, const ComplexMatrix& basis,
                                            const std::string& basis_id = "x");

/// |H(rho_tau) - H(rho_0)| / (tau_qsl ln 2); zero when rho_tau = rho_0.
double info_rate_exact(const Trajectory& traj, const SpeedSummary& ss);
double entropy_change(const Trajectory& traj);

/// |S_X(rho_tau) - S_X(rho_0)| / (tau_qsl_x ln 2); zero when the marginal returns.
double shannon_rate_exact(const MarginalSpeedSummary& mss);

/// (ln d / ln 2) Lambda_tau, plus 1/(e tau_qsl ln 2) with the additive term.
double bound_micro(const SpeedSummary& ss, int d, bool include_additive);
/// Same bound via the Boltzmann entropy, S_B Lambda_tau / (k_B ln 2).
double bound_micro_boltzmann(const SpeedSummary& ss, int d, bool include_additive, const Units& units = {});

/// S_G Lambda_tau / (k_B ln 2) for the Gibbs state of H at energy E.
double bound_canonical(const SpeedSummary& ss, const ComplexMatrix& hamiltonian, double energy, double k_b = 1.0);

/// alpha Lambda^X_tau / ln 2.
double bound_shannon(const MarginalSpeedSummary& mss, const ContinuityCoefficients& coeffs);

/// pi E / (hbar ln 2).
double bekenstein_bound(double energy, double hbar = 1.0);
/// sqrt(pi E_dot / (3 hbar (ln 2)^2)).
double pendry_bound(double power, double hbar = 1.0);

/// Exact rate plus the microcanonical bounds for a trajectory.
BoundReport make_bound_report(const Trajectory& traj, const SpeedSummary& ss, int d);

}  // namespace qsl
