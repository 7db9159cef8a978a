#pragma once

#include <functional>
#include <vector>

#include "qsl/matcore.hpp"

namespace qsl {

enum class GeneratorKind { Unitary, Dissipative };

/// Right-hand side of a master equation, rho_dot = L_t(rho).
struct Generator {
  std::function<ComplexMatrix(double, const ComplexMatrix&)> apply;
  GeneratorKind kind = GeneratorKind::Dissipative;
  /// Optional guard. Returns true when L_t is singular somewhere in [t0, t1];
  /// the integrator rejects such steps.
  std::function<bool(double, double)> singular_between;

  ComplexMatrix operator()(double t, const ComplexMatrix& rho) const { return apply(t, rho); }
};

/// States and generator outputs on an ascending grid from 0 to tau.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;
  std::vector<ComplexMatrix> rates;

  double tau() const { return times.empty() ? 0.0 : times.back(); }
  std::size_t size() const { return times.size(); }
};

struct EvolveOptions {
  bool check_convergence = true;
  /// Max trace distance to the half-step run still counted as converged.
  double convergence_tol = 1e-8;
};

struct EvolveResult {
  Trajectory trajectory;
  /// Max trace distance between this run and one with half the step size,
  /// over shared grid points. Zero when the check is disabled.
  double halfstep_discrepancy = 0.0;
  bool converged = true;
};

/// Fixed-step RK4 over [0, tau] with `steps` steps. Every stored state is
/// re-projected onto the state space with the DensityOperator clipping rule.
///
/// Throws StateInvariantViolation if a state leaves the clipping window,
/// NonFiniteState on overflow, AmplitudeZero when the generator's guard
/// rejects a step.
EvolveResult evolve(const Generator& gen, const DensityOperator& rho0, double tau, int steps,
                    const EvolveOptions& options = {});

/// -(i/hbar)[H, rho] for constant H.
Generator unitary_generator(const ComplexMatrix& hamiltonian, double hbar = 1.0);
/// -(i/hbar)[H(t), rho]; H(t) is checked for hermiticity on every call.
Generator unitary_generator(std::function<ComplexMatrix(double)> hamiltonian, double hbar = 1.0);

// ---------------------------------------------------------------------------
// Damped Jaynes-Cummings model (resonant, single excitation, Lorentzian bath).
//
// Qubit basis: index 0 is the ground level, index 1 the excited level, so
// sigma_- = |0><1| and sigma_+ sigma_- = |1><1|.

struct DampedJCParams {
  double omega0 = 1.0;  // qubit frequency
  double gamma0 = 1.0;  // coupling strength
  double lambda = 1.0;  // spectral width

  void validate() const;
};

/// c(t) and its derivative. c(0) = 1, c'(0) = 0, |c| <= 1.
struct AmplitudeSolution {
  std::function<Complex(double)> c;
  std::function<Complex(double)> cdot;
};

/// Threshold below which the amplitude counts as zero.
inline constexpr double kAmplitudeGuard = 1e-14;

/// Closed form c(t) = e^{-lambda t/2} [cosh(dt/2) + (lambda/d) sinh(dt/2)],
/// d = sqrt(lambda^2 - 2 gamma0 lambda), taken complex in the oscillatory
/// regime gamma0 > lambda/2 and replaced by its series limit at d = 0.
AmplitudeSolution jc_analytic_amplitude(const DampedJCParams& p);

/// RK4 solution of c'' + lambda c' + (gamma0 lambda / 2) c = 0, c(0) = 1,
/// c'(0) = 0 on [0, tau]. This is the memory-kernel equation with the
/// Lorentzian correlation (gamma0 lambda / 2) e^{-lambda |t - s|}, differentiated
/// once. The kernel phase is taken as (omega - omega0)(t - s), without hbar,
/// which keeps the exponent dimensionless. The
/// correlation amplitude gamma0 lambda / 2 corresponds to the spectral density
/// gamma0 lambda^2 / (2 pi ((omega0 - omega)^2 + lambda^2)), the normalization
/// under which -2 Re(c'/c) is the closed-form decay rate below.
/// Values between grid points use cubic Hermite interpolation.
AmplitudeSolution jc_numerical_amplitude(const DampedJCParams& p, double tau, int steps);

struct JCRates {
  std::function<double(double)> gamma;       // -2 Re(c'/c)
  std::function<double(double)> lamb_shift;  // -2 Im(c'/c)
};

/// Throws AmplitudeZero when |c(t)| < kAmplitudeGuard at the evaluation time.
JCRates jc_rates(AmplitudeSolution amp);

/// 2 gamma0 lambda sinh(dt/2) / (d cosh(dt/2) + lambda sinh(dt/2)).
double jc_decay_rate_closed_form(const DampedJCParams& p, double t);

/// Zeros of c(t) in (0, tau]; empty unless gamma0 > lambda/2.
std::vector<double> jc_amplitude_zeros(const DampedJCParams& p, double tau);

/// Master-equation generator: -i omega0 [P, rho] - (i/2) lambda_t [P, rho]
/// + gamma_t (sigma_- rho sigma_+ - {P, rho}/2), P = sigma_+ sigma_-.
/// Its guard rejects steps on which c(t) vanishes.
Generator jc_generator(const DampedJCParams& p);

/// Exact solution: rho_ee(t) = |c|^2 rho_ee(0), rho_eg(t) = c e^{-i omega0 t} rho_eg(0).
/// Regular through the zeros of c(t), where the master equation is not.
Trajectory jc_exact_trajectory(const DampedJCParams& p, const DensityOperator& rho0, double tau, int steps);

DensityOperator jc_excited_state();
DensityOperator jc_ground_state();

}  // namespace qsl
