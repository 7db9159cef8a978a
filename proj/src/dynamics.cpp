#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "rk4.hpp"

namespace qsl {

namespace {

constexpr Complex kI{0.0, 1.0};

Trajectory integrate(const Generator& gen, const DensityOperator& rho0, double tau, int steps) {
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.rates.reserve(static_cast<std::size_t>(steps) + 1);

  const double h = tau / steps;
  const auto rhs = [&gen](double t, const ComplexMatrix& rho) { return gen(t, rho); };

  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  for (int n = 0; n < steps; ++n) {
    const double t = tau * n / steps;
    if (gen.singular_between && gen.singular_between(t, t + h)) {
      throw Error(ErrorCode::AmplitudeZero, "evolve: generator singular in step [" + std::to_string(t) + ", " +
                                                std::to_string(t + h) + "]");
    }
    const ComplexMatrix& rho = traj.states.back().matrix();
    ComplexMatrix k1 = rhs(t, rho);
    ComplexMatrix next = detail::rk4_step(rhs, t, rho, h, k1);
    if (!next.allFinite()) {
      throw Error(ErrorCode::NonFiniteState, "evolve: non-finite state at t = " + std::to_string(t + h));
    }
    traj.rates.push_back(std::move(k1));
    traj.times.push_back(tau * (n + 1) / steps);
    traj.states.push_back(DensityOperator::project(next, ErrorCode::StateInvariantViolation));
  }
  traj.rates.push_back(rhs(tau, traj.states.back().matrix()));
  return traj;
}

double max_pointwise_distance(const Trajectory& coarse, const Trajectory& fine) {
  double worst = 0.0;
  for (std::size_t n = 0; n < coarse.size(); ++n) {
    const ComplexMatrix diff = coarse.states[n].matrix() - fine.states[2 * n].matrix();
    worst = std::max(worst, 0.5 * trace_norm(hermitian_part(diff)));
  }
  return worst;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix excited_projector() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

/// sinh(x)/d with x = d t / 2, accurate through d = 0.
Complex sinh_over_d(Complex d, double t) {
  const Complex x = 0.5 * d * t;
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 0.5 * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sinh(x) / d;
}

Complex jc_d(const DampedJCParams& p) { return std::sqrt(Complex(p.lambda * p.lambda - 2.0 * p.gamma0 * p.lambda)); }

void check_steps(int steps, int minimum, const char* what) {
  if (steps < minimum) {
    throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": need at least " + std::to_string(minimum) + " steps");
  }
}

void check_tau(double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": tau must be positive");
}

}  // namespace

EvolveResult evolve(const Generator& gen, const DensityOperator& rho0, double tau, int steps,
                    const EvolveOptions& options) {
  check_steps(steps, 2, "evolve");
  check_tau(tau, "evolve");
  EvolveResult result;
  result.trajectory = integrate(gen, rho0, tau, steps);
  if (options.check_convergence) {
    const Trajectory fine = integrate(gen, rho0, tau, 2 * steps);
    result.halfstep_discrepancy = max_pointwise_distance(result.trajectory, fine);
    result.converged = result.halfstep_discrepancy <= options.convergence_tol;
  }
  return result;
}

Generator unitary_generator(const ComplexMatrix& hamiltonian, double hbar) {
  if (!is_hermitian(hamiltonian)) throw Error(ErrorCode::NotHermitian, "unitary_generator: H is not Hermitian");
  const ComplexMatrix h = hermitian_part(hamiltonian);
  const Complex factor = -kI / hbar;
  Generator g;
  g.kind = GeneratorKind::Unitary;
  g.apply = [h, factor](double, const ComplexMatrix& rho) -> ComplexMatrix { return factor * commutator(h, rho); };
  return g;
}

Generator unitary_generator(std::function<ComplexMatrix(double)> hamiltonian, double hbar) {
  const Complex factor = -kI / hbar;
  Generator g;
  g.kind = GeneratorKind::Unitary;
  g.apply = [hamiltonian = std::move(hamiltonian), factor](double t, const ComplexMatrix& rho) -> ComplexMatrix {
    const ComplexMatrix h = hamiltonian(t);
    if (!is_hermitian(h)) throw Error(ErrorCode::NotHermitian, "unitary_generator: H(t) is not Hermitian");
    return factor * commutator(h, rho);
  };
  return g;
}

// ---------------------------------------------------------------------------

void DampedJCParams::validate() const {
  if (!(omega0 > 0.0) || !(gamma0 > 0.0) || !(lambda > 0.0) || !std::isfinite(omega0) || !std::isfinite(gamma0) ||
      !std::isfinite(lambda)) {
    throw Error(ErrorCode::ConfigInvalid, "DampedJCParams: omega0, gamma0, lambda must be positive and finite");
  }
}

AmplitudeSolution jc_analytic_amplitude(const DampedJCParams& p) {
  p.validate();
  const Complex d = jc_d(p);
  const double lambda = p.lambda;
  const double gamma0 = p.gamma0;
  // e^{-lambda t/2} cosh(dt/2) and e^{-lambda t/2} sinh(dt/2)/d written with
  // decaying exponentials so large t does not overflow in the real-d regime.
  auto damped_cosh = [d, lambda](double t) {
    return 0.5 * (std::exp(0.5 * (d - lambda) * t) + std::exp(-0.5 * (d + lambda) * t));
  };
  auto damped_sinh_over_d = [d, lambda](double t) {
    if (std::abs(0.5 * d * t) < 1e-4) return std::exp(-0.5 * lambda * t) * sinh_over_d(d, t);
    return (std::exp(0.5 * (d - lambda) * t) - std::exp(-0.5 * (d + lambda) * t)) / (2.0 * d);
  };
  AmplitudeSolution amp;
  amp.c = [=](double t) { return damped_cosh(t) + lambda * damped_sinh_over_d(t); };
  amp.cdot = [=](double t) { return -gamma0 * lambda * damped_sinh_over_d(t); };
  return amp;
}

AmplitudeSolution jc_numerical_amplitude(const DampedJCParams& p, double tau, int steps) {
  p.validate();
  check_tau(tau, "jc_numerical_amplitude");
  check_steps(steps, 10, "jc_numerical_amplitude");

  struct Table {
    double tau = 0.0;
    double h = 0.0;
    double lambda = 0.0;
    double spring = 0.0;
    std::vector<Complex> c;
    std::vector<Complex> cdot;
  };
  auto table = std::make_shared<Table>();
  table->tau = tau;
  table->h = tau / steps;
  table->lambda = p.lambda;
  table->spring = 0.5 * p.gamma0 * p.lambda;

  const auto rhs = [lambda = table->lambda, spring = table->spring](double, const Eigen::Vector2cd& y) {
    return Eigen::Vector2cd(y(1), -lambda * y(1) - spring * y(0));
  };
  Eigen::Vector2cd y(1.0, 0.0);
  table->c.push_back(y(0));
  table->cdot.push_back(y(1));
  for (int n = 0; n < steps; ++n) {
    y = detail::rk4_step(rhs, tau * n / steps, y, table->h);
    if (!y.allFinite()) throw Error(ErrorCode::NonFiniteState, "jc_numerical_amplitude: non-finite amplitude");
    table->c.push_back(y(0));
    table->cdot.push_back(y(1));
  }

  // Cubic Hermite interpolation on [t_n, t_n + h].
  auto locate = [table](double t) {
    if (t < 0.0 || t > table->tau * (1.0 + 1e-12)) {
      throw Error(ErrorCode::ConfigInvalid, "jc_numerical_amplitude: t outside tabulated range");
    }
    const auto last = static_cast<std::ptrdiff_t>(table->c.size()) - 2;
    auto n = static_cast<std::ptrdiff_t>(std::floor(t / table->h));
    n = std::clamp<std::ptrdiff_t>(n, 0, last);
    const double s = (t - static_cast<double>(n) * table->h) / table->h;
    return std::pair{static_cast<std::size_t>(n), s};
  };
  auto hermite = [](Complex y0, Complex d0, Complex y1, Complex d1, double s, double h) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
  };
  AmplitudeSolution amp;
  amp.c = [table, locate, hermite](double t) {
    const auto [n, s] = locate(t);
    return hermite(table->c[n], table->cdot[n], table->c[n + 1], table->cdot[n + 1], s, table->h);
  };
  amp.cdot = [table, locate, hermite](double t) {
    const auto [n, s] = locate(t);
    auto accel = [&](std::size_t k) { return -table->lambda * table->cdot[k] - table->spring * table->c[k]; };
    return hermite(table->cdot[n], accel(n), table->cdot[n + 1], accel(n + 1), s, table->h);
  };
  return amp;
}

JCRates jc_rates(AmplitudeSolution amp) {
  auto ratio = [amp](double t) {
    const Complex c = amp.c(t);
    if (std::abs(c) < kAmplitudeGuard) {
      throw Error(ErrorCode::AmplitudeZero, "jc_rates: |c(t)| below guard at t = " + std::to_string(t));
    }
    return amp.cdot(t) / c;
  };
  return {[ratio](double t) { return -2.0 * ratio(t).real(); },
          [ratio](double t) { return -2.0 * ratio(t).imag(); }};
}

double jc_decay_rate_closed_form(const DampedJCParams& p, double t) {
  const Complex d = jc_d(p);
  const Complex x = 0.5 * d * t;
  if (d == Complex(0.0, 0.0)) {
    // Numerator and denominator both carry a factor d.
    const Complex s = sinh_over_d(d, t);
    return (2.0 * p.gamma0 * p.lambda * s / (std::cosh(x) + p.lambda * s)).real();
  }
  return (2.0 * p.gamma0 * p.lambda * std::sinh(x) / (d * std::cosh(x) + p.lambda * std::sinh(x))).real();
}

std::vector<double> jc_amplitude_zeros(const DampedJCParams& p, double tau) {
  p.validate();
  std::vector<double> zeros;
  const double disc = 2.0 * p.gamma0 * p.lambda - p.lambda * p.lambda;
  if (!(disc > 0.0)) return zeros;
  const double delta = std::sqrt(disc);
  // c is proportional to cos(delta t/2) + (lambda/delta) sin(delta t/2).
  for (int k = 0;; ++k) {
    const double t = 2.0 * (std::numbers::pi - std::atan(delta / p.lambda) + k * std::numbers::pi) / delta;
    if (t > tau) break;
    zeros.push_back(t);
  }
  return zeros;
}

Generator jc_generator(const DampedJCParams& p) {
  p.validate();
  const AmplitudeSolution amp = jc_analytic_amplitude(p);
  const ComplexMatrix sm = sigma_minus();
  const ComplexMatrix sp = sm.adjoint();
  const ComplexMatrix proj = excited_projector();
  const double omega0 = p.omega0;

  Generator g;
  g.kind = GeneratorKind::Dissipative;
  g.apply = [=](double t, const ComplexMatrix& rho) -> ComplexMatrix {
    const Complex c = amp.c(t);
    if (std::abs(c) < kAmplitudeGuard) {
      throw Error(ErrorCode::AmplitudeZero, "jc_generator: |c(t)| below guard at t = " + std::to_string(t));
    }
    const Complex r = amp.cdot(t) / c;
    const double gamma = -2.0 * r.real();
    const double lamb = -2.0 * r.imag();
    const ComplexMatrix pr = proj * rho;
    const ComplexMatrix rp = rho * proj;
    return Complex(0.0, -(omega0 + 0.5 * lamb)) * (pr - rp) + gamma * (sm * rho * sp - 0.5 * (pr + rp));
  };
  g.singular_between = [amp](double t0, double t1) {
    const Complex c0 = amp.c(t0);
    const Complex cm = amp.c(0.5 * (t0 + t1));
    const Complex c1 = amp.c(t1);
    if (std::min({std::abs(c0), std::abs(cm), std::abs(c1)}) < kAmplitudeGuard) return true;
    // On resonance c is real, so a zero inside the step shows up as a sign change.
    return (c0.real() > 0.0) != (c1.real() > 0.0) || (c0.real() > 0.0) != (cm.real() > 0.0);
  };
  return g;
}

Trajectory jc_exact_trajectory(const DampedJCParams& p, const DensityOperator& rho0, double tau, int steps) {
  check_steps(steps, 2, "jc_exact_trajectory");
  check_tau(tau, "jc_exact_trajectory");
  if (rho0.dim() != 2) throw Error(ErrorCode::DimMismatch, "jc_exact_trajectory: qubit state required");
  const AmplitudeSolution amp = jc_analytic_amplitude(p);
  const double pe0 = rho0.matrix()(1, 1).real();
  const Complex eg0 = rho0.matrix()(1, 0);

  Trajectory traj;
  for (int n = 0; n <= steps; ++n) {
    const double t = tau * n / steps;
    const Complex c = amp.c(t);
    const Complex cd = amp.cdot(t);
    const Complex phase = std::exp(Complex(0.0, -p.omega0 * t));
    const double pe = std::norm(c) * pe0;
    const double pe_dot = 2.0 * (std::conj(c) * cd).real() * pe0;
    const Complex eg = c * phase * eg0;
    const Complex eg_dot = (cd - kI * p.omega0 * c) * phase * eg0;

    ComplexMatrix rho(2, 2);
    rho << 1.0 - pe, std::conj(eg), eg, pe;
    ComplexMatrix rate(2, 2);
    rate << -pe_dot, std::conj(eg_dot), eg_dot, pe_dot;

    traj.times.push_back(t);
    traj.states.push_back(DensityOperator::project(rho, ErrorCode::StateInvariantViolation));
    traj.rates.push_back(std::move(rate));
  }
  return traj;
}

DensityOperator jc_excited_state() { return DensityOperator::basis_state(2, 1); }
DensityOperator jc_ground_state() { return DensityOperator::basis_state(2, 0); }

}  // namespace qsl
