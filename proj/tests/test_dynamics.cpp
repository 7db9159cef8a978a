#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jc_oracle.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/entropy_thermo.hpp"

using namespace qsl;

namespace {

ComplexMatrix rabi_hamiltonian(double omega) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = 0.5 * omega;
  h(1, 0) = 0.5 * omega;
  return h;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("evolve with the zero generator is constant") {
  Generator zero;
  zero.apply = [](double, const ComplexMatrix& rho) -> ComplexMatrix { return ComplexMatrix::Zero(rho.rows(), rho.cols()); };
  const auto rho0 = random_density_operator(3, 1);
  const auto r = evolve(zero, rho0, 2.0, 50);
  REQUIRE(r.trajectory.size() == 51);
  CHECK(r.trajectory.times.front() == 0.0);
  CHECK(r.trajectory.times.back() == 2.0);
  for (const auto& s : r.trajectory.states) CHECK(max_abs(s.matrix() - rho0.matrix()) < 1e-15);
  CHECK(r.halfstep_discrepancy == 0.0);
}

TEST_CASE("evolve rejects bad arguments") {
  const auto g = unitary_generator(rabi_hamiltonian(1.0));
  const auto rho0 = DensityOperator::basis_state(2, 0);
  CHECK_THROWS_AS(evolve(g, rho0, 1.0, 1), Error);
  CHECK_THROWS_AS(evolve(g, rho0, 0.0, 10), Error);
  CHECK_THROWS_AS(evolve(g, rho0, -1.0, 10), Error);
}

TEST_CASE("Rabi pi pulse") {
  const double omega = 1.3;
  const auto r = evolve(unitary_generator(rabi_hamiltonian(omega)), DensityOperator::basis_state(2, 0),
                        std::numbers::pi / omega, 1000);
  CHECK(max_abs(r.trajectory.states.back().matrix() - DensityOperator::basis_state(2, 1).matrix()) < 1e-6);
  for (std::size_t n = 0; n < r.trajectory.size(); n += 37) {
    const double s = std::sin(0.5 * omega * r.trajectory.times[n]);
    CHECK(std::abs(r.trajectory.states[n].matrix()(1, 1).real() - s * s) < 1e-9);
  }
  CHECK(r.converged);
}

TEST_CASE("unitary evolution preserves trace, purity and entropy") {
  Rng rng(10);
  for (int i = 0; i < 10; ++i) {
    const int d = 2 + i % 4;
    const ComplexMatrix h = random_hermitian(d, rng);
    const auto rho0 = random_density_operator(d, rng);
    const auto r = evolve(unitary_generator(h), rho0, 2.0, 2000);
    const double p0 = rho0.purity();
    const double s0 = von_neumann_entropy(rho0);
    for (const auto& s : r.trajectory.states) {
      CHECK(std::abs(s.matrix().trace().real() - 1.0) < 1e-8);
      CHECK(std::abs(s.purity() - p0) < 1e-8);
      CHECK(std::abs(von_neumann_entropy(s) - s0) < 1e-8);
    }
  }
}

TEST_CASE("unitary generator with commuting state gives zero output") {
  const ComplexMatrix h = DensityOperator::basis_state(2, 1).matrix();
  const auto g = unitary_generator(h);
  CHECK(max_abs(g(0.3, DensityOperator::diagonal(std::vector<double>{0.3, 0.7}).matrix())) == 0.0);
  ComplexMatrix bad = h;
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(unitary_generator(bad), Error);
}

TEST_CASE("time-dependent unitary generator") {
  const double omega = 0.8;
  const auto g = unitary_generator([omega](double t) { return rabi_hamiltonian(omega * (1.0 + t)); });
  const double tau = 1.5;
  const auto r = evolve(g, DensityOperator::basis_state(2, 0), tau, 2000);
  // Commuting family: the rotation angle is the integral of the frequency.
  const double angle = omega * (tau + 0.5 * tau * tau);
  const double s = std::sin(0.5 * angle);
  CHECK(std::abs(r.trajectory.states.back().matrix()(1, 1).real() - s * s) < 1e-9);
}

TEST_CASE("analytic amplitude matches the real-arithmetic reference") {
  for (double g0 : {0.01, 0.25, 0.4999, 0.5, 0.5001, 0.7, 5.0, 40.0}) {
    const DampedJCParams p{.omega0 = 1.0, .gamma0 = g0, .lambda = 1.0};
    const auto amp = jc_analytic_amplitude(p);
    CHECK(amp.c(0.0).real() == doctest::Approx(1.0));
    CHECK(std::abs(amp.cdot(0.0)) == 0.0);
    for (double t = 0.0; t <= 10.0; t += 0.173) {
      const auto ref = oracle::jc_amplitude(g0, 1.0, t);
      CHECK(std::abs(amp.c(t) - ref.c) < 1e-12);
      CHECK(std::abs(amp.cdot(t) - ref.cdot) < 1e-12 * std::max(1.0, g0));
      CHECK(std::abs(amp.c(t).imag()) < 1e-12);
      CHECK(std::abs(amp.c(t)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("analytic amplitude satisfies its differential equation") {
  for (double g0 : {0.25, 5.0}) {
    const DampedJCParams p{.omega0 = 1.0, .gamma0 = g0, .lambda = 1.0};
    const auto amp = jc_analytic_amplitude(p);
    const double h = 1e-4;
    for (double t = 0.3; t < 5.0; t += 0.41) {
      const Complex cdd = (amp.cdot(t + h) - amp.cdot(t - h)) / (2 * h);
      const Complex cd = (amp.c(t + h) - amp.c(t - h)) / (2 * h);
      CHECK(std::abs(cd - amp.cdot(t)) < 1e-7 * std::max(1.0, g0));
      CHECK(std::abs(cdd + p.lambda * amp.cdot(t) + 0.5 * g0 * p.lambda * amp.c(t)) < 1e-6 * std::max(1.0, g0));
    }
  }
}

TEST_CASE("numerical amplitude agrees with the analytic one") {
  for (auto [g0, tol] : {std::pair{0.25, 1e-8}, std::pair{5.0, 1e-6}}) {
    const DampedJCParams p{.omega0 = 1.0, .gamma0 = g0, .lambda = 1.0};
    const auto a = jc_analytic_amplitude(p);
    const auto n = jc_numerical_amplitude(p, 5.0, 20000);
    for (double t = 0.0; t <= 5.0; t += 0.0137) CHECK(std::abs(a.c(t) - n.c(t)) < tol);
  }
  const DampedJCParams weak{.omega0 = 1.0, .gamma0 = 1e-12, .lambda = 1.0};
  const auto n = jc_numerical_amplitude(weak, 3.0, 100);
  CHECK(std::abs(n.c(3.0) - 1.0) < 1e-11);
  CHECK_THROWS_AS(jc_numerical_amplitude(weak, 3.0, 5), Error);
  CHECK_THROWS_AS(n.c(3.5), Error);
}

TEST_CASE("decay rate: ratio form equals the closed form") {
  for (double g0 : {0.01, 0.25, 0.5, 0.8, 5.0}) {
    const DampedJCParams p{.omega0 = 1.0, .gamma0 = g0, .lambda = 1.0};
    const auto rates = jc_rates(jc_analytic_amplitude(p));
    const auto zeros = jc_amplitude_zeros(p, 5.0);
    for (int k = 0; k < 100; ++k) {
      const double t = 5.0 * (k + 0.5) / 100.0;
      bool near_zero = false;
      for (double z : zeros) near_zero = near_zero || std::abs(t - z) < 1e-3;
      if (near_zero) continue;
      const double a = rates.gamma(t);
      const double b = jc_decay_rate_closed_form(p, t);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
      CHECK(rates.lamb_shift(t) == doctest::Approx(0.0).epsilon(1e-10));
    }
    CHECK(rates.gamma(0.0) == 0.0);
  }
  const DampedJCParams q{.omega0 = 1.0, .gamma0 = 0.25, .lambda = 1.0};
  const double ref = oracle::jc_amplitude(0.25, 1.0, 1.0).cdot / oracle::jc_amplitude(0.25, 1.0, 1.0).c;
  CHECK(jc_decay_rate_closed_form(q, 1.0) == doctest::Approx(-2.0 * ref).epsilon(1e-12));
}

TEST_CASE("decay rate approaches its Markovian limit") {
  const DampedJCParams p{.omega0 = 1.0, .gamma0 = 0.01, .lambda = 1.0};
  const double d = std::sqrt(1.0 - 0.02);
  CHECK(jc_rates(jc_analytic_amplitude(p)).gamma(50.0) == doctest::Approx(0.02 / (d + 1.0)).epsilon(1e-9));
  CHECK(0.02 / (d + 1.0) == doctest::Approx(0.01).epsilon(0.01));
}

TEST_CASE("amplitude zeros in the oscillatory regime") {
  const DampedJCParams markov{.omega0 = 1.0, .gamma0 = 0.25, .lambda = 1.0};
  CHECK(jc_amplitude_zeros(markov, 100.0).empty());
  const DampedJCParams osc{.omega0 = 1.0, .gamma0 = 5.0, .lambda = 1.0};
  const auto zeros = jc_amplitude_zeros(osc, 5.0);
  REQUIRE(zeros.size() == 2);
  for (double z : zeros) {
    CHECK(std::abs(oracle::jc_amplitude(5.0, 1.0, z).c) < 1e-13);
    CHECK_THROWS_AS(jc_rates(jc_analytic_amplitude(osc)).gamma(z), Error);
  }
  // Exactly two sign changes on [0, 5].
  int changes = 0;
  for (int k = 0; k < 5000; ++k) {
    const double a = oracle::jc_amplitude(5.0, 1.0, 5.0 * k / 5000).c;
    const double b = oracle::jc_amplitude(5.0, 1.0, 5.0 * (k + 1) / 5000).c;
    changes += (a > 0) != (b > 0);
  }
  CHECK(changes == 2);
}

TEST_CASE("JC generator: dark ground state, traceless Hermitian output") {
  const DampedJCParams p{.omega0 = 1.0, .gamma0 = 0.3, .lambda = 1.0};
  const auto g = jc_generator(p);
  CHECK(max_abs(g(0.7, jc_ground_state().matrix())) == 0.0);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(0.0, 10.0);
    const ComplexMatrix out = g(t, random_density_operator(2, rng).matrix());
    CHECK(std::abs(out.trace()) < 1e-10);
    CHECK(hermiticity_defect(out) < 1e-10);
  }
}

TEST_CASE("JC master equation reproduces the exact excited population") {
  for (double g0 : {0.25, 0.5}) {
    const DampedJCParams p{.omega0 = 1.0, .gamma0 = g0, .lambda = 1.0};
    const auto r = evolve(jc_generator(p), jc_excited_state(), 5.0, 20000);
    double worst = 0.0;
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
      const double ref = oracle::excited_population(g0, 1.0, r.trajectory.times[n]);
      worst = std::max(worst, std::abs(r.trajectory.states[n].matrix()(1, 1).real() - ref));
    }
    CHECK(worst < 1e-6);
    CHECK(r.converged);
  }
}

TEST_CASE("JC coherence follows c(t) e^{-i omega0 t}") {
  const DampedJCParams p{.omega0 = 2.0, .gamma0 = 0.3, .lambda = 1.0};
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const auto rho0 = DensityOperator::pure(plus);
  const auto r = evolve(jc_generator(p), rho0, 3.0, 6000, {.check_convergence = false});
  const auto exact = jc_exact_trajectory(p, rho0, 3.0, 6000);
  double worst = 0.0;
  for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
    worst = std::max(worst, max_abs(r.trajectory.states[n].matrix() - exact.states[n].matrix()));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("JC generator refuses to step across a zero of the amplitude") {
  const DampedJCParams p{.omega0 = 1.0, .gamma0 = 5.0, .lambda = 1.0};
  try {
    evolve(jc_generator(p), jc_excited_state(), 5.0, 20000);
    FAIL("expected AmplitudeZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmplitudeZero);
  }
}

TEST_CASE("exact trajectory stays valid through amplitude zeros") {
  const DampedJCParams p{.omega0 = 1.0, .gamma0 = 5.0, .lambda = 1.0};
  const auto traj = jc_exact_trajectory(p, jc_excited_state(), 5.0, 5000);
  REQUIRE(traj.size() == 5001);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    CHECK(std::abs(traj.states[n].matrix()(1, 1).real() - oracle::excited_population(5.0, 1.0, traj.times[n])) < 1e-12);
    CHECK(std::abs(traj.rates[n].trace()) < 1e-14);
  }
  CHECK_THROWS_AS(jc_exact_trajectory(p, DensityOperator::maximally_mixed(3), 1.0, 10), Error);
}

TEST_CASE("JC parameter validation") {
  CHECK_THROWS_AS(jc_generator({.omega0 = 1.0, .gamma0 = 0.0, .lambda = 1.0}), Error);
  CHECK_THROWS_AS(jc_analytic_amplitude({.omega0 = 1.0, .gamma0 = 1.0, .lambda = -1.0}), Error);
}
