#pragma once

// Classical fixed-step fourth-order Runge-Kutta step for any vector-space
// state type (Eigen matrices and vectors).
namespace qsl::detail {

template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h, const State& k1) {
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
  return rk4_step(f, t, y, h, State(f(t, y)));
}

}  // namespace qsl::detail
