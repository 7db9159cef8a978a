#pragma once

// Real-arithmetic reference for the damped JC amplitude, written separately
// from the library's complex-d evaluation.

#include <cmath>

namespace oracle {

struct Amp {
  double c;
  double cdot;
};

// c'' + lambda c' + (gamma0 lambda / 2) c = 0, c(0) = 1, c'(0) = 0.
inline Amp jc_amplitude(double gamma0, double lambda, double t) {
  const double disc = lambda * lambda - 2.0 * gamma0 * lambda;
  const double env = std::exp(-0.5 * lambda * t);
  if (disc > 0.0) {
    const double d = std::sqrt(disc);
    const double s = std::sinh(0.5 * d * t);
    return {env * (std::cosh(0.5 * d * t) + lambda * s / d), -gamma0 * lambda * env * s / d};
  }
  if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    const double s = std::sin(0.5 * w * t);
    return {env * (std::cos(0.5 * w * t) + lambda * s / w), -gamma0 * lambda * env * s / w};
  }
  return {env * (1.0 + 0.5 * lambda * t), -gamma0 * lambda * env * 0.5 * t};
}

// Excited population |c|^2 for an excited initial state.
inline double excited_population(double gamma0, double lambda, double t) {
  const double c = jc_amplitude(gamma0, lambda, t).c;
  return c * c;
}

}  // namespace oracle
