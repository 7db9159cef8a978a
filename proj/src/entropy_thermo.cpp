#include "qsl/entropy_thermo.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace qsl {

namespace {

constexpr double kDistributionTol = 1e-9;
constexpr double kUnitaryTol = 1e-9;

double entropy_of(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

}  // namespace

MarginalDistribution make_distribution(std::vector<double> probabilities, std::string basis_id) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) throw Error(ErrorCode::InvalidDistribution, "negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTol) {
    throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + std::to_string(sum));
  }
  return {std::move(probabilities), std::move(basis_id)};
}

double von_neumann_entropy(const DensityOperator& rho) {
  const RealVector& w = rho.eigenvalues();
  return entropy_of(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

MarginalDistribution marginal(const DensityOperator& rho, const ComplexMatrix& basis, std::string basis_id) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim()) {
    throw Error(ErrorCode::DimMismatch, "marginal: basis and state dimensions differ");
  }
  const ComplexMatrix gram = basis.adjoint() * basis;
  const double defect = (gram - ComplexMatrix::Identity(rho.dim(), rho.dim())).cwiseAbs().maxCoeff();
  if (!(defect <= kUnitaryTol)) {
    throw Error(ErrorCode::NotUnitaryBasis, "marginal: basis deviates from unitary by " + std::to_string(defect));
  }
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index x = 0; x < rho.dim(); ++x) {
    const double v = basis.col(x).dot(rho.matrix() * basis.col(x)).real();
    p[static_cast<std::size_t>(x)] = std::max(v, 0.0);
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return make_distribution(std::move(p), std::move(basis_id));
}

double shannon_information(const MarginalDistribution& p) {
  // Re-validate: the struct is an open aggregate.
  make_distribution(p.probabilities);
  return entropy_of(p.probabilities);
}

double boltzmann_entropy(int d, double k_b) {
  if (d < 1) throw Error(ErrorCode::InvalidState, "boltzmann_entropy: d must be >= 1");
  return k_b * std::log(static_cast<double>(d));
}

double thermal_mean_energy(const RealVector& spectrum, double beta) {
  const double e0 = spectrum.minCoeff();
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const double w = std::exp(-beta * (spectrum(i) - e0));
    num += w * (spectrum(i) - e0);
    den += w;
  }
  return e0 + num / den;
}

ThermalState gibbs_state(const ComplexMatrix& hamiltonian, double energy) {
  const auto [spectrum, vectors] = eig_hermitian(hamiltonian);
  const Eigen::Index d = spectrum.size();
  const double e_min = spectrum(0);
  const double e_max = spectrum(d - 1);
  if (!(energy > e_min)) {
    throw Error(ErrorCode::EnergyBelowGroundState,
                "gibbs_state: E = " + std::to_string(energy) + " <= E_min = " + std::to_string(e_min));
  }

  double beta = 0.0;
  const double mean = spectrum.mean();
  if (energy < mean) {
    const double beta_limit = 1e6 / (e_max - e_min);
    double lo = 0.0;
    double hi = 1.0;
    while (thermal_mean_energy(spectrum, hi) > energy) {
      lo = hi;
      hi *= 2.0;
      if (hi > beta_limit) {
        throw Error(ErrorCode::NoBracket, "gibbs_state: bracket expansion exceeded beta = " + std::to_string(beta_limit));
      }
    }
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (thermal_mean_energy(spectrum, mid) > energy) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // Pick the endpoint with the smaller residual.
    const double r_lo = std::abs(thermal_mean_energy(spectrum, lo) - energy);
    const double r_hi = std::abs(thermal_mean_energy(spectrum, hi) - energy);
    beta = r_lo <= r_hi ? lo : hi;
  }

  RealVector weights(d);
  for (Eigen::Index i = 0; i < d; ++i) weights(i) = std::exp(-beta * (spectrum(i) - e_min));
  const double sum = weights.sum();
  const RealVector p = weights / sum;
  ComplexMatrix rho = vectors * p.cast<Complex>().asDiagonal() * vectors.adjoint();

  ThermalState ts{.beta = beta,
                  .log_z = -beta * e_min + std::log(sum),
                  .z = 0.0,
                  .free_energy = 0.0,
                  .energy = p.dot(spectrum),
                  .target_energy = energy,
                  .state = DensityOperator::project(hermitian_part(rho), ErrorCode::InvalidState)};
  ts.z = std::exp(ts.log_z);
  ts.free_energy = beta > 0.0 ? -ts.log_z / beta : -std::numeric_limits<double>::infinity();
  return ts;
}

double gibbs_entropy(const ThermalState& ts, double k_b) {
  if (ts.beta == 0.0) return k_b * ts.log_z;
  return k_b * ts.beta * (ts.energy - ts.free_energy);
}

ComplexMatrix truncated_oscillator_hamiltonian(double hbar_omega, int cutoff) {
  if (cutoff < 2) throw Error(ErrorCode::ConfigInvalid, "truncated_oscillator_hamiltonian: cutoff must be >= 2");
  if (!(hbar_omega > 0.0)) throw Error(ErrorCode::ConfigInvalid, "truncated_oscillator_hamiltonian: hbar_omega must be positive");
  ComplexMatrix h = ComplexMatrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) h(n, n) = hbar_omega * (n + 0.5);
  return h;
}

int oscillator_cutoff(double hbar_omega, double energy, double tail, int max_cutoff) {
  for (int n = 2; n <= max_cutoff; ++n) {
    const ComplexMatrix h = truncated_oscillator_hamiltonian(hbar_omega, n);
    if (energy >= 0.5 * hbar_omega * n) continue;  // would be maximally mixed
    const ThermalState ts = gibbs_state(h, energy);
    if (ts.state.matrix()(n - 1, n - 1).real() < tail) return n;
  }
  throw Error(ErrorCode::NoConvergence, "oscillator_cutoff: tail rule not met below max_cutoff");
}

}  // namespace qsl
