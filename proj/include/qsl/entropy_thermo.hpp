#pragma once

#include <string>
#include <vector>

#include "qsl/matcore.hpp"

namespace qsl {

/// rho(x) = <x|rho|x> over the eigenbasis of some observable X.
struct MarginalDistribution {
  std::vector<double> probabilities;
  std::string basis_id;
};

/// Validates nonnegativity and normalization (1e-9); throws InvalidDistribution.
MarginalDistribution make_distribution(std::vector<double> probabilities, std::string basis_id = {});

struct ThermalState {
  double beta = 0.0;
  double log_z = 0.0;
  double z = 1.0;
  /// -(1/beta) ln Z; -infinity at beta = 0.
  double free_energy = 0.0;
  /// Mean energy tr(state H) of the returned state.
  double energy = 0.0;
  double target_energy = 0.0;
  DensityOperator state;
};

/// -tr(rho ln rho) in nats, with 0 ln 0 := 0.
double von_neumann_entropy(const DensityOperator& rho);

/// Diagonal of rho in the orthonormal basis given by the columns of `basis`.
MarginalDistribution marginal(const DensityOperator& rho, const ComplexMatrix& basis, std::string basis_id = {});

/// -sum p ln p in nats.
double shannon_information(const MarginalDistribution& p);

/// k_B ln d.
double boltzmann_entropy(int d, double k_b = 1.0);

/// <H>_beta for the spectrum of H; strictly decreasing in beta for a nondegenerate spread.
double thermal_mean_energy(const RealVector& spectrum, double beta);

/// Maximum-entropy state exp(-beta H)/Z with tr(rho H) = energy.
///
/// Requests at or above tr(H)/d give the maximally mixed state (beta = 0);
/// negative temperatures are not produced. Otherwise beta is bracketed by
/// doubling from [0, 1] and refined by bisection on the monotone map
/// beta -> <H>_beta.
ThermalState gibbs_state(const ComplexMatrix& hamiltonian, double energy);

/// k_B beta (E - F); the beta -> 0 limit k_B ln Z is used at beta = 0.
double gibbs_entropy(const ThermalState& ts, double k_b = 1.0);

/// diag(hbar_omega (n + 1/2)), n = 0..cutoff-1.
ComplexMatrix truncated_oscillator_hamiltonian(double hbar_omega, int cutoff);

/// Smallest cutoff N >= 2 whose Gibbs state at `energy` leaves less than
/// `tail` population in the top level.
int oscillator_cutoff(double hbar_omega, double energy, double tail = 1e-12, int max_cutoff = 4096);

}  // namespace qsl
