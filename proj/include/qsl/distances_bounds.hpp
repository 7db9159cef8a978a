#pragma once

#include <cstdint>
#include <vector>

#include "qsl/entropy_thermo.hpp"
#include "qsl/matcore.hpp"

namespace qsl {

/// Additive slack used by every inequality check.
inline constexpr double kInequalitySlack = 1e-12;

/// Constants of the Shannon-information continuity bound,
/// alpha = c1 (sqrt<x^2>_rho + sqrt<x^2>_sigma) + c2.
struct ContinuityCoefficients {
  double c1 = 1.0;
  double c2 = 0.0;
  double second_moment_rho = 0.0;
  double second_moment_sigma = 0.0;

  double alpha() const;
};

/// Builds coefficients with second moments sum_x p(x) x^2 over the given labels.
ContinuityCoefficients continuity_coefficients(double c1, double c2, const MarginalDistribution& p,
                                               const MarginalDistribution& q, const std::vector<double>& labels);

/// (1/2) tr|rho - sigma|.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// (sum_x |p(x) - q(x)|^order)^(1/order) for order in {1, 2}. This is the
/// p-norm of the difference of the marginals, not an optimal-transport cost.
double wasserstein_p(const MarginalDistribution& p, const MarginalDistribution& q, int order);

/// 2 ell ln d + 1/e.
double fannes_rhs(double ell, int d);

/// 2 ell H(rho_eq(E/ell)) + 2 ln 2, with the first term taken as 0 at ell = 0.
double winter_rhs(double ell, const ComplexMatrix& hamiltonian, double energy);

/// alpha * W.
double shannon_continuity_rhs(const ContinuityCoefficients& coeffs, double w, int order);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

InequalityReport check_fannes(const DensityOperator& rho, const DensityOperator& sigma);
InequalityReport check_winter(const DensityOperator& rho, const DensityOperator& sigma,
                              const ComplexMatrix& hamiltonian, double energy);

// ---------------------------------------------------------------------------
// Batched property kernels. Sample i draws from derive_seed(seed, i), so the
// result is independent of the thread count. The *_serial variants are the
// reference implementations the parallel kernels are tested against.

struct BatchSummary {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min over samples of rhs - lhs
};

/// Random state pairs with d drawn uniformly from [d_min, d_max].
BatchSummary fannes_batch(std::uint64_t seed, std::size_t count, int d_min, int d_max, int workers = 1);
BatchSummary fannes_batch_serial(std::uint64_t seed, std::size_t count, int d_min, int d_max);

/// Random marginal pairs of size in [2, n_max]; counts W2 > W1 + slack.
BatchSummary wasserstein_order_batch(std::uint64_t seed, std::size_t count, int n_max, int workers = 1);
BatchSummary wasserstein_order_batch_serial(std::uint64_t seed, std::size_t count, int n_max);

}  // namespace qsl
