#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "qsl/error.hpp"

namespace qsl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entrywise tolerance on |A - A^dagger| for a matrix to count as Hermitian.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
/// Eigenvalues in [-kClipWindow, 0) are clipped to zero; anything lower is an error.
inline constexpr double kClipWindow = 1e-12;

struct EigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, unitary
};

double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);
ComplexMatrix hermitian_part(const ComplexMatrix& a);

EigenDecomposition eig_hermitian(const ComplexMatrix& a);
RealVector eigenvalues_hermitian(const ComplexMatrix& a);

/// tr|A| for Hermitian A, i.e. the sum of absolute eigenvalues.
double trace_norm(const ComplexMatrix& a);
/// |A| = V diag(|w|) V^dagger.
ComplexMatrix matrix_abs(const ComplexMatrix& a);

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}
inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

/// Hermitian, positive semidefinite, unit-trace matrix. Immutable once built.
///
/// Construction symmetrizes the input, clips eigenvalues in [-1e-12, 0) to
/// zero and renormalizes the trace. Inputs further from the state space throw.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);

  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);
  static DensityOperator diagonal(std::span<const double> probabilities);
  static DensityOperator basis_state(Eigen::Index dim, Eigen::Index k);

  /// Re-projection used by integrators: same clipping rule, but reports
  /// failures with `code` and tolerates trace drift (the result is renormalized).
  static DensityOperator project(const ComplexMatrix& m, ErrorCode code);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  /// Spectrum after clipping, ascending.
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }

  double purity() const;

 private:
  DensityOperator(ComplexMatrix m, RealVector w) : matrix_(std::move(m)), eigenvalues_(std::move(w)) {}
  static DensityOperator build(const ComplexMatrix& m, ErrorCode code, bool check_trace);

  ComplexMatrix matrix_;
  RealVector eigenvalues_;
};

/// mt19937_64 with a hand-rolled Box-Muller transform, so samples are
/// reproducible across standard libraries (std::normal_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// splitmix64 mix of (base, index); gives each sample of a batch its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

ComplexMatrix ginibre(Eigen::Index dim, Rng& rng);
/// G G^dagger / tr(G G^dagger) with G Ginibre.
DensityOperator random_density_operator(Eigen::Index dim, std::uint64_t seed);
DensityOperator random_density_operator(Eigen::Index dim, Rng& rng);
/// (G + G^dagger) / 2 with G Ginibre.
ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng);
/// Haar unitary from the phase-corrected QR of a Ginibre matrix.
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

}  // namespace qsl
