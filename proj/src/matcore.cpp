#include "qsl/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qsl {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_hermitian(const ComplexMatrix& a, const char* what) {
  require_square(a, what);
  const double defect = hermiticity_defect(a);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + ": max |A - A^dagger| = " + std::to_string(defect));
  }
}

/// Closed-form spectrum for the 2x2 case, which dominates qubit trajectories.
RealVector eigenvalues_2x2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(h(1, 0)));
  RealVector w(2);
  w << mean - r, mean + r;
  return w;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (!a.allFinite()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermiticity_defect(a) <= tol; }

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

EigenDecomposition eig_hermitian(const ComplexMatrix& a) {
  require_hermitian(a, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eig_hermitian: QR iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigenvalues_hermitian(const ComplexMatrix& a) {
  require_hermitian(a, "eigenvalues_hermitian");
  if (a.rows() == 2) return eigenvalues_2x2(hermitian_part(a));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eigenvalues_hermitian: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

double trace_norm(const ComplexMatrix& a) { return eigenvalues_hermitian(a).cwiseAbs().sum(); }

ComplexMatrix matrix_abs(const ComplexMatrix& a) {
  const auto [w, v] = eig_hermitian(a);
  return v * w.cwiseAbs().cast<Complex>().asDiagonal() * v.adjoint();
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(const ComplexMatrix& m) : DensityOperator(build(m, ErrorCode::InvalidState, true)) {}

DensityOperator DensityOperator::project(const ComplexMatrix& m, ErrorCode code) { return build(m, code, false); }

DensityOperator DensityOperator::build(const ComplexMatrix& m, ErrorCode code, bool check_trace) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(code, "density operator must be a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw Error(code == ErrorCode::InvalidState ? code : ErrorCode::NonFiniteState, "non-finite entries");
  }
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw Error(code, "not Hermitian (max |A - A^dagger| = " + std::to_string(defect) + ")");
  }
  ComplexMatrix h = hermitian_part(m);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw Error(code, "non-positive trace");
  if (check_trace && std::abs(tr - 1.0) > kTraceTol) {
    throw Error(code, "trace " + std::to_string(tr) + " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  RealVector w;
  if (h.rows() == 2) {
    w = eigenvalues_2x2(h);
  } else {
    solver.compute(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NoConvergence, "density operator spectrum did not converge");
    }
    w = solver.eigenvalues();
  }
  // The clipping window is relative to unit trace.
  const double scale = check_trace ? 1.0 : std::max(tr, 0.0);
  if (w.minCoeff() < -kClipWindow * std::max(scale, 1.0)) {
    throw Error(code, "eigenvalue " + std::to_string(w.minCoeff()) + " below clipping window");
  }
  if (w.minCoeff() < 0.0) {
    solver.compute(h, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NoConvergence, "density operator eigenvectors did not converge");
    }
    w = solver.eigenvalues().cwiseMax(0.0);
    w /= w.sum();
    const ComplexMatrix& v = solver.eigenvectors();
    h = hermitian_part(v * w.cast<Complex>().asDiagonal() * v.adjoint());
  } else {
    h /= tr;
    w /= tr;
  }
  return DensityOperator(std::move(h), std::move(w));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidState, "pure: zero or non-finite vector");
  const ComplexVector u = psi / n;
  return DensityOperator(ComplexMatrix(u * u.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidState, "maximally_mixed: dim must be positive");
  return DensityOperator(ComplexMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityOperator DensityOperator::diagonal(std::span<const double> probabilities) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                                        static_cast<Eigen::Index>(probabilities.size()));
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probabilities[i];
  }
  return DensityOperator(m);
}

DensityOperator DensityOperator::basis_state(Eigen::Index dim, Eigen::Index k) {
  if (k < 0 || k >= dim) throw Error(ErrorCode::InvalidState, "basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityOperator(m);
}

double DensityOperator::purity() const { return eigenvalues_.squaredNorm(); }

// ---------------------------------------------------------------------------
// Sampling

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  return r * std::cos(phi);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ComplexMatrix ginibre(Eigen::Index dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

DensityOperator random_density_operator(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidState, "random_density_operator: dim must be positive");
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(hermitian_part(m));
}

DensityOperator random_density_operator(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_density_operator(dim, rng);
}

ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return q;
}

}  // namespace qsl
