#include "qsl/distances_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

namespace qsl {

double ContinuityCoefficients::alpha() const {
  return c1 * (std::sqrt(second_moment_rho) + std::sqrt(second_moment_sigma)) + c2;
}

ContinuityCoefficients continuity_coefficients(double c1, double c2, const MarginalDistribution& p,
                                               const MarginalDistribution& q, const std::vector<double>& labels) {
  if (labels.size() != p.probabilities.size() || labels.size() != q.probabilities.size()) {
    throw Error(ErrorCode::LabelMismatch, "continuity_coefficients: label count differs from distribution size");
  }
  if (!(c1 > 0.0) || !(c2 >= 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "continuity_coefficients: need c1 > 0 and c2 >= 0");
  }
  ContinuityCoefficients c{.c1 = c1, .c2 = c2};
  for (std::size_t x = 0; x < labels.size(); ++x) {
    c.second_moment_rho += p.probabilities[x] * labels[x] * labels[x];
    c.second_moment_sigma += q.probabilities[x] * labels[x] * labels[x];
  }
  return c;
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimMismatch, "trace_distance: dimensions differ");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

double wasserstein_p(const MarginalDistribution& p, const MarginalDistribution& q, int order) {
  if (p.probabilities.size() != q.probabilities.size() || p.basis_id != q.basis_id) {
    throw Error(ErrorCode::LabelMismatch, "wasserstein_p: distributions are over different label sets");
  }
  double acc = 0.0;
  switch (order) {
    case 1:
      for (std::size_t x = 0; x < p.probabilities.size(); ++x) acc += std::abs(p.probabilities[x] - q.probabilities[x]);
      return acc;
    case 2:
      for (std::size_t x = 0; x < p.probabilities.size(); ++x) {
        const double diff = p.probabilities[x] - q.probabilities[x];
        acc += diff * diff;
      }
      return std::sqrt(acc);
    default:
      throw Error(ErrorCode::ConfigInvalid, "wasserstein_p: order must be 1 or 2");
  }
}

double fannes_rhs(double ell, int d) {
  return 2.0 * ell * std::log(static_cast<double>(d)) + 1.0 / std::numbers::e;
}

double winter_rhs(double ell, const ComplexMatrix& hamiltonian, double energy) {
  const double tail = 2.0 * std::numbers::ln2;
  if (ell == 0.0) return tail;
  const ThermalState ts = gibbs_state(hamiltonian, energy / ell);
  return 2.0 * ell * von_neumann_entropy(ts.state) + tail;
}

double shannon_continuity_rhs(const ContinuityCoefficients& coeffs, double w, int order) {
  if (order != 1 && order != 2) throw Error(ErrorCode::ConfigInvalid, "shannon_continuity_rhs: order must be 1 or 2");
  return coeffs.alpha() * w;
}

InequalityReport check_fannes(const DensityOperator& rho, const DensityOperator& sigma) {
  InequalityReport r;
  r.lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  r.rhs = fannes_rhs(trace_distance(rho, sigma), static_cast<int>(rho.dim()));
  r.satisfied = r.lhs <= r.rhs + kInequalitySlack;
  return r;
}

InequalityReport check_winter(const DensityOperator& rho, const DensityOperator& sigma,
                              const ComplexMatrix& hamiltonian, double energy) {
  InequalityReport r;
  r.lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  r.rhs = winter_rhs(trace_distance(rho, sigma), hamiltonian, energy);
  r.satisfied = r.lhs <= r.rhs + kInequalitySlack;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double fannes_sample(std::uint64_t seed, std::size_t i, int d_min, int d_max) {
  Rng rng(derive_seed(seed, i));
  const int d = d_min + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d_max - d_min + 1));
  const DensityOperator rho = random_density_operator(d, rng);
  DensityOperator sigma = rho;
  switch (i % 3) {
    case 0:
      sigma = random_density_operator(d, rng);
      break;
    case 1: {
      // Nearby pair: small convex perturbation.
      const double t = rng.uniform(0.0, 0.2);
      const DensityOperator other = random_density_operator(d, rng);
      sigma = DensityOperator(ComplexMatrix((1.0 - t) * rho.matrix() + t * other.matrix()));
      break;
    }
    default: {
      ComplexVector psi(d);
      for (int k = 0; k < d; ++k) psi(k) = rng.complex_normal();
      sigma = DensityOperator::pure(psi);
      break;
    }
  }
  const InequalityReport r = check_fannes(rho, sigma);
  return r.rhs - r.lhs;
}

std::vector<double> simplex_point(Rng& rng, int n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& v : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v = -std::log(u);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

double wasserstein_sample(std::uint64_t seed, std::size_t i, int n_max) {
  Rng rng(derive_seed(seed, i));
  const int n = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
  const MarginalDistribution p = make_distribution(simplex_point(rng, n), "x");
  const MarginalDistribution q = make_distribution(simplex_point(rng, n), "x");
  return wasserstein_p(p, q, 1) - wasserstein_p(p, q, 2);
}

BatchSummary summarize(const std::vector<double>& margins) {
  BatchSummary s;
  s.samples = margins.size();
  s.worst_margin = margins.empty() ? 0.0 : margins.front();
  for (double m : margins) {
    if (m < -kInequalitySlack) ++s.violations;
    s.worst_margin = std::min(s.worst_margin, m);
  }
  return s;
}

template <class Sample>
std::vector<double> run_parallel(std::size_t count, int workers, Sample&& sample) {
  std::vector<double> margins(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1))
  for (std::int64_t i = 0; i < n; ++i) {
    margins[static_cast<std::size_t>(i)] = sample(static_cast<std::size_t>(i));
  }
  return margins;
}

template <class Sample>
std::vector<double> run_serial(std::size_t count, Sample&& sample) {
  std::vector<double> margins(count);
  for (std::size_t i = 0; i < count; ++i) margins[i] = sample(i);
  return margins;
}

void check_range(int lo, int hi, int min_lo, const char* what) {
  if (lo < min_lo || hi < lo) throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": invalid dimension range");
}

}  // namespace

BatchSummary fannes_batch(std::uint64_t seed, std::size_t count, int d_min, int d_max, int workers) {
  check_range(d_min, d_max, 2, "fannes_batch");
  return summarize(run_parallel(count, workers, [&](std::size_t i) { return fannes_sample(seed, i, d_min, d_max); }));
}

BatchSummary fannes_batch_serial(std::uint64_t seed, std::size_t count, int d_min, int d_max) {
  check_range(d_min, d_max, 2, "fannes_batch_serial");
  return summarize(run_serial(count, [&](std::size_t i) { return fannes_sample(seed, i, d_min, d_max); }));
}

BatchSummary wasserstein_order_batch(std::uint64_t seed, std::size_t count, int n_max, int workers) {
  check_range(2, n_max, 2, "wasserstein_order_batch");
  return summarize(run_parallel(count, workers, [&](std::size_t i) { return wasserstein_sample(seed, i, n_max); }));
}

BatchSummary wasserstein_order_batch_serial(std::uint64_t seed, std::size_t count, int n_max) {
  check_range(2, n_max, 2, "wasserstein_order_batch_serial");
  return summarize(run_serial(count, [&](std::size_t i) { return wasserstein_sample(seed, i, n_max); }));
}

}  // namespace qsl
