#include "qsl/qsl_rates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace qsl {

namespace {

constexpr double kLn2 = std::numbers::ln2;
/// ell and Lambda tau at or below this count as no motion.
constexpr double kMotionFloor = 1e-14;

const ComplexMatrix& require_hermitian_rate(const ComplexMatrix& rate) {
  const double scale = std::max(1.0, rate.cwiseAbs().maxCoeff());
  if (hermiticity_defect(rate) > kHermitianTol * scale) {
    throw Error(ErrorCode::NotHermitian, "trajectory rate is not Hermitian");
  }
  return rate;
}

void require_nonempty(const Trajectory& traj, const char* what) {
  if (traj.size() < 2 || traj.rates.size() != traj.size() || traj.states.size() != traj.size()) {
    throw Error(ErrorCode::EmptyTrajectory, std::string(what) + ": trajectory needs >= 2 points with rates");
  }
  if (!(traj.tau() > 0.0)) throw Error(ErrorCode::EmptyTrajectory, std::string(what) + ": zero-length trajectory");
}

}  // namespace

std::string Flags::to_string() const {
  std::string out;
  auto add = [&](Flag f, const char* name) {
    if (!has(f)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(Flag::AmplitudeGuard, "AMPLITUDE_GUARD");
  add(Flag::NonConverged, "NONCONVERGED");
  add(Flag::Stationary, "STATIONARY");
  return out;
}

Flags Flags::parse(const std::string& text) {
  Flags f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '|')) {
    if (item.empty()) continue;
    if (item == "AMPLITUDE_GUARD") {
      f.set(Flag::AmplitudeGuard);
    } else if (item == "NONCONVERGED") {
      f.set(Flag::NonConverged);
    } else if (item == "STATIONARY") {
      f.set(Flag::Stationary);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown flag '" + item + "'");
    }
  }
  return f;
}

double trapezoid(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw Error(ErrorCode::DimMismatch, "trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t n = 1; n < times.size(); ++n) {
    acc += 0.5 * (times[n] - times[n - 1]) * (values[n] + values[n - 1]);
  }
  return acc;
}

SpeedSummary speed_summary(const Trajectory& traj) {
  require_nonempty(traj, "speed_summary");
  std::vector<double> norms(traj.size());
  for (std::size_t n = 0; n < traj.size(); ++n) norms[n] = trace_norm(require_hermitian_rate(traj.rates[n]));

  SpeedSummary ss;
  ss.tau = traj.tau() - traj.times.front();
  ss.ell = trace_distance(traj.states.back(), traj.states.front());
  ss.lambda_tau = trapezoid(traj.times, norms) / ss.tau;
  if (ss.ell <= kMotionFloor && ss.lambda_tau * ss.tau <= kMotionFloor) {
    ss.stationary = true;
    ss.tau_qsl = ss.tau;
  } else {
    ss.tau_qsl = 2.0 * ss.ell / ss.lambda_tau;
  }
  return ss;
}

MarginalSpeedSummary marginal_speed_summary(const Trajectory& traj, const ComplexMatrix& basis,
                                            const std::string& basis_id) {
  require_nonempty(traj, "marginal_speed_summary");
  MarginalSpeedSummary mss;
  mss.initial = marginal(traj.states.front(), basis, basis_id);
  mss.final = marginal(traj.states.back(), basis, basis_id);

  std::vector<double> norms(traj.size());
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const ComplexMatrix& rate = require_hermitian_rate(traj.rates[n]);
    double acc = 0.0;
    for (Eigen::Index x = 0; x < basis.cols(); ++x) acc += std::abs(basis.col(x).dot(rate * basis.col(x)).real());
    norms[n] = acc;
  }
  mss.tau = traj.tau() - traj.times.front();
  mss.w1 = wasserstein_p(mss.final, mss.initial, 1);
  mss.lambda_x_tau = trapezoid(traj.times, norms) / mss.tau;
  if (mss.w1 <= kMotionFloor && mss.lambda_x_tau * mss.tau <= kMotionFloor) {
    mss.stationary = true;
    mss.tau_qsl_x = mss.tau;
  } else {
    mss.tau_qsl_x = mss.w1 / mss.lambda_x_tau;
  }
  return mss;
}

double entropy_change(const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "entropy_change: empty trajectory");
  return von_neumann_entropy(traj.states.back()) - von_neumann_entropy(traj.states.front());
}

double info_rate_exact(const Trajectory& traj, const SpeedSummary& ss) {
  if (ss.stationary || ss.ell <= kMotionFloor) return 0.0;
  return std::abs(entropy_change(traj)) / (ss.tau_qsl * kLn2);
}

double shannon_rate_exact(const MarginalSpeedSummary& mss) {
  if (mss.stationary || mss.w1 <= kMotionFloor) return 0.0;
  const double ds = shannon_information(mss.final) - shannon_information(mss.initial);
  return std::abs(ds) / (mss.tau_qsl_x * kLn2);
}

double bound_micro(const SpeedSummary& ss, int d, bool include_additive) {
  if (d < 1) throw Error(ErrorCode::ConfigInvalid, "bound_micro: dimension must be >= 1");
  double b = std::log(static_cast<double>(d)) / kLn2 * ss.lambda_tau;
  if (include_additive) b += 1.0 / (std::numbers::e * ss.tau_qsl * kLn2);
  return b;
}

double bound_micro_boltzmann(const SpeedSummary& ss, int d, bool include_additive, const Units& units) {
  double b = boltzmann_entropy(d, units.k_b) * ss.lambda_tau / (units.k_b * kLn2);
  if (include_additive) b += 1.0 / (std::numbers::e * ss.tau_qsl * kLn2);
  return b;
}

double bound_canonical(const SpeedSummary& ss, const ComplexMatrix& hamiltonian, double energy, double k_b) {
  const ThermalState ts = gibbs_state(hamiltonian, energy);
  return gibbs_entropy(ts, k_b) * ss.lambda_tau / (k_b * kLn2);
}

double bound_shannon(const MarginalSpeedSummary& mss, const ContinuityCoefficients& coeffs) {
  return coeffs.alpha() * mss.lambda_x_tau / kLn2;
}

double bekenstein_bound(double energy, double hbar) {
  if (!(energy >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "bekenstein_bound: E must be >= 0");
  if (!(hbar > 0.0)) throw Error(ErrorCode::ConfigInvalid, "bekenstein_bound: hbar must be positive");
  return std::numbers::pi * energy / (hbar * kLn2);
}

double pendry_bound(double power, double hbar) {
  if (!(power >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "pendry_bound: E_dot must be >= 0");
  if (!(hbar > 0.0)) throw Error(ErrorCode::ConfigInvalid, "pendry_bound: hbar must be positive");
  return std::sqrt(std::numbers::pi * power / (3.0 * hbar * kLn2 * kLn2));
}

BoundReport make_bound_report(const Trajectory& traj, const SpeedSummary& ss, int d) {
  BoundReport r;
  r.info_rate_exact = info_rate_exact(traj, ss);
  r.bound_micro = bound_micro(ss, d, false);
  r.bound_micro_with_additive = bound_micro(ss, d, true);
  if (ss.stationary) r.flags.set(Flag::Stationary);
  return r;
}

}  // namespace qsl
