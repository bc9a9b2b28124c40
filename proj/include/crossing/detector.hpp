#pragma once

// Irreversible detector in x < 0 and the continuous-measurement proposal.
//
// Detector: the no-detection amplitude obeys a Schrodinger equation with
// the imaginary potential -i hbar gamma_d theta(-x) / 2, so
//   p_nd = || exp(-i H t/hbar - gamma_d theta(-x) t / 2) psi0 ||^2.
// Continuous measurement: the same evolution with the real damping rate
// V_eff(x) obtained by integrating the Gaussian measurement weight over
// positive measured trajectories, slice by slice.
//
// Both are integrated with Strang splitting: half damping, exact free
// step in momentum space, half damping.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/decoherence.hpp"
#include "crossing/quantum_propagation.hpp"
#include "crossing/wigner.hpp"

namespace crossing {

struct DetectorParams {
  double gamma_d = 1.0;
  double dt = 1e-3;
  std::size_t n_steps = 1000;
  // optional absorbing layer at the far left edge of the grid (off when 0)
  double sponge_width = 0.0;
  double sponge_rate = 0.0;

  void validate(double tau) const {
    if (!(gamma_d >= 0.0) || !(dt > 0.0) || n_steps == 0) {
      throw ConfigError("DetectorParams: need gamma_d >= 0, dt > 0, n_steps > 0");
    }
    if (std::abs(dt * static_cast<double>(n_steps) - tau) > 1e-9 * std::max(1.0, tau)) {
      throw ConfigError("DetectorParams: dt * n_steps must equal tau");
    }
  }

  static DetectorParams for_interval(double gamma_d, double tau, std::size_t n_steps) {
    return {gamma_d, tau / static_cast<double>(n_steps), n_steps};
  }
};

struct MeasurementParams {
  double a = 1.0;
  double dt = 1e-3;
  std::size_t n_steps = 1000;

  void validate(double tau) const {
    if (!(a > 0.0) || !(dt > 0.0) || n_steps == 0) {
      throw ConfigError("MeasurementParams: need a > 0, dt > 0, n_steps > 0");
    }
    if (std::abs(dt * static_cast<double>(n_steps) - tau) > 1e-9 * std::max(1.0, tau)) {
      throw ConfigError("MeasurementParams: dt * n_steps must equal tau");
    }
  }

  static MeasurementParams for_interval(double a, double tau, std::size_t n_steps) {
    return {a, tau / static_cast<double>(n_steps), n_steps};
  }
};

/// Evolution under H_s with a position-dependent amplitude decay rate:
/// psi <- exp(-rate(x) dt / 2) U(dt) exp(-rate(x) dt / 2) psi, n_steps
/// times, so ||psi||^2 decays at 2 rate where the packet sits still.
/// `norms`, when given, receives ||psi||^2 after every step.
inline WaveFunction damped_evolve(const WaveFunction& psi0, const std::vector<double>& rate,
                                  double dt, std::size_t n_steps,
                                  std::vector<double>* norms = nullptr) {
  if (rate.size() != psi0.size()) throw ConfigError("damped_evolve: rate size mismatch");
  std::vector<double> half(rate.size());
  for (std::size_t i = 0; i < rate.size(); ++i) half[i] = std::exp(-0.5 * rate[i] * dt);

  WaveFunction psi = psi0;
  FreeEvolution kinetic(psi.grid, psi.mass, psi.hbar, dt);
  if (norms) norms->reserve(norms->size() + n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    for (std::size_t i = 0; i < half.size(); ++i) psi.values[i] *= half[i];
    kinetic.apply(psi.values);
    for (std::size_t i = 0; i < half.size(); ++i) psi.values[i] *= half[i];
    if (norms) norms->push_back(norm_squared(psi));
  }
  return psi;
}

/// Probability loss rate gamma_d theta(-x) plus the optional edge sponge;
/// x = 0 is undamped.
inline std::vector<double> detector_rate(const Grid1D& grid, const DetectorParams& det) {
  std::vector<double> rate(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (x < 0.0) rate[i] = det.gamma_d;
    if (det.sponge_width > 0.0) {
      const double depth = (grid.x_min() + det.sponge_width - x) / det.sponge_width;
      if (depth > 0.0) rate[i] += det.sponge_rate * depth * depth;
    }
  }
  return rate;
}

inline WaveFunction detector_evolve(const WaveFunction& psi0, const DetectorParams& det,
                                    double tau, std::vector<double>* norms = nullptr) {
  det.validate(tau);
  auto rate = detector_rate(psi0.grid, det);
  // the imaginary potential -i hbar gamma_d / 2 damps the amplitude at gamma_d / 2
  for (double& r : rate) r *= 0.5;
  return damped_evolve(psi0, rate, det.dt, det.n_steps, norms);
}

struct DetectionProbabilities {
  double p_nd = 0.0;
  double p_d = 0.0;
};

inline DetectionProbabilities detection_probabilities(const WaveFunction& psi0,
                                                      const DetectorParams& det, double tau) {
  require_normalized(psi0, "detection_probabilities", 1e-8);
  DetectionProbabilities r;
  r.p_nd = norm_squared(detector_evolve(psi0, det, tau));
  r.p_d = 1.0 - r.p_nd;
  return r;
}

namespace detail {
/// log(erfc(z)), accurate where erfc underflows.
inline double log_erfc(double z) {
  if (z < 25.0) return std::log(std::erfc(z));
  const double z2 = z * z;
  const double inv = 1.0 / (2.0 * z2);
  // erfc(z) ~ exp(-z^2)/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6))
  const double series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv;
  return -z2 - std::log(z * std::sqrt(std::numbers::pi)) + std::log(series);
}
}  // namespace detail

/// Per-slice effective potential of Gaussian position monitoring summed over
/// positive measured positions:
///   exp(-V_eff(x) dt) = I(x) / I(+inf),  I(x) = int_0^inf exp(-2 a dt (x - xb)^2) dxb
/// so V_eff(x) = -(1/dt) log(erfc(-sqrt(2 a dt) x) / 2).
inline double effective_potential(double x, double a, double dt) {
  if (!(a > 0.0) || !(dt > 0.0)) throw ConfigError("effective_potential: a, dt must be > 0");
  const double z = -std::sqrt(2.0 * a * dt) * x;
  return -(detail::log_erfc(z) - std::numbers::ln2) / dt;
}

inline WaveFunction measurement_evolve(const WaveFunction& psi0, const MeasurementParams& meas,
                                       double tau, std::vector<double>* norms = nullptr) {
  meas.validate(tau);
  std::vector<double> rate(psi0.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = effective_potential(psi0.grid[i], meas.a, meas.dt);
  }
  return damped_evolve(psi0, rate, meas.dt, meas.n_steps, norms);
}

/// p_+ = <Psi_+|Psi_+>.
inline double continuous_measurement_probability(const WaveFunction& psi0,
                                                 const MeasurementParams& meas, double tau) {
  require_normalized(psi0, "continuous_measurement_probability", 1e-8);
  return norm_squared(measurement_evolve(psi0, meas, tau));
}

struct CompareOptions {
  std::size_t detector_steps = 2000;
  // Slice width of the measurement model. V_eff depends on it explicitly
  // (V_eff(0) = ln2/dt), so it is a model parameter, not an integrator step.
  double measurement_dt = 0.25;
  QbmOptions qbm{};
};

/// All candidate answers for one initial state and interval.
struct ComparisonRecord {
  double tau = 0.0;
  CrossingResult image;             // point particle, image method
  std::optional<QbmResult> qbm;     // empty when psi0 has mass at x <= 0
  double p_nd = 0.0;                // detector, rate params.gamma_d
  double p_plus = 0.0;              // continuous measurement, strength params.a()
};

inline ComparisonRecord compare_methods(const WaveFunction& psi0, const PhysParams& params,
                                        double tau, const CompareOptions& opt = {}) {
  params.validate();
  ComparisonRecord rec;
  rec.tau = tau;
  rec.image = crossing_decoherence(psi0, tau);
  if (mass_at_or_below_origin(psi0) <= opt.qbm.support_tolerance) {
    rec.qbm = qbm_no_cross_probability(psi0, FPKernelParams{params.m, params.D(), tau}, opt.qbm);
  }
  rec.p_nd = detection_probabilities(
                 psi0, DetectorParams::for_interval(params.gamma_d, tau, opt.detector_steps), tau)
                 .p_nd;
  if (!(opt.measurement_dt > 0.0)) throw ConfigError("compare_methods: measurement_dt must be > 0");
  const auto slices = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(tau / opt.measurement_dt)));
  rec.p_plus = continuous_measurement_probability(
      psi0, MeasurementParams::for_interval(params.a(), tau, slices), tau);
  return rec;
}

}  // namespace crossing
