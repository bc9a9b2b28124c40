#pragma once

// 2x2 decoherence functional for the histories "never crossed x = 0" (r)
// and "crossed x = 0" (c) over [0, tau]:
//   D(a, a') = int dx Psi_a(x) conj(Psi_a'(x)).
// Since Psi_r + Psi_c is the freely evolved state,
//   p_nocross + p_cross + 2 Re D(c, r) = 1
// holds for every normalized initial state.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/quantum_propagation.hpp"

namespace crossing {

struct CrossingResult {
  double p_nocross = 0.0;
  double p_cross = 0.0;
  double re_D = 0.0;
  double abs_D = 0.0;
  double tau = 0.0;
  // |D|^2 / (p_cross p_nocross); NaN when undefined.
  double consistency_ratio = std::numeric_limits<double>::quiet_NaN();

  double sum_rule_residual() const { return p_nocross + p_cross + 2.0 * re_D - 1.0; }
};

struct DecoherenceCheck {
  std::optional<double> ratio;  // empty when p_cross * p_nocross == 0 and D != 0
  bool passes = false;
};

/// |D|^2 below this is treated as exactly zero (rounding noise of the
/// image construction on odd states sits around 1e-32).
inline constexpr double kNumericallyZeroD2 = 1e-20;

/// |D|^2 << p p_bar test for approximate decoherence.
inline DecoherenceCheck approximate_decoherence_check(const CrossingResult& r,
                                                      double threshold = 0.01) {
  const double d2 = r.abs_D * r.abs_D;
  if (d2 <= kNumericallyZeroD2) return {0.0, 0.0 < threshold};
  const double prod = r.p_cross * r.p_nocross;
  if (!(prod > 0.0)) return {std::nullopt, false};
  const double ratio = d2 / prod;
  return {ratio, ratio < threshold};
}

inline CrossingResult crossing_decoherence(const WaveFunction& psi0, double tau) {
  require_normalized(psi0, "crossing_decoherence", 1e-8);
  if (!(tau > 0.0)) throw ConfigError("crossing_decoherence: tau must be > 0");

  const WaveFunction psi_r = restricted_propagate(psi0, tau);
  const WaveFunction psi_c = crossing_propagate(psi0, tau);

  CrossingResult res;
  res.tau = tau;
  res.p_nocross = norm_squared(psi_r);
  res.p_cross = norm_squared(psi_c);
  // D(c, r) = int Psi_c conj(Psi_r)
  const cplx d = inner_product(psi_r, psi_c);
  res.re_D = d.real();
  res.abs_D = std::abs(d);
  const auto chk = approximate_decoherence_check(res);
  if (chk.ratio) res.consistency_ratio = *chk.ratio;
  return res;
}

struct ScalingFit {
  double exponent_p_cross = 0.0;
  double exponent_re_D = 0.0;
  double p_nocross_at_min_tau = 0.0;
  std::vector<CrossingResult> points;  // every tau evaluated
  std::vector<double> fit_taus;        // those inside the fit window
};

/// Bounds on p_cross for a point to enter the small-time fit.
struct ScalingWindow {
  double p_cross_min = 1e-8;
  double p_cross_max = 1e-2;
};

/// Log-log fit of p_cross(tau) and |Re D(tau)|. Points whose p_cross falls
/// outside the window are evaluated and reported but not fitted.
inline ScalingFit small_time_scaling(const WaveFunction& psi0,
                                     const std::vector<double>& taus,
                                     ScalingWindow window = {}) {
  if (taus.size() < 2) throw ConfigError("small_time_scaling: need at least two taus");
  ScalingFit fit;
  std::vector<double> t, pc, rd;
  double tau_min = std::numeric_limits<double>::infinity();
  for (double tau : taus) {
    auto r = crossing_decoherence(psi0, tau);
    if (!(r.p_cross > 0.0)) {
      throw NumericalError("small_time_scaling: p_cross <= 0 at tau = " +
                           std::to_string(tau));
    }
    if (tau < tau_min) {
      tau_min = tau;
      fit.p_nocross_at_min_tau = r.p_nocross;
    }
    if (r.p_cross >= window.p_cross_min && r.p_cross <= window.p_cross_max) {
      t.push_back(tau);
      pc.push_back(r.p_cross);
      rd.push_back(std::abs(r.re_D));
    }
    fit.points.push_back(r);
  }
  if (t.size() < 2) {
    throw NumericalError("small_time_scaling: fewer than two points in the fit window");
  }
  fit.fit_taus = t;
  fit.exponent_p_cross = loglog_slope(t, pc);
  fit.exponent_re_D = loglog_slope(t, rd);
  return fit;
}

}  // namespace crossing
