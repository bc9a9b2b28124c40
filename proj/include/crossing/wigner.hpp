#pragma once

// Wigner transform of a sampled pure state and the crossing probability in
// the presence of a thermal environment, obtained by feeding the initial
// Wigner function to the classical restricted Fokker-Planck propagation.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/fft.hpp"
#include "crossing/fokker_planck.hpp"

namespace crossing {

struct WignerFunction {
  PhaseSpaceDistribution dist;
  std::shared_ptr<const WaveFunction> source;
  double max_imag_residue = 0.0;  // largest |Im W| discarded by the transform
};

/// W(p, x) = 1/(2 pi hbar) int dxi exp(-i p xi / hbar) psi(x + xi/2) conj(psi(x - xi/2)).
///
/// With xi = 2 k dx the offsets land on grid points, and the k-sum becomes
/// an n-point FFT per x row. The momentum grid has spacing
/// pi hbar / (n dx), half the spacing of the ordinary momentum grid, and
/// covers |p| < pi hbar / (2 dx). Samples outside the grid are zero.
inline WignerFunction wigner_transform(const WaveFunction& psi) {
  const Grid1D& xg = psi.grid;
  const std::size_t n = xg.size();
  const double dpw = std::numbers::pi * psi.hbar / (static_cast<double>(n) * xg.dx());
  const double half_range = dpw * static_cast<double>(n / 2);
  Grid1D pg(-half_range, half_range, n);

  WignerFunction w{PhaseSpaceDistribution(pg, xg),
                   std::make_shared<const WaveFunction>(psi), 0.0};
  FftPlan plan(n);
  std::vector<cplx> row(n);
  const double pref = xg.dx() / (std::numbers::pi * psi.hbar);
  const long nl = static_cast<long>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long il = static_cast<long>(i);
    for (std::size_t kb = 0; kb < n; ++kb) {
      const long k = fft_index(kb, n);
      const long a = il + k, b = il - k;
      row[kb] = (a >= 0 && a < nl && b >= 0 && b < nl)
                    ? psi.values[static_cast<std::size_t>(a)] *
                          std::conj(psi.values[static_cast<std::size_t>(b)])
                    : cplx{};
    }
    plan.forward(row);
    for (std::size_t kb = 0; kb < n; ++kb) {
      // bin kb holds p = fft_index(kb) * dpw; grid row index shifts by n/2
      const std::size_t ip = (kb + n / 2) % n;
      w.dist.at(ip, i) = pref * row[kb].real();
      w.max_imag_residue = std::max(w.max_imag_residue, pref * std::abs(row[kb].imag()));
    }
  }
  return w;
}

/// int W dp at each x sample.
inline std::vector<double> position_marginal(const PhaseSpaceDistribution& w) {
  std::vector<double> m(w.x_grid.size(), 0.0);
  for (std::size_t ip = 0; ip < w.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < w.x_grid.size(); ++ix) m[ix] += w.at(ip, ix);
  }
  for (double& v : m) v *= w.p_grid.dx();
  return m;
}

/// int W dx at each p sample.
inline std::vector<double> momentum_marginal(const PhaseSpaceDistribution& w) {
  std::vector<double> m(w.p_grid.size(), 0.0);
  for (std::size_t ip = 0; ip < w.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < w.x_grid.size(); ++ix) m[ip] += w.at(ip, ix);
  }
  for (double& v : m) v *= w.x_grid.dx();
  return m;
}

/// Every `stride_p`-th momentum and `stride_x`-th position sample. Strides
/// must be powers of two so the result is again a power-of-two grid.
inline PhaseSpaceDistribution subsample(const PhaseSpaceDistribution& w, std::size_t stride_p,
                                        std::size_t stride_x) {
  auto pow2 = [](std::size_t s) { return s >= 1 && (s & (s - 1)) == 0; };
  if (!pow2(stride_p) || !pow2(stride_x) || stride_p >= w.p_grid.size() ||
      stride_x >= w.x_grid.size()) {
    throw ConfigError("subsample: strides must be powers of two smaller than the grid");
  }
  Grid1D pg(w.p_grid.x_min(), w.p_grid.x_max(), w.p_grid.size() / stride_p);
  Grid1D xg(w.x_grid.x_min(), w.x_grid.x_max(), w.x_grid.size() / stride_x);
  PhaseSpaceDistribution out(pg, xg);
  for (std::size_t ip = 0; ip < pg.size(); ++ip) {
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
      out.at(ip, ix) = w.at(ip * stride_p, ix * stride_x);
    }
  }
  return out;
}

struct QbmOptions {
  FPQuadratureOptions quadrature{};
  std::size_t stride_p = 1;
  std::size_t stride_x = 1;
  double support_tolerance = 1e-6;  // allowed |psi|^2 mass at x <= 0
};

struct QbmResult {
  double p_nocross = 0.0;        // clamped to [0, 1]
  double p_nocross_raw = 0.0;    // before clamping
  double clipped_mass = 0.0;     // Wigner mass removed at x <= 0
  double min_wigner = 0.0;       // most negative sample of W0
  double p_cross() const noexcept { return 1.0 - p_nocross; }
};

/// Probability of never crossing x = 0 in [0, tau] for a particle coupled
/// to a thermal bath: the classical restricted Fokker-Planck survival
/// integrated against the initial Wigner function. Negative parts of W0 are
/// integrated as they are; only the final value is clamped.
inline QbmResult qbm_no_cross_probability(const WaveFunction& psi0, const FPKernelParams& k,
                                          const QbmOptions& opt = {}) {
  require_normalized(psi0, "qbm_no_cross_probability", 1e-8);
  const double outside = mass_at_or_below_origin(psi0);
  if (outside > opt.support_tolerance) {
    throw ConfigError("qbm_no_cross_probability: initial state has mass " +
                      std::to_string(outside) + " at x <= 0");
  }
  auto w = wigner_transform(psi0).dist;
  if (opt.stride_p > 1 || opt.stride_x > 1) w = subsample(w, opt.stride_p, opt.stride_x);

  QbmResult res;
  res.min_wigner = w.min_value();
  res.clipped_mass = w.mass_at_or_below_origin();
  for (std::size_t ip = 0; ip < w.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < w.x_grid.size(); ++ix) {
      if (w.x_grid[ix] <= 0.0) w.at(ip, ix) = 0.0;
    }
  }
  res.p_nocross_raw = classical_no_cross_probability(w, k, opt.quadrature);
  res.p_nocross = std::clamp(res.p_nocross_raw, 0.0, 1.0);
  return res;
}

}  // namespace crossing
