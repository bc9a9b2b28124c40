#pragma once

// Free-particle propagation and the image-method amplitudes for paths that
// never cross, or always cross, x = 0.
//
// The value at x = 0 is assigned to the x > 0 side: theta(0) = 1.

#include <cmath>
#include <complex>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/fft.hpp"

namespace crossing {

enum class PropagationMode { Unrestricted, Restricted, Crossing };

/// Reusable exact free evolution over a fixed time step.
/// psi~(p) <- psi~(p) exp(-i p^2 t / (2 m hbar)) on the periodic grid.
class FreeEvolution {
 public:
  FreeEvolution(const Grid1D& grid, double mass, double hbar, double t)
      : plan_(grid.size()), phase_(grid.size()) {
    if (!(t >= 0.0)) throw ConfigError("FreeEvolution: time must be >= 0");
    const auto p = fft_momenta(grid, hbar);
    const double inv_n = 1.0 / static_cast<double>(grid.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      phase_[k] = std::polar(inv_n, -p[k] * p[k] * t / (2.0 * mass * hbar));
    }
  }

  void apply(std::vector<cplx>& values) {
    plan_.forward(values);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] *= phase_[k];
    plan_.backward(values);
  }

 private:
  FftPlan plan_;
  std::vector<cplx> phase_;
};

inline WaveFunction free_propagate(const WaveFunction& psi0, double tau) {
  if (!(tau >= 0.0)) throw ConfigError("free_propagate: tau must be >= 0");
  WaveFunction out = psi0;
  FreeEvolution(psi0.grid, psi0.mass, psi0.hbar, tau).apply(out.values);
  return out;
}

namespace detail {

struct HalfLineSplit {
  std::vector<cplx> plus;   // theta(x) psi, x >= 0
  std::vector<cplx> minus;  // theta(-x) psi, x < 0
};

inline HalfLineSplit split_at_origin(const WaveFunction& psi, std::size_t origin) {
  const std::size_t n = psi.size();
  HalfLineSplit s{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    (i >= origin ? s.plus : s.minus)[i] = psi.values[i];
  }
  return s;
}

inline std::vector<cplx> odd_extension(const std::vector<cplx>& f, const Grid1D& grid,
                                       std::size_t origin) {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - f[grid.reflect(i, origin)];
  return out;
}

}  // namespace detail

/// Amplitude for paths that never cross x = 0:
///   Psi_r(x) = int g_r(x,tau|x0,0) psi0(x0) dx0,
///   g_r = [theta(x)theta(x0) + theta(-x)theta(-x0)] (g(x|x0) - g(x|-x0)).
/// Each half-line piece is odd-extended, evolved freely and restricted back
/// to its own side. Not norm preserving.
inline WaveFunction restricted_propagate(const WaveFunction& psi0, double tau) {
  if (!(tau >= 0.0)) throw ConfigError("restricted_propagate: tau must be >= 0");
  const auto& grid = psi0.grid;
  const std::size_t i0 = grid.require_origin();
  auto parts = detail::split_at_origin(psi0, i0);
  auto plus = detail::odd_extension(parts.plus, grid, i0);
  auto minus = detail::odd_extension(parts.minus, grid, i0);

  FreeEvolution evolve(grid, psi0.mass, psi0.hbar, tau);
  evolve.apply(plus);
  evolve.apply(minus);

  WaveFunction out = WaveFunction::zeros_like(psi0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.values[i] = i >= i0 ? plus[i] : minus[i];
  }
  return out;
}

/// Amplitude for paths that cross x = 0 at least once. For end points on
/// opposite sides the free kernel g(x|x0) applies, on the same side the
/// reflected kernel g(-x|x0):
///   x >= 0:  Psi_c(x) = [U psi_-](x) + [U psi_+](-x)
///   x <  0:  Psi_c(x) = [U psi_+](x) + [U psi_-](-x)
inline WaveFunction crossing_propagate(const WaveFunction& psi0, double tau) {
  if (!(tau >= 0.0)) throw ConfigError("crossing_propagate: tau must be >= 0");
  const auto& grid = psi0.grid;
  const std::size_t i0 = grid.require_origin();
  auto parts = detail::split_at_origin(psi0, i0);

  FreeEvolution evolve(grid, psi0.mass, psi0.hbar, tau);
  evolve.apply(parts.plus);
  evolve.apply(parts.minus);

  WaveFunction out = WaveFunction::zeros_like(psi0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t r = grid.reflect(i, i0);
    out.values[i] = i >= i0 ? parts.minus[i] + parts.plus[r]
                            : parts.plus[i] + parts.minus[r];
  }
  return out;
}

inline WaveFunction propagate(const WaveFunction& psi0, double tau, PropagationMode mode) {
  switch (mode) {
    case PropagationMode::Unrestricted:
      return free_propagate(psi0, tau);
    case PropagationMode::Restricted:
      return restricted_propagate(psi0, tau);
    case PropagationMode::Crossing:
      return crossing_propagate(psi0, tau);
  }
  throw ConfigError("propagate: unknown mode");
}

}  // namespace crossing
