#pragma once

// Classical dissipationless Fokker-Planck dynamics for a free particle,
//   dw/dt = -(p/m) dw/dx + D d^2w/dp^2,
// with an absorbing wall at x = 0 (w_r(p, 0, t) = 0 for p > 0).
//
// The restricted kernel is the Carslaw two-sheeted image construction in
// the rotated coordinates
//   X  = p/m - 3x/(2 tau),        Y  = sqrt(3) x / (2 tau)
//   X0 = -p0/(2m) - 3x0/(2 tau),  Y0 = sqrt(3)/2 (p0/m + x0/tau)
// and reduced time t~ = D tau / m^2. It is an analytic approximation: it
// vanishes on the absorbing ray and reduces to the free kernel away from
// the wall, but it is not an exact solution of the equation above. The
// Monte Carlo engine in this header is the independent reference.

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/quadrature.hpp"

namespace crossing {

struct FPKernelParams {
  double m = 1.0;
  double D = 1.0;
  double tau = 1.0;

  void validate() const {
    if (!(m > 0.0) || !(D > 0.0) || !(tau > 0.0)) {
      throw ConfigError("FPKernelParams: m, D and tau must be > 0");
    }
  }

  double alpha() const noexcept { return 1.0 / (D * tau); }
  double beta() const noexcept { return 3.0 * m * m / (D * tau * tau * tau); }
  double epsilon() const noexcept { return 3.0 * m / (D * tau * tau); }
  /// 1 / (2 pi sqrt(det Sigma)) for the (p, x) covariance of the kernel.
  double norm() const noexcept {
    return std::sqrt(3.0) * m / (2.0 * std::numbers::pi * D * tau * tau);
  }
  double reduced_time() const noexcept { return D * tau / (m * m); }

  double sigma_p() const noexcept { return std::sqrt(2.0 * D * tau); }
  double sigma_x() const noexcept { return std::sqrt(2.0 * D * tau * tau * tau / 3.0) / m; }
  double cov_px() const noexcept { return D * tau * tau / m; }
};

/// Free Fokker-Planck kernel K(p, x, tau | p0, x0, 0).
inline double fp_propagator(double p, double x, double p0, double x0,
                            const FPKernelParams& k) {
  const double u = p - p0;
  const double v = x - x0 - p0 * k.tau / k.m;
  return k.norm() * std::exp(-k.alpha() * u * u - k.beta() * v * v + k.epsilon() * u * v);
}

/// Polar coordinates of the final and initial points in the rotated frame.
struct CarslawCoords {
  double r = 0.0;
  double theta = 0.0;   // in [0, pi] for x >= 0
  double r0 = 0.0;
  double theta0 = 0.0;  // in [0, 2 pi): cut along the absorbing ray theta = 0
  double t_reduced = 1.0;
};

inline CarslawCoords carslaw_coords(double p, double x, double p0, double x0,
                                    const FPKernelParams& k) {
  const double s3 = std::sqrt(3.0);
  const double X = p / k.m - 1.5 * x / k.tau;
  const double Y = s3 * x / (2.0 * k.tau);
  const double X0 = -p0 / (2.0 * k.m) - 1.5 * x0 / k.tau;
  const double Y0 = 0.5 * s3 * (p0 / k.m + x0 / k.tau);
  CarslawCoords c;
  c.r = std::hypot(X, Y);
  c.theta = std::atan2(Y, X);
  c.r0 = std::hypot(X0, Y0);
  c.theta0 = std::atan2(Y0, X0);
  if (c.theta0 < 0.0) c.theta0 += 2.0 * std::numbers::pi;
  c.t_reduced = k.reduced_time();
  return c;
}

/// Multiform Green function of period 4 pi:
///   g = sqrt(3)/(2 pi^{3/2} t~^2) exp(-(r^2 + r0^2 - 2 r r0 cos(th - th0))/t~)
///       * int_{-inf}^{a} exp(-l^2) dl,
///   a = 2 sqrt(r r0 / t~) cos((th - th0)/2).
/// The prefactor is the one for m = D = 1; restricted_fp_propagator
/// restores general units. Angles are taken as given, on the double cover.
inline double carslaw_green(const CarslawCoords& c) {
  const double t = c.t_reduced;
  const double d = c.theta - c.theta0;
  const double a = 2.0 * std::sqrt(c.r * c.r0 / t) * std::cos(0.5 * d);
  const double gauss =
      std::exp(-(c.r * c.r + c.r0 * c.r0 - 2.0 * c.r * c.r0 * std::cos(d)) / t);
  // int_{-inf}^{a} e^{-l^2} dl = sqrt(pi)/2 * erfc(-a)
  const double lambda_integral = 0.5 * std::sqrt(std::numbers::pi) * std::erfc(-a);
  return std::sqrt(3.0) / (2.0 * std::pow(std::numbers::pi, 1.5) * t * t) * gauss *
         lambda_integral;
}

struct RestrictedKernelTerms {
  double direct = 0.0;  // g(r, th, r0, th0)
  double image = 0.0;   // g(r, th, r0, -th0)
  double value() const noexcept { return direct - image; }
};

/// Direct and image terms of K_r, already converted to a (p, x) density.
inline RestrictedKernelTerms restricted_fp_terms(double p, double x, double p0, double x0,
                                                 const FPKernelParams& k) {
  if (x < 0.0 || x0 < 0.0) {
    throw DomainError("restricted_fp_propagator: x and x0 must be >= 0");
  }
  CarslawCoords c = carslaw_coords(p, x, p0, x0, k);
  // (t~ / (m tau)) converts the unit-mass, unit-diffusion prefactor
  const double units = k.D / (k.m * k.m * k.m);
  RestrictedKernelTerms t;
  t.direct = units * carslaw_green(c);
  c.theta0 = -c.theta0;
  t.image = units * carslaw_green(c);
  return t;
}

/// K_r(p, x, tau | p0, x0, 0) = g(r, th, r0, th0) - g(r, th, r0, -th0).
inline double restricted_fp_propagator(double p, double x, double p0, double x0,
                                       const FPKernelParams& k) {
  return restricted_fp_terms(p, x, p0, x0, k).value();
}

/// Resolution of the nested Gauss-Legendre quadratures over K_r.
struct FPQuadratureOptions {
  std::size_t panels_p = 4;
  std::size_t panels_x = 4;
  double width_sigmas = 9.0;  // half-width of the integration box
  // initial cells are skipped once the remaining |w| mass drops below this
  double skip_mass = 1e-11;
  std::size_t panels_t = 8;  // flux form: time axis
};

/// Survival S(p0, x0) = int dp int_{x>0} dx K_r(p, x, tau | p0, x0).
inline double restricted_survival(double p0, double x0, const FPKernelParams& k,
                                  const FPQuadratureOptions& opt = {}) {
  k.validate();
  if (x0 < 0.0) throw DomainError("restricted_survival: x0 must be >= 0");
  const double sp = k.sigma_p(), sx = k.sigma_x();
  const double w = opt.width_sigmas;
  const double xc = x0 + p0 * k.tau / k.m;
  const double x_lo = std::max(0.0, xc - w * sx);
  const double x_hi = xc + w * sx;
  if (x_hi <= 0.0) return 0.0;
  const auto pr = composite_gauss_legendre(p0 - w * sp, p0 + w * sp, opt.panels_p);
  const auto xr = composite_gauss_legendre(x_lo, x_hi, opt.panels_x);
  double s = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < xr.size(); ++j) {
      row += xr.weights[j] * restricted_fp_propagator(pr.nodes[i], xr.nodes[j], p0, x0, k);
    }
    s += pr.weights[i] * row;
  }
  return s;
}

/// Outward flux through the wall accumulated over [0, tau]:
///   int_0^tau dt int_{p<0} dp (|p|/m) K_r(p, 0, t | p0, x0).
inline double restricted_boundary_flux(double p0, double x0, const FPKernelParams& k,
                                       const FPQuadratureOptions& opt = {}) {
  k.validate();
  if (x0 < 0.0) throw DomainError("restricted_boundary_flux: x0 must be >= 0");
  const auto tr = composite_gauss_legendre(0.0, k.tau, opt.panels_t);
  double total = 0.0;
  for (std::size_t it = 0; it < tr.size(); ++it) {
    const FPKernelParams kt{k.m, k.D, tr.nodes[it]};
    // conditional law of p given x = 0 under the free kernel
    const double v = -x0 - p0 * kt.tau / kt.m;
    const double mu = p0 + 1.5 * kt.m * v / kt.tau;
    const double s = std::sqrt(0.5 * kt.D * kt.tau);
    const double lo = mu - opt.width_sigmas * s;
    const double hi = std::min(0.0, mu + opt.width_sigmas * s);
    if (lo >= hi) continue;
    const auto pr = composite_gauss_legendre(lo, hi, opt.panels_p);
    double inner = 0.0;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      const double p = pr.nodes[i];
      inner += pr.weights[i] * (-p / kt.m) * restricted_fp_propagator(p, 0.0, p0, x0, kt);
    }
    total += tr.weights[it] * inner;
  }
  return total;
}

namespace detail {

inline void require_half_line_support(const PhaseSpaceDistribution& w, const char* who,
                                      double tol) {
  double s = 0.0;
  for (std::size_t ip = 0; ip < w.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < w.x_grid.size(); ++ix) {
      if (w.x_grid[ix] <= 0.0) s += std::abs(w.at(ip, ix));
    }
  }
  s *= w.cell();
  if (s > tol) {
    throw ConfigError(std::string(who) + ": distribution has mass " + std::to_string(s) +
                      " at x <= 0");
  }
}

/// Cells with x > 0 ordered by decreasing |w|, truncated once the
/// discarded tail of |w| mass falls below `skip_mass`.
inline std::vector<std::pair<std::size_t, std::size_t>> significant_cells(
    const PhaseSpaceDistribution& w, double skip_mass) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t ip = 0; ip < w.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < w.x_grid.size(); ++ix) {
      if (w.x_grid[ix] > 0.0 && w.at(ip, ix) != 0.0) cells.emplace_back(ip, ix);
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [&](auto a, auto b) {
    return std::abs(w.at(a.first, a.second)) > std::abs(w.at(b.first, b.second));
  });
  double tail = 0.0;
  std::size_t keep = cells.size();
  while (keep > 0) {
    const auto [ip, ix] = cells[keep - 1];
    const double m = std::abs(w.at(ip, ix)) * w.cell();
    if (tail + m > skip_mass) break;
    tail += m;
    --keep;
  }
  cells.resize(keep);
  return cells;
}

template <class F>
double integrate_against(const PhaseSpaceDistribution& w, const FPQuadratureOptions& opt,
                         F&& per_point) {
  double s = 0.0;
  for (const auto& [ip, ix] : significant_cells(w, opt.skip_mass)) {
    s += w.at(ip, ix) * per_point(w.p_grid[ip], w.x_grid[ix]);
  }
  return s * w.cell();
}

}  // namespace detail

/// p_r = int dp int_{x>0} dx int dp0 int_{x0>0} dx0 K_r w0.
inline double classical_no_cross_probability(const PhaseSpaceDistribution& w0,
                                             const FPKernelParams& k,
                                             const FPQuadratureOptions& opt = {}) {
  k.validate();
  detail::require_half_line_support(w0, "classical_no_cross_probability", 1e-8);
  return detail::integrate_against(w0, opt, [&](double p0, double x0) {
    return restricted_survival(p0, x0, k, opt);
  });
}

struct CrossProbability {
  double complement = 0.0;  // 1 - p_r, the defining value
  double flux = 0.0;        // accumulated outward flux through x = 0
};

inline CrossProbability classical_cross_probability(const PhaseSpaceDistribution& w0,
                                                    const FPKernelParams& k,
                                                    const FPQuadratureOptions& opt = {}) {
  CrossProbability c;
  c.complement = 1.0 - classical_no_cross_probability(w0, k, opt);
  c.flux = detail::integrate_against(w0, opt, [&](double p0, double x0) {
    return restricted_boundary_flux(p0, x0, k, opt);
  });
  return c;
}

// ---------------------------------------------------------------------------
// Langevin Monte Carlo

enum class LangevinScheme {
  EulerMaruyama,  // x += p dt/m, p += sqrt(2 D dt) xi
  ExactGaussian,  // joint Gaussian transition of (x, p) over each step
};

enum class CrossingCheck {
  EndPoint,       // crossed when x <= 0 at a step end
  HermiteBridge,  // also when the cubic through (x, p) at both ends dips below 0
};

struct LangevinOptions {
  std::uint64_t seed = 1;
  LangevinScheme scheme = LangevinScheme::EulerMaruyama;
  CrossingCheck check = CrossingCheck::EndPoint;
  unsigned threads = 1;
  std::size_t chunk = 1u << 14;  // paths per independently seeded stream
};

using Rng = boost::random::mt19937_64;

/// Draws one initial phase-space point (p0, x0).
using InitialSampler = std::function<std::pair<double, double>(Rng&)>;

inline InitialSampler point_sampler(double p0, double x0) {
  return [p0, x0](Rng&) { return std::pair{p0, x0}; };
}

struct SurvivalEstimate {
  double survival = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
};

namespace detail {

inline Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

/// True when the cubic Hermite interpolant between (x_a, v_a) and (x_b, v_b)
/// over a step of length h has a minimum below zero inside the step.
inline bool hermite_dips_below_zero(double xa, double va, double xb, double vb, double h) {
  // x(s) = c0 + c1 s + c2 s^2 + c3 s^3 for s in [0, 1]
  const double c0 = xa, c1 = h * va;
  const double c2 = -3.0 * xa - 2.0 * h * va + 3.0 * xb - h * vb;
  const double c3 = 2.0 * xa + h * va - 2.0 * xb + h * vb;
  auto eval = [&](double s) { return c0 + s * (c1 + s * (c2 + s * c3)); };
  // stationary points of the cubic: 3 c3 s^2 + 2 c2 s + c1 = 0
  const double A = 3.0 * c3, B = 2.0 * c2, C = c1;
  if (A == 0.0) {
    if (B == 0.0) return false;
    const double s = -C / B;
    return s > 0.0 && s < 1.0 && eval(s) <= 0.0;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  for (double s : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
    if (s > 0.0 && s < 1.0 && eval(s) <= 0.0) return true;
  }
  return false;
}

inline std::size_t survivors_in_chunk(const InitialSampler& sampler, const FPKernelParams& k,
                                      double dt, std::size_t steps, std::size_t n,
                                      const LangevinOptions& opt, std::uint64_t chunk) {
  Rng rng = chunk_rng(opt.seed, chunk);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double kick = std::sqrt(2.0 * k.D * dt);
  // exact step: x-increment = p dt/m + (dW dt/2 + sqrt(D dt^3/6) z)/m
  const double cond = std::sqrt(k.D * dt * dt * dt / 6.0);
  const double inv_m = 1.0 / k.m;
  const bool exact = opt.scheme == LangevinScheme::ExactGaussian;
  const bool bridge = opt.check == CrossingCheck::HermiteBridge;
  std::size_t alive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto [p, x] = sampler(rng);
    bool survived = x > 0.0;
    for (std::size_t s = 0; s < steps && survived; ++s) {
      const double dW = kick * normal(rng);
      double xn;
      if (exact) {
        xn = x + (p * dt + 0.5 * dW * dt + cond * normal(rng)) * inv_m;
      } else {
        xn = x + p * dt * inv_m;
      }
      const double pn = p + dW;
      if (xn <= 0.0 || (bridge && hermite_dips_below_zero(x, p * inv_m, xn, pn * inv_m, dt))) {
        survived = false;
      }
      x = xn;
      p = pn;
    }
    if (survived) ++alive;
  }
  return alive;
}

}  // namespace detail

/// Fraction of Langevin paths that stay in x > 0 over [0, tau], with its
/// binomial standard error. Paths are split into fixed-size chunks with
/// their own seeded streams, so the estimate does not depend on `threads`.
inline SurvivalEstimate langevin_first_passage(const InitialSampler& sampler,
                                               const FPKernelParams& k, std::size_t n_paths,
                                               double dt, const LangevinOptions& opt = {}) {
  if (!(k.m > 0.0) || !(k.D >= 0.0) || !(k.tau > 0.0)) {
    throw ConfigError("langevin_first_passage: need m > 0, D >= 0, tau > 0");
  }
  if (!(dt > 0.0) || dt > k.tau) throw ConfigError("langevin_first_passage: bad dt");
  if (n_paths == 0 || opt.chunk == 0) throw ConfigError("langevin_first_passage: no paths");
  const auto steps = static_cast<std::size_t>(std::llround(k.tau / dt));
  const double step = k.tau / static_cast<double>(steps);
  const std::size_t n_chunks = (n_paths + opt.chunk - 1) / opt.chunk;
  std::vector<std::size_t> alive(n_chunks, 0);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < n_chunks; c += stride) {
      const std::size_t n = std::min(opt.chunk, n_paths - c * opt.chunk);
      alive[c] = detail::survivors_in_chunk(sampler, k, step, steps, n, opt, c);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, n_chunks));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  const double total = static_cast<double>(std::accumulate(alive.begin(), alive.end(),
                                                           std::size_t{0}));
  SurvivalEstimate est;
  est.n_paths = n_paths;
  est.survival = total / static_cast<double>(n_paths);
  est.std_error = std::sqrt(est.survival * (1.0 - est.survival) / static_cast<double>(n_paths));
  return est;
}

}  // namespace crossing
