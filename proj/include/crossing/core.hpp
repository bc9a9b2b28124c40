#pragma once

// Shared numerical substrate: uniform grids, sampled wave functions,
// phase-space grids, Gaussian packets and the physical parameter bundle.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crossing {

using cplx = std::complex<double>;

/// Raised when an input violates a documented precondition
/// (bad grid, packet leaking off the grid, unknown option ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an argument lies outside the mathematical domain of an
/// operation (negative coordinate for a half-line kernel, etc).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a computed quantity breaks a numerical invariant.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n >= 2 && (n & (n - 1)) == 0;
}

/// Uniform periodic grid x_i = x_min + i*dx, i = 0..n-1, dx = (x_max-x_min)/n.
/// The right end point x_max is the periodic image of x_min and is not sampled.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_points)
      : x_min_(x_min), x_max_(x_max), n_(n_points) {
    if (!is_power_of_two(n_points)) {
      throw ConfigError("Grid1D: n_points must be a power of two >= 2, got " +
                        std::to_string(n_points));
    }
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
      throw ConfigError("Grid1D: require finite x_min < x_max");
    }
    dx_ = (x_max_ - x_min_) / static_cast<double>(n_);
  }

  /// Grid on [-half_width, half_width) with the origin at index n/2.
  static Grid1D symmetric(double half_width, std::size_t n_points) {
    return Grid1D(-half_width, half_width, n_points);
  }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double length() const noexcept { return x_max_ - x_min_; }

  double operator[](std::size_t i) const noexcept {
    return x_min_ + static_cast<double>(i) * dx_;
  }

  /// Index of the grid point sitting exactly at x = 0, if there is one.
  std::optional<std::size_t> origin_index() const noexcept {
    const double k = -x_min_ / dx_;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(n_)) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(r);
  }

  /// Same as origin_index() but throws when x = 0 is not a grid point.
  std::size_t require_origin() const {
    auto i0 = origin_index();
    if (!i0) throw ConfigError("Grid1D: x = 0 must coincide with a grid point");
    return *i0;
  }

  /// Index of -x_i under reflection about x = 0 on the periodic lattice.
  std::size_t reflect(std::size_t i, std::size_t origin) const noexcept {
    return (2 * origin + n_ - i) % n_;
  }

  /// Riemann (periodic trapezoid) weights; they sum to length().
  std::vector<double> weights() const { return std::vector<double>(n_, dx_); }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_ = 0.0;
};

/// Physical constants for a run. D and a are derived, never stored.
struct PhysParams {
  double m = 1.0;
  double hbar = 1.0;
  double gamma = 0.5;  // dissipation rate of the thermal bath
  double kT = 1.0;
  double gamma_d = 1.0;  // detector transition rate

  double D() const noexcept { return 2.0 * m * gamma * kT; }
  double a() const noexcept { return D() / (hbar * hbar); }

  void validate() const {
    if (!(m > 0.0) || !(hbar > 0.0) || !(gamma > 0.0) || !(kT > 0.0) ||
        !(gamma_d >= 0.0)) {
      throw ConfigError(
          "PhysParams: m, hbar, gamma, kT must be > 0 and gamma_d >= 0");
    }
  }
};

/// Complex amplitude sampled on a Grid1D.
struct WaveFunction {
  Grid1D grid;
  std::vector<cplx> values;
  double hbar = 1.0;
  double mass = 1.0;

  WaveFunction(Grid1D g, std::vector<cplx> v, double hbar_, double mass_)
      : grid(g), values(std::move(v)), hbar(hbar_), mass(mass_) {
    if (values.size() != grid.size()) {
      throw ConfigError("WaveFunction: value count does not match grid size");
    }
  }

  /// Zero amplitude with the same grid and units as `like`.
  static WaveFunction zeros_like(const WaveFunction& like) {
    return WaveFunction(like.grid, std::vector<cplx>(like.grid.size()),
                        like.hbar, like.mass);
  }

  std::size_t size() const noexcept { return values.size(); }
};

inline double norm_squared(const WaveFunction& psi) {
  double s = 0.0;
  for (const auto& v : psi.values) s += std::norm(v);
  return s * psi.grid.dx();
}

/// <phi|psi> = sum conj(phi) psi dx.
inline cplx inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  if (phi.grid != psi.grid) {
    throw ConfigError("inner_product: wave functions live on different grids");
  }
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < psi.size(); ++i) {
    s += std::conj(phi.values[i]) * psi.values[i];
  }
  return s * psi.grid.dx();
}

inline bool is_normalized(const WaveFunction& psi, double tol = 1e-10) {
  return std::abs(norm_squared(psi) - 1.0) <= tol;
}

inline void require_normalized(const WaveFunction& psi, const char* who,
                               double tol = 1e-10) {
  if (!is_normalized(psi, tol)) {
    throw ConfigError(std::string(who) + ": initial state must be normalized (norm^2 = " +
                      std::to_string(norm_squared(psi)) + ")");
  }
}

/// Probability mass of |psi|^2 on the points with x <= 0.
inline double mass_at_or_below_origin(const WaveFunction& psi) {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi.grid[i] <= 0.0) s += std::norm(psi.values[i]);
  }
  return s * psi.grid.dx();
}

inline double mean_position(const WaveFunction& psi) {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    s += psi.grid[i] * std::norm(psi.values[i]);
  }
  return s * psi.grid.dx() / norm_squared(psi);
}

inline double position_variance(const WaveFunction& psi) {
  const double mu = mean_position(psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double d = psi.grid[i] - mu;
    s += d * d * std::norm(psi.values[i]);
  }
  return s * psi.grid.dx() / norm_squared(psi);
}

/// Minimum-uncertainty packet centred at x0 with mean momentum p0.
struct GaussianPacketSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
};

namespace detail {
inline cplx gaussian_amplitude(const GaussianPacketSpec& s, double x, double hbar) {
  const double d = x - s.x0;
  const double env = std::pow(2.0 * std::numbers::pi * s.sigma * s.sigma, -0.25) *
                     std::exp(-d * d / (4.0 * s.sigma * s.sigma));
  return std::polar(env, s.p0 * x / hbar);
}

inline void check_edges(const WaveFunction& psi, double tol, const char* who) {
  const std::size_t n = psi.size();
  if (std::abs(psi.values.front()) > tol || std::abs(psi.values[n - 1]) > tol) {
    throw ConfigError(std::string(who) +
                      ": packet leaks past the grid edge; enlarge the grid");
  }
}

inline void normalize_in_place(WaveFunction& psi) {
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0)) throw ConfigError("normalize: zero wave function");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& v : psi.values) v *= s;
}
}  // namespace detail

/// psi(x) = (2 pi sigma^2)^{-1/4} exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar),
/// renormalised on the grid so that norm_squared == 1 to rounding.
inline WaveFunction make_gaussian(const GaussianPacketSpec& spec, const Grid1D& grid,
                                  const PhysParams& params) {
  if (!(spec.sigma > 0.0)) throw ConfigError("make_gaussian: sigma must be > 0");
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = detail::gaussian_amplitude(spec, grid[i], params.hbar);
  }
  WaveFunction psi(grid, std::move(v), params.hbar, params.m);
  detail::check_edges(psi, 1e-12, "make_gaussian");
  detail::normalize_in_place(psi);
  return psi;
}

/// (g1 + sign*g2)/N for two packets; sign = -1 with mirrored packets gives
/// a state that is odd about x = 0.
inline WaveFunction make_superposition(const GaussianPacketSpec& a,
                                       const GaussianPacketSpec& b, double sign,
                                       const Grid1D& grid, const PhysParams& params) {
  if (!(a.sigma > 0.0) || !(b.sigma > 0.0)) {
    throw ConfigError("make_superposition: sigma must be > 0");
  }
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = detail::gaussian_amplitude(a, grid[i], params.hbar) +
           sign * detail::gaussian_amplitude(b, grid[i], params.hbar);
  }
  WaveFunction psi(grid, std::move(v), params.hbar, params.m);
  detail::check_edges(psi, 1e-12, "make_superposition");
  detail::normalize_in_place(psi);
  return psi;
}

/// Odd state g(x) - g(-x) built from one packet and its mirror image.
/// Antisymmetric about the origin to rounding; the grid origin must be a
/// grid point.
inline WaveFunction make_odd_pair(const GaussianPacketSpec& g, const Grid1D& grid,
                                  const PhysParams& params) {
  const std::size_t i0 = grid.require_origin();
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = detail::gaussian_amplitude(g, grid[i], params.hbar);
  }
  std::vector<cplx> odd(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    odd[i] = v[i] - v[grid.reflect(i, i0)];
  }
  WaveFunction psi(grid, std::move(odd), params.hbar, params.m);
  detail::check_edges(psi, 1e-12, "make_odd_pair");
  detail::normalize_in_place(psi);
  return psi;
}

/// Real density on a (p, x) grid, stored row-major with x fastest:
/// values[ip * nx + ix].
struct PhaseSpaceDistribution {
  Grid1D p_grid;
  Grid1D x_grid;
  std::vector<double> values;

  PhaseSpaceDistribution(Grid1D pg, Grid1D xg)
      : p_grid(pg), x_grid(xg), values(pg.size() * xg.size(), 0.0) {}

  double& at(std::size_t ip, std::size_t ix) { return values[ip * x_grid.size() + ix]; }
  double at(std::size_t ip, std::size_t ix) const {
    return values[ip * x_grid.size() + ix];
  }
  double cell() const noexcept { return p_grid.dx() * x_grid.dx(); }

  double total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell();
  }

  double min_value() const {
    double m = values.empty() ? 0.0 : values.front();
    for (double v : values) m = std::min(m, v);
    return m;
  }

  /// Integrated density over the cells with x <= 0.
  double mass_at_or_below_origin() const {
    double s = 0.0;
    for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
      for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
        if (x_grid[ix] <= 0.0) s += at(ip, ix);
      }
    }
    return s * cell();
  }
};

/// Classical Gaussian density w(p,x) with independent marginals, sampled
/// on the given grids and renormalised to unit mass on the grid.
inline PhaseSpaceDistribution make_gaussian_density(const Grid1D& p_grid,
                                                    const Grid1D& x_grid, double p0,
                                                    double x0, double sigma_p,
                                                    double sigma_x) {
  if (!(sigma_p > 0.0) || !(sigma_x > 0.0)) {
    throw ConfigError("make_gaussian_density: widths must be > 0");
  }
  PhaseSpaceDistribution w(p_grid, x_grid);
  double s = 0.0;
  for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
    const double dp = (p_grid[ip] - p0) / sigma_p;
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
      const double dxv = (x_grid[ix] - x0) / sigma_x;
      const double v = std::exp(-0.5 * (dp * dp + dxv * dxv));
      w.at(ip, ix) = v;
      s += v;
    }
  }
  for (double& v : w.values) v /= s * w.cell();
  return w;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("loglog_slope: need at least two paired samples");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw NumericalError("loglog_slope: non-positive sample in fit window");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw NumericalError("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace crossing
