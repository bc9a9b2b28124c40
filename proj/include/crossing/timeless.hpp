#pragma once

// Classical timeless region probability: the weight of free trajectories
// that ever spend more than eps time inside a configuration-space region.
// Trajectories are x(t) = x0 + p0 (t - t0)/m for all real t, with (x0, p0)
// the phase-space label at the fiducial time t0. Sojourn times are exact
// line-region intersections, so no time stepping is involved.

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <variant>
#include <vector>

#include "crossing/core.hpp"
#include "crossing/fokker_planck.hpp"

namespace crossing {

using Vec2 = std::array<double, 2>;

struct Disk {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
};

struct Rectangle {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
};

using RegionSpec = std::variant<Disk, Rectangle>;

inline void validate_region(const RegionSpec& region) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          if (!(r.radius > 0.0)) throw ConfigError("Disk: radius must be > 0");
        } else {
          if (!(r.hi[0] > r.lo[0]) || !(r.hi[1] > r.lo[1])) {
            throw ConfigError("Rectangle: degenerate bounds");
          }
        }
      },
      region);
}

inline bool contains(const RegionSpec& region, const Vec2& x) {
  return std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return std::hypot(x[0] - r.center[0], x[1] - r.center[1]) < r.radius;
        } else {
          return x[0] > r.lo[0] && x[0] < r.hi[0] && x[1] > r.lo[1] && x[1] < r.hi[1];
        }
      },
      region);
}

struct PhasePoint {
  Vec2 x{};
  Vec2 p{};
};

/// Total time spent inside the region over t in (-inf, inf). Zero momentum
/// gives +inf for a point inside and 0 otherwise.
inline double sojourn_time(const PhasePoint& z, const RegionSpec& region, double m) {
  if (!(m > 0.0)) throw ConfigError("sojourn_time: mass must be > 0");
  const Vec2 v{z.p[0] / m, z.p[1] / m};
  const double speed = std::hypot(v[0], v[1]);
  if (speed == 0.0) {
    return contains(region, z.x) ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          const double dx = z.x[0] - r.center[0], dy = z.x[1] - r.center[1];
          // impact parameter of the line about the center
          const double h = std::abs(dx * v[1] - dy * v[0]) / speed;
          if (h >= r.radius) return 0.0;
          return 2.0 * std::sqrt((r.radius - h) * (r.radius + h)) / speed;
        } else {
          double s_in = -std::numeric_limits<double>::infinity();
          double s_out = std::numeric_limits<double>::infinity();
          for (int d = 0; d < 2; ++d) {
            if (v[d] == 0.0) {
              if (!(z.x[d] > r.lo[d] && z.x[d] < r.hi[d])) return 0.0;
              continue;
            }
            double a = (r.lo[d] - z.x[d]) / v[d];
            double b = (r.hi[d] - z.x[d]) / v[d];
            if (a > b) std::swap(a, b);
            s_in = std::max(s_in, a);
            s_out = std::min(s_out, b);
          }
          return std::max(0.0, s_out - s_in);
        }
      },
      region);
}

/// Draws one phase-space point, labelled at the fiducial time.
using PhaseSampler = std::function<PhasePoint(Rng&)>;

/// Independent Gaussians: x ~ N(x_mean, sx^2), p ~ N(p_mean, sp^2) per axis.
inline PhaseSampler gaussian_phase_sampler(Vec2 x_mean, double sx, Vec2 p_mean, double sp) {
  if (!(sx >= 0.0) || !(sp >= 0.0)) throw ConfigError("gaussian_phase_sampler: widths >= 0");
  return [=](Rng& rng) {
    boost::random::normal_distribution<double> n01(0.0, 1.0);
    PhasePoint z;
    for (int d = 0; d < 2; ++d) z.x[d] = x_mean[d] + sx * n01(rng);
    for (int d = 0; d < 2; ++d) z.p[d] = p_mean[d] + sp * n01(rng);
    return z;
  };
}

struct TimelessConfig {
  PhaseSampler sampler;
  double eps = 1e-6;
  double t0 = 0.0;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t chunk = 1 << 14;

  void validate() const {
    if (!sampler) throw ConfigError("TimelessConfig: sampler missing");
    if (!(eps > 0.0)) throw ConfigError("TimelessConfig: eps must be > 0");
    if (!std::isfinite(t0)) throw ConfigError("TimelessConfig: t0 must be finite");
    if (n_samples < 10000) throw ConfigError("TimelessConfig: n_samples must be >= 1e4");
    if (chunk == 0) throw ConfigError("TimelessConfig: chunk must be > 0");
  }
};

struct TimelessEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_infinite = 0;  // zero-momentum samples resting inside the region
};

/// Sojourn time of every sample, in sample order. Depends on the seed and
/// chunk size only, never on the thread count.
inline std::vector<double> sample_sojourns(const TimelessConfig& cfg, const RegionSpec& region,
                                           double m) {
  cfg.validate();
  validate_region(region);
  std::vector<double> out(cfg.n_samples);
  const std::size_t n_chunks = (cfg.n_samples + cfg.chunk - 1) / cfg.chunk;
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < n_chunks; c += stride) {
      Rng rng = detail::chunk_rng(cfg.seed, c);
      const std::size_t end = std::min(cfg.n_samples, (c + 1) * cfg.chunk);
      for (std::size_t i = c * cfg.chunk; i < end; ++i) {
        // the label time t0 drops out of the duration of the visit
        out[i] = sojourn_time(cfg.sampler(rng), region, m);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, n_chunks));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return out;
}

inline TimelessEstimate estimate_from_sojourns(const std::vector<double>& soj, double eps) {
  TimelessEstimate e;
  e.n_samples = soj.size();
  std::size_t hits = 0;
  for (double s : soj) {
    if (s > eps) ++hits;
    if (std::isinf(s)) ++e.n_infinite;
  }
  const double n = static_cast<double>(soj.size());
  e.probability = static_cast<double>(hits) / n;
  e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / n);
  return e;
}

/// Fraction of sampled trajectories with sojourn > eps, with binomial error.
inline TimelessEstimate timeless_region_probability(const TimelessConfig& cfg,
                                                    const RegionSpec& region, double m) {
  return estimate_from_sojourns(sample_sojourns(cfg, region, m), cfg.eps);
}

/// Probability at each eps, from a single set of samples.
inline std::vector<TimelessEstimate> epsilon_sweep(const TimelessConfig& cfg,
                                                   const RegionSpec& region, double m,
                                                   const std::vector<double>& eps_values) {
  const auto soj = sample_sojourns(cfg, region, m);
  std::vector<TimelessEstimate> out;
  out.reserve(eps_values.size());
  for (double e : eps_values) {
    if (!(e > 0.0)) throw ConfigError("epsilon_sweep: eps must be > 0");
    out.push_back(estimate_from_sojourns(soj, e));
  }
  return out;
}

struct ShiftCheck {
  double probability_deviation = 0.0;
  double max_sojourn_deviation = 0.0;
};

/// Re-evaluates with t0 -> t0 + shift and the same seed.
inline ShiftCheck fiducial_shift_check(const TimelessConfig& cfg, const RegionSpec& region,
                                       double m, double shift) {
  TimelessConfig moved = cfg;
  moved.t0 = cfg.t0 + shift;
  const auto a = sample_sojourns(cfg, region, m);
  const auto b = sample_sojourns(moved, region, m);
  ShiftCheck out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;  // also covers inf == inf
    out.max_sojourn_deviation = std::max(out.max_sojourn_deviation, std::abs(a[i] - b[i]));
  }
  out.probability_deviation = std::abs(estimate_from_sojourns(a, cfg.eps).probability -
                                       estimate_from_sojourns(b, moved.eps).probability);
  return out;
}

}  // namespace crossing
