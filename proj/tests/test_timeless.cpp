#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "crossing/timeless.hpp"
#include "oracles.hpp"

using namespace crossing;
using crossing::oracles::disk_probability_oracle;

namespace {

PhaseSampler fixed(PhasePoint z) {
  return [z](Rng&) { return z; };
}

}  // namespace

TEST(Sojourn, ChordThroughCenter) {
  const Disk d{{1.0, -2.0}, 0.7};
  const PhasePoint z{{-3.0, -2.0}, {1.5, 0.0}};
  EXPECT_NEAR(sojourn_time(z, d, 2.0), 2.0 * 0.7 * 2.0 / 1.5, 1e-14);
}

TEST(Sojourn, MissAndTangent) {
  const Disk d{{0.0, 0.0}, 1.0};
  EXPECT_EQ(sojourn_time({{-5.0, 1.5}, {1.0, 0.0}}, d, 1.0), 0.0);
  EXPECT_EQ(sojourn_time({{-5.0, 1.0}, {1.0, 0.0}}, d, 1.0), 0.0);
}

TEST(Sojourn, ZeroMomentum) {
  const Disk d{{0.0, 0.0}, 1.0};
  EXPECT_EQ(sojourn_time({{0.2, 0.1}, {0.0, 0.0}}, d, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(sojourn_time({{3.0, 0.0}, {0.0, 0.0}}, d, 1.0), 0.0);
}

TEST(Sojourn, Rectangle) {
  const Rectangle r{{0.0, 0.0}, {2.0, 1.0}};
  // diagonal entry through the corner region: x in (0, 2) for s in (1, 3), y in (0, 1) for s in (2, 3)
  EXPECT_NEAR(sojourn_time({{-1.0, -2.0}, {1.0, 1.0}}, r, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(sojourn_time({{-5.0, 0.5}, {2.0, 0.0}}, r, 1.0), 1.0, 1e-14);
  EXPECT_EQ(sojourn_time({{-5.0, 1.5}, {2.0, 0.0}}, r, 1.0), 0.0);
  EXPECT_EQ(sojourn_time({{1.0, 0.5}, {0.0, 0.0}}, r, 1.0), std::numeric_limits<double>::infinity());
}

TEST(Sojourn, SpeedScaling) {
  const Disk d{{0.3, 0.1}, 1.2};
  const PhasePoint z{{-2.0, 0.5}, {0.8, -0.1}};
  const double base = sojourn_time(z, d, 1.0);
  for (double lam : {0.5, 2.0, 10.0}) {
    const PhasePoint s{z.x, {lam * z.p[0], lam * z.p[1]}};
    EXPECT_NEAR(sojourn_time(s, d, 1.0), base / lam, 1e-13 * base);
  }
}

TEST(Sojourn, RejectsBadRegions) {
  EXPECT_THROW(validate_region(Disk{{0.0, 0.0}, 0.0}), ConfigError);
  EXPECT_THROW(validate_region(Rectangle{{0.0, 0.0}, {0.0, 1.0}}), ConfigError);
}

TEST(TimelessProbability, AimedTrajectoriesAlwaysEnter) {
  TimelessConfig cfg;
  cfg.sampler = fixed({{-10.0, 0.0}, {1.0, 0.0}});
  cfg.n_samples = 10000;
  const auto e = timeless_region_probability(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0);
  EXPECT_EQ(e.probability, 1.0);
}

TEST(TimelessProbability, DistantTrajectoriesNeverEnter) {
  TimelessConfig cfg;
  cfg.sampler = gaussian_phase_sampler({-10.0, 2.5}, 0.05, {1.0, 0.0}, 0.01);
  cfg.n_samples = 10000;
  const auto e = timeless_region_probability(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0);
  EXPECT_EQ(e.probability, 0.0);
}

TEST(TimelessProbability, MatchesQuadratureOracle) {
  struct Case {
    Disk disk;
    Vec2 xm;
    double sx;
    Vec2 pm;
    double sp;
  };
  for (const auto& c : {Case{{{0.0, 0.0}, 1.0}, {0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0},
                        Case{{{1.5, -0.5}, 0.8}, {0.0, 0.3}, 1.2, {0.3, 0.2}, 0.7}}) {
    TimelessConfig cfg;
    cfg.sampler = gaussian_phase_sampler(c.xm, c.sx, c.pm, c.sp);
    cfg.n_samples = 400000;
    cfg.seed = 31;
    const auto e = timeless_region_probability(cfg, c.disk, 1.0);
    const double oracle = disk_probability_oracle(c.disk, c.xm, c.sx, c.pm, c.sp, cfg.eps, 1.0);
    EXPECT_NEAR(e.probability, oracle, 3.0 * e.std_error);
  }
  // centred isotropic case in closed form
  EXPECT_NEAR(disk_probability_oracle({{0.0, 0.0}, 1.0}, {0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0, 1e-6, 1.0),
              std::erf(1.0 / std::sqrt(2.0)), 1e-6);
}

TEST(TimelessProbability, FiducialShiftInvariance) {
  TimelessConfig cfg;
  cfg.sampler = gaussian_phase_sampler({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
  cfg.n_samples = 50000;
  const Disk d{{0.5, 0.0}, 1.0};
  for (double shift : {0.0, 7.3, -100.0}) {
    const auto chk = fiducial_shift_check(cfg, d, 1.0, shift);
    EXPECT_EQ(chk.probability_deviation, 0.0);
    EXPECT_EQ(chk.max_sojourn_deviation, 0.0);
  }
}

TEST(TimelessProbability, NonIncreasingInEpsilon) {
  TimelessConfig cfg;
  cfg.sampler = gaussian_phase_sampler({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
  cfg.n_samples = 50000;
  const auto sweep = epsilon_sweep(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0, {1e-6, 1e-3, 1e-2, 0.1, 1.0});
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_LE(sweep[i].probability, sweep[i - 1].probability);
  }
  EXPECT_EQ(sweep[0].probability, timeless_region_probability(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0).probability);
}

TEST(TimelessProbability, IndependentOfThreadCount) {
  TimelessConfig cfg;
  cfg.sampler = gaussian_phase_sampler({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0);
  cfg.n_samples = 60000;
  const auto a = sample_sojourns(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0);
  cfg.threads = 3;
  const auto b = sample_sojourns(cfg, Disk{{0.0, 0.0}, 1.0}, 1.0);
  EXPECT_EQ(a, b);
}

TEST(TimelessProbability, ConfigValidation) {
  TimelessConfig cfg;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.sampler = fixed({});
  cfg.n_samples = 100;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
