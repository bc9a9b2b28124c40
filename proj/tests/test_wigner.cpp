#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crossing/decoherence.hpp"
#include "crossing/quantum_propagation.hpp"
#include "crossing/wigner.hpp"

using namespace crossing;

namespace {

WaveFunction random_superposition(std::mt19937_64& rng, const Grid1D& g) {
  std::uniform_real_distribution<double> xs(-4.0, 4.0), ps(-2.0, 2.0), ss(0.5, 1.2);
  std::uniform_int_distribution<int> sign(0, 1);
  return make_superposition({xs(rng), ps(rng), ss(rng)}, {xs(rng), ps(rng), ss(rng)},
                            sign(rng) ? 1.0 : -1.0, g, PhysParams{});
}

}  // namespace

TEST(QuasiDistribution, PurePacketIsAnalytic) {
  const auto g = Grid1D::symmetric(16.0, 512);
  const double x0 = 1.5, p0 = -1.0, s = 0.8;
  const auto w = wigner_transform(make_gaussian({x0, p0, s}, g, PhysParams{}));
  EXPECT_LT(w.max_imag_residue, 1e-12);
  double err = 0.0;
  for (std::size_t ip = 0; ip < w.dist.p_grid.size(); ++ip) {
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
      const double dx = g[ix] - x0, dp = w.dist.p_grid[ip] - p0;
      const double exact =
          std::exp(-dx * dx / (2.0 * s * s) - 2.0 * s * s * dp * dp) / std::numbers::pi;
      err = std::max(err, std::abs(w.dist.at(ip, ix) - exact));
    }
  }
  EXPECT_LT(err, 1e-6);
  EXPECT_GE(w.dist.min_value(), -1e-12);
}

TEST(QuasiDistribution, NormalizationAndMarginals) {
  const auto g = Grid1D::symmetric(20.0, 512);
  std::mt19937_64 rng(42);
  for (int k = 0; k < 5; ++k) {
    const auto psi = random_superposition(rng, g);
    const auto w = wigner_transform(psi);
    EXPECT_NEAR(w.dist.total(), 1.0, 1e-6);

    const auto mx = position_marginal(w.dist);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(mx[i], std::norm(psi.values[i]), 1e-6);
    }

    // |psi~(p)|^2 on the Wigner momentum grid needs a 2x zero-padded FFT
    const auto amp = momentum_amplitudes(psi, 2);
    const auto mp = momentum_marginal(w.dist);
    double err = 0.0;
    for (std::size_t ip = 0; ip < w.dist.p_grid.size(); ++ip) {
      const double p = w.dist.p_grid[ip];
      const auto j = static_cast<std::size_t>(std::llround((p - amp.p.front()) / amp.dp));
      ASSERT_NEAR(amp.p[j], p, 1e-9);
      err = std::max(err, std::abs(mp[ip] - std::norm(amp.values[j])));
    }
    EXPECT_LT(err, 1e-6);
  }
}

TEST(QuasiDistribution, OddSuperpositionIsNegativeSomewhere) {
  const auto g = Grid1D::symmetric(20.0, 512);
  const auto w = wigner_transform(make_odd_pair({3.0, 0.0, 0.7}, g, PhysParams{}));
  EXPECT_LT(w.dist.min_value(), -1e-3);
  EXPECT_NEAR(w.dist.total(), 1.0, 1e-6);
}

// With t = m n dx^2 / (pi hbar) each momentum row shifts by exactly k grid
// cells under free transport, so the comparison needs no interpolation.
TEST(QuasiDistribution, FreeEvolutionTransportsAlongStraightLines) {
  const auto g = Grid1D::symmetric(20.0, 512);
  const auto psi = make_gaussian({-2.0, 1.0, 1.0}, g, PhysParams{});
  const double t = static_cast<double>(g.size()) * g.dx() * g.dx() / std::numbers::pi;
  const auto w0 = wigner_transform(psi).dist;
  const auto wt = wigner_transform(free_propagate(psi, t)).dist;
  const long n = static_cast<long>(g.size());
  double err = 0.0;
  for (std::size_t ip = 0; ip < w0.p_grid.size(); ++ip) {
    const long k = static_cast<long>(ip) - n / 2;
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
      const long src = static_cast<long>(ix) - k;
      const double expect = (src >= 0 && src < n) ? w0.at(ip, static_cast<std::size_t>(src)) : 0.0;
      err = std::max(err, std::abs(wt.at(ip, ix) - expect));
    }
  }
  EXPECT_LT(err, 1e-4);
}

TEST(QuasiDistribution, SubsampleKeepsEveryStrideSample) {
  const auto g = Grid1D::symmetric(10.0, 128);
  const auto w = wigner_transform(make_gaussian({1.0, 0.0, 0.7}, g, PhysParams{})).dist;
  const auto s = subsample(w, 2, 4);
  EXPECT_EQ(s.p_grid.size(), 64u);
  EXPECT_EQ(s.x_grid.size(), 32u);
  EXPECT_EQ(s.at(3, 5), w.at(6, 20));
  EXPECT_THROW(subsample(w, 3, 1), ConfigError);
}

TEST(Qbm, PacketMovingAwayNeverCrosses) {
  const auto g = Grid1D::symmetric(20.0, 256);
  const auto psi = make_gaussian({6.0, 2.0, 0.7}, g, PhysParams{});
  const auto r = qbm_no_cross_probability(psi, FPKernelParams{1.0, 1.0, 1.0});
  EXPECT_NEAR(r.p_nocross, 1.0, 1e-2);
  EXPECT_EQ(r.p_nocross, r.p_nocross_raw);
}

TEST(Qbm, FastCrossingPacketAlmostSurelyCrosses) {
  const auto g = Grid1D::symmetric(20.0, 256);
  const auto psi = make_gaussian({5.0, -5.0, 1.0}, g, PhysParams{});
  const auto r = qbm_no_cross_probability(psi, FPKernelParams{1.0, 1.0, 3.0});
  EXPECT_NEAR(r.p_nocross, 0.0, 1e-2);
  EXPECT_GE(r.p_nocross_raw, 0.0);
  EXPECT_LE(r.p_nocross_raw, 1.0);
  EXPECT_LT(r.clipped_mass, 1e-6);

  // same packet, no environment: the image construction reflects it
  EXPECT_GT(crossing_decoherence(psi, 3.0).p_nocross, 0.05);
}

TEST(Qbm, RejectsStatesBehindTheWall) {
  const auto g = Grid1D::symmetric(20.0, 256);
  EXPECT_THROW(qbm_no_cross_probability(make_odd_pair({3.0, 0.0, 0.7}, g, PhysParams{}),
                                        FPKernelParams{}),
               ConfigError);
}

TEST(Qbm, SubsampledGridStaysClose) {
  const auto g = Grid1D::symmetric(20.0, 256);
  const auto psi = make_gaussian({4.0, -2.0, 0.7}, g, PhysParams{});
  const FPKernelParams k{1.0, 1.0, 1.0};
  QbmOptions coarse;
  coarse.stride_p = coarse.stride_x = 2;
  EXPECT_NEAR(qbm_no_cross_probability(psi, k, coarse).p_nocross,
              qbm_no_cross_probability(psi, k).p_nocross, 1e-3);
}
