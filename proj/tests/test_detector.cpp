#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "crossing/detector.hpp"

using namespace crossing;

namespace {

const PhysParams kUnit{};
constexpr double kPinnedQbm = 0.008797514401326428;
constexpr double kPinnedDetector = 0.14288554313833324;

WaveFunction crossing_packet(const Grid1D& g) { return make_gaussian({5.0, -5.0, 0.5}, g, kUnit); }

}  // namespace

TEST(Detector, ZeroRateIsFreeEvolution) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = crossing_packet(g);
  std::vector<double> norms;
  const auto out = detector_evolve(psi, DetectorParams::for_interval(0.0, 2.0, 500), 2.0, &norms);
  const auto ref = free_propagate(psi, 2.0);
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(out.values[i] - ref.values[i]));
  EXPECT_LT(d, 1e-10);
  for (double n : norms) EXPECT_NEAR(n, 1.0, 1e-10);
}

TEST(Detector, DeepPacketDecaysExponentially) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = make_gaussian({-15.0, 0.0, 1.0}, g, kUnit);
  for (double gd : {0.5, 1.0, 3.0}) {
    const double tau = 1.0 / gd;  // one decay time
    const auto r = detection_probabilities(psi, DetectorParams::for_interval(gd, tau, 400), tau);
    EXPECT_NEAR(r.p_nd, std::exp(-gd * tau), 1e-3 * std::exp(-gd * tau)) << "gamma_d = " << gd;
  }
}

TEST(Detector, PacketMovingAwayIsNeverDetected) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = make_gaussian({5.0, 2.0, 0.5}, g, kUnit);
  const auto r = detection_probabilities(psi, DetectorParams::for_interval(10.0, 1.0, 1000), 1.0);
  EXPECT_NEAR(r.p_nd, 1.0, 1e-3);
}

TEST(Detector, ProbabilitiesAreComplementary) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto r =
      detection_probabilities(crossing_packet(g), DetectorParams::for_interval(3.0, 2.0, 500), 2.0);
  EXPECT_EQ(r.p_nd + r.p_d, 1.0);
}

TEST(Detector, NormNeverIncreases) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  std::vector<double> norms;
  detector_evolve(crossing_packet(g), DetectorParams::for_interval(5.0, 2.0, 1000), 2.0, &norms);
  double prev = 1.0 + 1e-14;
  for (double n : norms) {
    EXPECT_LE(n, prev + 1e-14);
    prev = n;
  }
}

TEST(Detector, SecondOrderInTimeStep) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = crossing_packet(g);
  const auto coarse = detection_probabilities(psi, DetectorParams::for_interval(10.0, 2.0, 2000), 2.0);
  const auto fine = detection_probabilities(psi, DetectorParams::for_interval(10.0, 2.0, 4000), 2.0);
  EXPECT_LT(std::abs(coarse.p_nd - fine.p_nd), 1e-4);
}

// Strong damping reflects amplitude, so detection first rises then falls.
TEST(Detector, DetectionIsNotMonotoneInRate) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = crossing_packet(g);
  const std::array<double, 4> rates{0.1, 1.0, 10.0, 100.0};
  // regression values from the first run of this implementation
  const std::array<double, 4> pinned{0.09017970413420362, 0.59808564872713255,
                                     0.97246503541752083, 0.73676082324332270};
  std::array<double, 4> pd{};
  for (std::size_t i = 0; i < rates.size(); ++i) {
    pd[i] = detection_probabilities(psi, DetectorParams::for_interval(rates[i], 2.0, 4000), 2.0).p_d;
    EXPECT_NEAR(pd[i], pinned[i], 1e-9);
  }
  EXPECT_LT(pd[0], pd[1]);
  EXPECT_LT(pd[1], pd[2]);
  EXPECT_GT(pd[2], pd[3]);
}

TEST(Detector, WeakRateIsLinear) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = crossing_packet(g);
  const double a = detection_probabilities(psi, DetectorParams::for_interval(1e-3, 2.0, 4000), 2.0).p_d;
  const double b = detection_probabilities(psi, DetectorParams::for_interval(1e-2, 2.0, 4000), 2.0).p_d;
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR((a / 1e-3) / (b / 1e-2), 1.0, 0.1);
}

TEST(Detector, RejectsInconsistentSteps) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  EXPECT_THROW(detector_evolve(crossing_packet(g), DetectorParams{1.0, 0.01, 100}, 2.0), ConfigError);
}

TEST(EffectivePotential, Limits) {
  const double a = 2.0, dt = 0.01;
  const double scale = 1.0 / std::sqrt(2.0 * a * dt);
  EXPECT_EQ(effective_potential(0.0, a, dt), std::numbers::ln2 / dt);
  EXPECT_LT(effective_potential(12.0 * scale, a, dt), 1e-12);
  EXPECT_EQ(effective_potential(1e6, a, dt), 0.0);
  for (double z : {10.0, 20.0, 40.0}) {
    const double x = -z * scale;
    EXPECT_NEAR(effective_potential(x, a, dt) / (2.0 * a * x * x), 1.0, 0.05) << "z = " << z;
  }
  // finite far inside the forbidden side, where erfc underflows
  EXPECT_TRUE(std::isfinite(effective_potential(-100.0 * scale, a, dt)));
}

// The stated probe depth for the deep asymptote. With the erfc form the
// ratio there is about 1.115, so this check is expected to fail.
TEST(EffectivePotential, RatioWithinFivePercentAtFiveSliceWidths) {
  const double a = 1.0, dt = 0.01;
  const double x = -5.0 / std::sqrt(2.0 * a * dt);
  EXPECT_NEAR(effective_potential(x, a, dt) / (2.0 * a * x * x), 1.0, 0.05);
}

TEST(EffectivePotential, ShapeProperties) {
  const double a = 1.0, dt = 0.05;
  const double scale = 1.0 / std::sqrt(2.0 * a * dt);
  double prev = std::numeric_limits<double>::infinity();
  for (double z = -40.0; z <= 10.0; z += 0.01) {
    const double v = effective_potential(z * scale, a, dt);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
  const double h = 0.01 * scale;
  for (double z = -40.0; z < -1.0; z += 0.25) {
    const double x = z * scale;
    const double second = effective_potential(x + h, a, dt) - 2.0 * effective_potential(x, a, dt) +
                          effective_potential(x - h, a, dt);
    EXPECT_GT(second, 0.0) << "z = " << z;
  }
}

TEST(ContinuousMeasurement, PacketMovingAwaySurvives) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = make_gaussian({5.0, 2.0, 0.5}, g, kUnit);
  EXPECT_NEAR(continuous_measurement_probability(psi, MeasurementParams::for_interval(1.0, 1.0, 4), 1.0),
              1.0, 1e-2);
}

TEST(ContinuousMeasurement, FastCrossingPacketIsSuppressed) {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = make_gaussian({2.0, -10.0, 0.5}, g, kUnit);
  EXPECT_LT(continuous_measurement_probability(psi, MeasurementParams::for_interval(1.0, 2.0, 8), 2.0),
            0.1);
}

// a -> infinity at fixed slice width turns V_eff into a hard wall on x < 0,
// which is also the gamma_d -> infinity limit of the detector at the same step.
TEST(ContinuousMeasurement, StrongMeasurementMatchesStrongDetector) {
  const auto g = Grid1D::symmetric(40.0, 4096);
  const auto psi = crossing_packet(g);
  const double p_plus =
      continuous_measurement_probability(psi, MeasurementParams::for_interval(1e8, 2.0, 8), 2.0);
  const double p_nd =
      detection_probabilities(psi, DetectorParams::for_interval(1e8, 2.0, 8), 2.0).p_nd;
  EXPECT_NEAR(p_plus / p_nd, 1.0, 0.05);
}

TEST(CompareMethods, AntisymmetricState) {
  const auto g = Grid1D::symmetric(20.0, 512);
  const auto psi = make_odd_pair({4.0, -2.0, 0.6}, g, kUnit);
  const auto rec = compare_methods(psi, kUnit, 1.0);
  EXPECT_NEAR(rec.image.p_nocross, 1.0, 1e-9);
  EXPECT_LT(std::abs(rec.image.re_D), 1e-9);
  EXPECT_FALSE(rec.qbm.has_value());
}

TEST(CompareMethods, AllAgreeWhenNothingCrosses) {
  const auto g = Grid1D::symmetric(20.0, 256);
  const auto psi = make_gaussian({6.0, 2.0, 0.7}, g, kUnit);
  const auto rec = compare_methods(psi, kUnit, 1.0);
  ASSERT_TRUE(rec.qbm.has_value());
  EXPECT_NEAR(rec.image.p_nocross, 1.0, 2e-2);
  EXPECT_NEAR(rec.qbm->p_nocross, 1.0, 2e-2);
  EXPECT_NEAR(rec.p_nd, 1.0, 2e-2);
  EXPECT_NEAR(rec.p_plus, 1.0, 2e-2);
}

TEST(CompareMethods, CrossingPacketRanking) {
  const auto g = Grid1D::symmetric(20.0, 256);
  const auto psi = make_gaussian({5.0, -5.0, 1.0}, g, kUnit);
  const auto rec = compare_methods(psi, kUnit, 3.0);
  ASSERT_TRUE(rec.qbm.has_value());
  EXPECT_LT(rec.qbm->p_nocross, 0.02);
  EXPECT_GT(rec.image.p_nocross, 0.05);
  // the packet reaches x = 0 at t = 1 and then spends about 2 time units in x < 0
  EXPECT_NEAR(rec.p_nd, std::exp(-2.0), 0.02);
  // regression values from the first run of this implementation
  EXPECT_NEAR(rec.qbm->p_nocross, kPinnedQbm, 1e-9);
  EXPECT_NEAR(rec.p_nd, kPinnedDetector, 1e-9);
}
