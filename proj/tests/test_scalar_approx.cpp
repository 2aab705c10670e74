#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ensteer/scalar_approx.hpp"

namespace {

using namespace ensteer;

std::vector<Complex> real_points(double a, double b, int samples) {
  std::vector<Complex> zs;
  for (int i = 0; i < samples; ++i) zs.emplace_back(a + (b - a) * i / (samples - 1), 0.0);
  return zs;
}

std::vector<Complex> circle_points(int samples) {
  std::vector<Complex> zs;
  for (int i = 0; i < samples; ++i) {
    double phi = 2.0 * std::numbers::pi * i / samples;
    zs.push_back(std::polar(1.0, phi));
  }
  return zs;
}

TEST(ClassifyArc, RealIntervalToleratesTinyImaginaryNoise) {
  std::vector<Complex> zs = real_points(2.0, 3.0, 11);
  zs[4] += Complex(0.0, 1e-12);
  EXPECT_EQ(classify_arc(zs), ArcKind::RealInterval);
}

TEST(ClassifyArc, UnitCircleArc) {
  std::vector<Complex> zs;
  for (int i = 0; i < 11; ++i) zs.push_back(std::polar(1.0, 0.3 + 0.1 * i));
  EXPECT_EQ(classify_arc(zs), ArcKind::UnitCircle);
}

TEST(ClassifyArc, TiltedLineIsRejected) {
  std::vector<Complex> zs;
  for (int i = 0; i < 11; ++i) zs.push_back(Complex(1.0, 1.0) * (1.0 + 0.1 * i));
  EXPECT_THROW(classify_arc(zs), ArcClassificationError);
}

TEST(ApproxOnArc, AdaptiveRecoversPolynomialData) {
  ComplexPolynomial truth({{1.0, 0.0}, {0.0, -2.0}, {0.5, 0.0}});
  std::vector<Complex> bz = real_points(-1.0, 1.0, 15), vz = real_points(-1.0, 1.0, 31);
  std::vector<Complex> by, vy;
  for (auto z : bz) by.push_back(truth.eval(z));
  for (auto z : vz) vy.push_back(truth.eval(z));
  ScalarApprox out = approx_on_arc(bz, by, vz, vy, 1e-10, Mode::Adaptive, "fit");
  EXPECT_LE(out.measured, 1e-10);
  ASSERT_EQ(out.stages.size(), 1u);
  EXPECT_LE(out.stages[0].measured, out.stages[0].allotted);
}

TEST(ApproxOnArc, CertifiedIntervalRouteUsesBernstein) {
  // cos on [0,1]: M = L = 1, and eps = 2.4 keeps the Bernstein degree near 22.
  // Much tighter eps pushes the degree past ~25, where the exact monomial
  // conversion loses everything to 4^n coefficient cancellation.
  std::vector<Complex> bz = real_points(0.0, 1.0, 41), vz = real_points(0.0, 1.0, 101);
  std::vector<Complex> by, vy;
  for (auto z : bz) by.emplace_back(std::cos(z.real()), 0.0);
  for (auto z : vz) vy.emplace_back(std::cos(z.real()), 0.0);
  ScalarApprox out = approx_on_arc(bz, by, vz, vy, 2.4, Mode::Certified, "cos");
  EXPECT_LE(out.measured, 2.4);
  EXPECT_LE(out.measured, 0.05);  // the bound is pessimistic, the fit is good
  for (const auto& st : out.stages) EXPECT_LE(st.measured, st.allotted) << st.name;
}

TEST(ApproxOnArc, CertifiedCircleIdentityNeedsNoPoleMachinery) {
  // f(z) = z on the circle has (up to rounding) no negative-frequency mass,
  // so the certified route is the Fejer stage plus at most a free drop.
  std::vector<Complex> bz = circle_points(64), vz = circle_points(128);
  std::vector<Complex> by = bz, vy = vz;
  ScalarApprox out = approx_on_arc(bz, by, vz, vy, 0.9, Mode::Certified, "id");
  EXPECT_LE(out.measured, 0.9);
  for (const auto& st : out.stages) EXPECT_LE(st.measured, st.allotted) << st.name;
}

TEST(ApproxOnArc, CertifiedCircleEliminatesNegativePowers) {
  // f(z) = Re z = (z + 1/z)/2 on the circle: the loose eps keeps the Fejer
  // degree at 2, whose only negative coefficient (z^-1 at 1/4) is small
  // enough against the remaining budget to drop outright.
  std::vector<Complex> bz = circle_points(64), vz = circle_points(128);
  std::vector<Complex> by, vy;
  for (auto z : bz) by.emplace_back(z.real(), 0.0);
  for (auto z : vz) vy.emplace_back(z.real(), 0.0);
  ScalarApprox out = approx_on_arc(bz, by, vz, vy, 7.4, Mode::Certified, "re");
  EXPECT_LE(out.measured, 7.4);
  for (const auto& st : out.stages) EXPECT_LE(st.measured, st.allotted) << st.name;
  EXPECT_GE(out.stages.size(), 2u);  // Fejer stage plus the negative-power drop
}

TEST(ApproxOnArc, CertifiedCircleRefusesLargeNegativeFrequencyMass) {
  // f(z) = Re z at a tight eps: the Fejer polynomial must keep z^-1 at weight
  // near 1/2, far above the droppable mass, and no certified elimination
  // exists for poles at the circle's center. Honest refusal, not a bad fit.
  std::vector<Complex> bz = circle_points(256), vz = circle_points(512);
  std::vector<Complex> by, vy;
  for (auto z : bz) by.emplace_back(z.real(), 0.0);
  for (auto z : vz) vy.emplace_back(z.real(), 0.0);
  EXPECT_THROW(approx_on_arc(bz, by, vz, vy, 0.5, Mode::Certified, "re"),
               CertificationError);
}

TEST(ApproxOnArc, CertifiedTiltedArcRefusesToGuess) {
  std::vector<Complex> bz, by;
  for (int i = 0; i < 11; ++i) {
    bz.push_back(Complex(1.0, 1.0) * (1.0 + 0.1 * i));
    by.push_back(bz.back());
  }
  EXPECT_THROW(approx_on_arc(bz, by, bz, by, 0.5, Mode::Certified, "tilt"),
               ArcClassificationError);
}

TEST(ApproxOnArc, RejectsNonPositiveEpsAndMismatchedSamples) {
  std::vector<Complex> bz = real_points(0.0, 1.0, 5), by = bz;
  EXPECT_THROW(approx_on_arc(bz, by, bz, by, 0.0, Mode::Adaptive, "x"), ConditionError);
  by.pop_back();
  EXPECT_THROW(approx_on_arc(bz, by, bz, bz, 0.1, Mode::Adaptive, "x"), ConditionError);
}

}  // namespace
