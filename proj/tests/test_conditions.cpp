#include <gtest/gtest.h>

#include <random>

#include "ensteer/conditions.hpp"
#include "ensteer/types.hpp"

namespace {

using namespace ensteer;

EnsembleSystem companion_family(double a, double b, int samples) {
  // A(theta) = [[0,1],[theta,0]], b = e_2: char(z) = z^2 - theta.
  return make_system(
      ParameterGrid::interval(a, b, samples),
      [](Complex th) {
        Matrix A(2, 2);
        A << Complex(0.0), Complex(1.0), th, Complex(0.0);
        return A;
      },
      [](Complex) {
        Matrix B(2, 1);
        B << Complex(0.0), Complex(1.0);
        return B;
      });
}

EnsembleSystem diagonal_family(double a, double b, int samples, double offset) {
  return make_system(
      ParameterGrid::interval(a, b, samples),
      [offset](Complex th) {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 0) = th;
        A(1, 1) = th + offset;
        return A;
      },
      [](Complex) {
        Matrix B(2, 1);
        B << Complex(1.0), Complex(1.0);
        return B;
      });
}

TEST(KalmanMatrix, ColumnsAreIteratedImages) {
  Matrix A(2, 2);
  A << Complex(1.0), Complex(2.0), Complex(3.0), Complex(4.0);
  Matrix B(2, 1);
  B << Complex(1.0), Complex(0.0);
  Matrix K = kalman_matrix(A, B);
  ASSERT_EQ(K.cols(), 2);
  EXPECT_EQ(K(0, 0), Complex(1.0));
  EXPECT_EQ(K(1, 0), Complex(0.0));
  EXPECT_EQ(K(0, 1), Complex(1.0));  // A b = (1,3)
  EXPECT_EQ(K(1, 1), Complex(3.0));
}

TEST(KalmanMatrix, MultiInputBlocksInterleaveByPower) {
  Matrix A = Matrix::Identity(2, 2) * Complex(2.0);
  Matrix B = Matrix::Identity(2, 2);
  Matrix K = kalman_matrix(A, B);  // [B, AB] as n x (n m)
  ASSERT_EQ(K.cols(), 4);
  EXPECT_EQ(K(0, 0), Complex(1.0));
  EXPECT_EQ(K(0, 2), Complex(2.0));
  EXPECT_EQ(K(1, 3), Complex(2.0));
}

/// Oracle: the 2x2 characteristic polynomial z^2 - tr(A) z + det(A).
TEST(CharpolyTail, MatchesHandExpansionFor2x2) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = Complex(u(rng), u(rng));
    auto tail = charpoly_tail(A);
    Complex tr = A(0, 0) + A(1, 1);
    Complex det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    ASSERT_EQ(tail.size(), 2u);
    EXPECT_LT(std::abs(tail[0] - det), 1e-10);
    EXPECT_LT(std::abs(tail[1] - (-tr)), 1e-10);
  }
}

TEST(CheckN1, PassesReachableAndFailsUnreachable) {
  auto sys = companion_family(0.0, 1.0, 11);
  auto r = check_N1(sys);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.min_sigma, 1.0, 1e-12);  // K = [[0,1],[1,0]] at every sample

  auto dead = make_system(
      ParameterGrid::interval(0.0, 1.0, 5),
      [](Complex th) {
        Matrix A(2, 2);
        A << th, Complex(0.0), Complex(0.0), th + Complex(1.0);
        return A;
      },
      [](Complex) { return Matrix::Zero(2, 1); });
  EXPECT_FALSE(check_N1(dead).pass);
}

TEST(CheckN2, DisjointSpectraPassOverlappingFail) {
  EXPECT_TRUE(check_N2(diagonal_family(0.0, 1.0, 11, 3.0)).pass);

  // Constant matrix: identical spectra at distinct parameters.
  auto constant = make_system(
      ParameterGrid::interval(0.0, 1.0, 5),
      [](Complex) {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 0) = Complex(1.0);
        A(1, 1) = Complex(2.0);
        return A;
      },
      [](Complex) {
        Matrix B(2, 1);
        B << Complex(1.0), Complex(1.0);
        return B;
      });
  auto r = check_N2(constant);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.min_gap, 0.0, 1e-12);
}

TEST(CheckN2, SingleSampleTriviallyPasses) {
  auto sys = companion_family(0.0, 1.0, 1);
  EXPECT_TRUE(check_N2(sys).pass);
}

TEST(CheckS1, CompanionFamilyPassesAndReportsA0) {
  auto sys = companion_family(0.0, 1.0, 11);
  auto r = check_S1(sys);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_drift, 1e-10);
  ASSERT_EQ(r.a0.size(), 11u);
  // char(z) = z^2 - theta: a_0 = theta, a_1 = 0.
  EXPECT_LT(std::abs(r.a0[10] - Complex(1.0)), 1e-9);
  ASSERT_EQ(r.a_consts.size(), 1u);
  EXPECT_LT(std::abs(r.a_consts[0]), 1e-9);
}

TEST(CheckS1, VaryingTraceFails) {
  auto r = check_S1(diagonal_family(0.0, 1.0, 11, 3.0));
  EXPECT_FALSE(r.pass);  // a_1 = 2 theta + 3 varies
  EXPECT_GT(r.max_drift, 0.5);
}

TEST(CheckS2, SimpleEigenvaluesPassRepeatedFail) {
  auto r = check_S2(diagonal_family(0.0, 1.0, 11, 3.0));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.min_gap, 3.0, 1e-9);

  auto nilpotent = make_system(
      ParameterGrid::interval(0.0, 1.0, 3),
      [](Complex th) {
        Matrix A(2, 2);
        A << Complex(0.0), Complex(1.0) + th, Complex(0.0), Complex(0.0);
        return A;
      },
      [](Complex) {
        Matrix B(2, 1);
        B << Complex(0.0), Complex(1.0);
        return B;
      });
  EXPECT_FALSE(check_S2(nilpotent).pass);  // eigenvalue 0 twice
}

TEST(CheckS2, ScalarSystemsTriviallyPass) {
  auto sys = make_system(
      ParameterGrid::interval(0.0, 1.0, 5),
      [](Complex th) { return Matrix::Identity(1, 1) * th; },
      [](Complex) { return Matrix::Identity(1, 1); });
  EXPECT_TRUE(check_S2(sys).pass);
}

}  // namespace
