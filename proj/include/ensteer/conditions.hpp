#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

#include "ensteer/types.hpp"

namespace ensteer {

inline Matrix kalman_matrix(const Matrix& A, const Matrix& B) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Matrix K(n, n * m);
  Matrix P = B;
  for (int j = 0; j < n; ++j) {
    K.middleCols(j * m, m) = P;
    if (j + 1 < n) P = A * P;
  }
  return K;
}

/// (N1) pointwise reachability: sigma_min of [B, AB, ..., A^{n-1}B] per sample.
struct CheckN1Result {
  bool pass = false;
  double min_sigma = 0.0;            // worst sample
  std::size_t worst_sample = 0;
  std::vector<double> sigma_min;     // per sample
};

inline CheckN1Result check_N1(const EnsembleSystem& sys, const Tolerances& tol = {}) {
  sys.validate();
  CheckN1Result r;
  r.min_sigma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sys.samples(); ++i) {
    Eigen::JacobiSVD<Matrix> svd(kalman_matrix(sys.A[i], sys.B[i]));
    double s = svd.singularValues()(svd.singularValues().size() - 1);
    r.sigma_min.push_back(s);
    if (s < r.min_sigma) {
      r.min_sigma = s;
      r.worst_sample = i;
    }
  }
  r.pass = r.min_sigma > tol.reachability_sigma_min;
  return r;
}

/// (N2) spectra at distinct parameters are disjoint: min over sample pairs of
/// the min eigenvalue distance. Trivially passes on a one-sample grid.
struct CheckN2Result {
  bool pass = false;
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t sample_a = 0, sample_b = 0;
};

inline CheckN2Result check_N2(const EnsembleSystem& sys, const Tolerances& tol = {}) {
  sys.validate();
  std::vector<Vector> spectra;
  spectra.reserve(sys.samples());
  for (const auto& A : sys.A) {
    Eigen::ComplexEigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw ConditionError("eigenvalue computation failed");
    spectra.push_back(es.eigenvalues());
  }
  CheckN2Result r;
  for (std::size_t i = 0; i < spectra.size(); ++i)
    for (std::size_t j = i + 1; j < spectra.size(); ++j) {
      double gap = std::numeric_limits<double>::infinity();
      for (int p = 0; p < spectra[i].size(); ++p)
        for (int q = 0; q < spectra[j].size(); ++q)
          gap = std::min(gap, std::abs(spectra[i](p) - spectra[j](q)));
      if (gap < r.min_gap) {
        r.min_gap = gap;
        r.sample_a = i;
        r.sample_b = j;
      }
    }
  r.pass = r.min_gap > tol.spectra_disjointness;
  return r;
}

/// (S1) characteristic polynomial z^n - (a_{n-1} z^{n-1} + ... + a_1 z + a_0(theta)):
/// only the constant coefficient may vary across the grid.
struct CheckS1Result {
  bool pass = false;
  std::vector<Complex> a0;        // a_0(theta_i) samples
  std::vector<Complex> a_consts;  // a_1..a_{n-1} (grid means)
  double max_drift = 0.0;         // max |a_j(theta_i) - mean_j| over j >= 1
};

/// Characteristic polynomial coefficients d_0..d_{n-1} of z^n + d_{n-1} z^{n-1} + ... + d_0,
/// expanded from the eigenvalues (stable for the small n this artifact targets).
inline std::vector<Complex> charpoly_tail(const Matrix& A) {
  Eigen::ComplexEigenSolver<Matrix> es(A, false);
  if (es.info() != Eigen::Success) throw ConditionError("eigenvalue computation failed");
  std::vector<Complex> c{Complex(1.0)};  // monic product of (z - lambda_i)
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    Complex lam = es.eigenvalues()(i);
    c.push_back(Complex(0.0));
    for (std::size_t j = c.size() - 1; j > 0; --j) c[j] = c[j - 1] - lam * c[j];
    c[0] *= -lam;
  }
  c.pop_back();  // drop the leading 1; c[j] is now the coefficient of z^j
  return c;
}

inline CheckS1Result check_S1(const EnsembleSystem& sys, const Tolerances& tol = {}) {
  sys.validate();
  const int n = sys.n;
  CheckS1Result r;
  std::vector<std::vector<Complex>> higher(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (const auto& A : sys.A) {
    auto d = charpoly_tail(A);
    r.a0.push_back(-d[0]);  // char(z) = z^n - (... + a_0), so a_j = -d_j
    for (int j = 1; j < n; ++j) higher[static_cast<std::size_t>(j - 1)].push_back(-d[static_cast<std::size_t>(j)]);
  }
  for (auto& series : higher) {
    Complex mean(0.0);
    for (const auto& v : series) mean += v;
    mean /= static_cast<double>(series.size());
    r.a_consts.push_back(mean);
    for (const auto& v : series) r.max_drift = std::max(r.max_drift, std::abs(v - mean));
  }
  r.pass = r.max_drift <= tol.s1_coefficient_drift;
  return r;
}

/// (S2) simple eigenvalues at every sample: min within-sample eigenvalue gap.
struct CheckS2Result {
  bool pass = false;
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t worst_sample = 0;
};

inline CheckS2Result check_S2(const EnsembleSystem& sys, const Tolerances& tol = {}) {
  sys.validate();
  CheckS2Result r;
  if (sys.n == 1) {  // nothing to separate
    r.pass = true;
    return r;
  }
  for (std::size_t i = 0; i < sys.samples(); ++i) {
    Eigen::ComplexEigenSolver<Matrix> es(sys.A[i], false);
    if (es.info() != Eigen::Success) throw ConditionError("eigenvalue computation failed");
    const Vector& lam = es.eigenvalues();
    for (int p = 0; p < lam.size(); ++p)
      for (int q = p + 1; q < lam.size(); ++q) {
        double gap = std::abs(lam(p) - lam(q));
        if (gap < r.min_gap) {
          r.min_gap = gap;
          r.worst_sample = i;
        }
      }
  }
  r.pass = r.min_gap > tol.eigengap;
  return r;
}

}  // namespace ensteer
