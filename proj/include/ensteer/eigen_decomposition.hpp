#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

#include "ensteer/types.hpp"

namespace ensteer {

/// Sampled eigenstructure of a single-input family with simple eigenvalues.
/// Columns of T(theta) are eigenvectors scaled so that T(theta)^{-1} b(theta)
/// is the all-ones vector; arc k is the continuity-matched curve lambda_k(theta).
struct EigenDecomposition {
  std::vector<std::vector<Complex>> lambda_arcs;  // [arc][sample]
  std::vector<Matrix> T_mats;                     // [sample], n x n
  double T_norm = 0.0;                            // max_theta ||T(theta)||_2
  std::vector<Vector> Tinv_f;                     // transformed target, filled on request

  int arcs() const { return static_cast<int>(lambda_arcs.size()); }
  std::size_t samples() const { return T_mats.size(); }
};

/// Sampled Lipschitz data for y over the points x (consecutive pairs):
/// L = safety * max |dy|/|dx|, M = max |y|.
struct LipschitzEstimate {
  double L = 0.0;
  double M = 0.0;
};

inline LipschitzEstimate lipschitz_estimate(const std::vector<Complex>& xs,
                                            const std::vector<Complex>& ys,
                                            double safety = 1.2) {
  if (xs.size() != ys.size() || xs.empty())
    throw ConditionError("lipschitz_estimate needs matching nonempty samples");
  LipschitzEstimate e;
  for (const auto& y : ys) e.M = std::max(e.M, std::abs(y));
  double slope = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double dx = std::abs(xs[i + 1] - xs[i]);
    if (dx == 0.0) throw ConditionError("lipschitz_estimate: duplicate consecutive sample points");
    slope = std::max(slope, std::abs(ys[i + 1] - ys[i]) / dx);
  }
  e.L = safety * slope;
  return e;
}

inline double operator_norm(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

/// Per-sample eigendecomposition with the all-ones input normalization and
/// nearest-neighbor continuity matching across the grid. Requires m = 1,
/// simple eigenvalues, and eigenvector coordinates of b bounded away from 0.
inline EigenDecomposition eigendecompose_simple(const EnsembleSystem& sys,
                                                const Tolerances& tol = {}) {
  if (sys.m != 1) throw ConditionError("eigendecomposition requires a single-input system");
  sys.validate();
  const int n = sys.n;
  EigenDecomposition out;
  out.lambda_arcs.assign(static_cast<std::size_t>(n), {});

  std::vector<Complex> prev(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < sys.samples(); ++i) {
    Eigen::ComplexEigenSolver<Matrix> es(sys.A[i]);
    if (es.info() != Eigen::Success) throw ConditionError("eigendecomposition failed to converge");
    Vector lam = es.eigenvalues();
    Matrix V = es.eigenvectors();

    // Simple-eigenvalue guard mirrors check_S2 so failures name the sample.
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(lam(p) - lam(q)) <= tol.eigengap)
          throw ConditionError("eigenvalues not simple at sample " + std::to_string(i));

    // Order-match against the previous sample (nearest neighbor, tie-checked).
    std::vector<int> perm(static_cast<std::size_t>(n));
    if (i == 0) {
      for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
    } else {
      std::vector<bool> used(static_cast<std::size_t>(n), false);
      for (int k = 0; k < n; ++k) {
        int best = -1;
        double d1 = std::numeric_limits<double>::infinity();
        double d2 = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
          if (used[static_cast<std::size_t>(j)]) continue;
          double d = std::abs(lam(j) - prev[static_cast<std::size_t>(k)]);
          if (d < d1) {
            d2 = d1;
            d1 = d;
            best = j;
          } else if (d < d2) {
            d2 = d;
          }
        }
        if (best < 0) throw ConditionError("eigenvalue matching exhausted candidates");
        if (std::isfinite(d2) && d2 - d1 < tol.eigen_match_tie)
          throw ConditionError("ambiguous eigenvalue matching at sample " + std::to_string(i) +
                               "; refine the parameter grid");
        used[static_cast<std::size_t>(best)] = true;
        perm[static_cast<std::size_t>(k)] = best;
      }
    }

    Matrix Vp(n, n);
    for (int k = 0; k < n; ++k) Vp.col(k) = V.col(perm[static_cast<std::size_t>(k)]);
    Vector lamp(n);
    for (int k = 0; k < n; ++k) lamp(k) = lam(perm[static_cast<std::size_t>(k)]);

    // Scale columns so T^{-1} b = ones: solve V c = b, T = V diag(c).
    Vector b = sys.B[i].col(0);
    Vector c = Vp.fullPivLu().solve(b);
    for (int k = 0; k < n; ++k)
      if (std::abs(c(k)) <= tol.reachability_sigma_min)
        throw ConditionError("input has a vanishing eigencoordinate at sample " +
                             std::to_string(i) + "; (N1) violated");
    Matrix T = Vp * c.asDiagonal();

    for (int k = 0; k < n; ++k) {
      out.lambda_arcs[static_cast<std::size_t>(k)].push_back(lamp(k));
      prev[static_cast<std::size_t>(k)] = lamp(k);
    }
    out.T_mats.push_back(std::move(T));
    out.T_norm = std::max(out.T_norm, operator_norm(out.T_mats.back()));
  }
  return out;
}

/// Transformed target g(theta) = T(theta)^{-1} f(theta), stored on the decomposition.
inline void transform_target(EigenDecomposition& eig, const TargetFamily& f) {
  if (f.samples() != eig.samples())
    throw ConditionError("target sample count does not match the decomposition");
  eig.Tinv_f.clear();
  for (std::size_t i = 0; i < eig.samples(); ++i)
    eig.Tinv_f.push_back(eig.T_mats[i].fullPivLu().solve(f.f[i]));
}

}  // namespace ensteer
