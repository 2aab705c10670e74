#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "ensteer/errors.hpp"

namespace ensteer {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered samples theta_1..theta_M of a Jordan arc in C. Samples must be
/// pairwise distinct; synthesis requires M >= 2, single-sample grids are
/// allowed for pointwise operations (checks, Hermite verdicts).
struct ParameterGrid {
  std::vector<Complex> theta;

  ParameterGrid() = default;
  explicit ParameterGrid(std::vector<Complex> t) : theta(std::move(t)) {
    if (theta.empty()) throw ConditionError("parameter grid is empty");
    for (std::size_t i = 0; i < theta.size(); ++i)
      for (std::size_t j = i + 1; j < theta.size(); ++j)
        if (theta[i] == theta[j]) throw ConditionError("parameter grid samples are not pairwise distinct");
  }

  static ParameterGrid interval(double a, double b, int samples) {
    if (samples < 1) throw ConditionError("grid needs at least one sample");
    if (samples == 1) return ParameterGrid({Complex(a, 0.0)});
    std::vector<Complex> t(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
      t[static_cast<std::size_t>(i)] = Complex(a + (b - a) * i / (samples - 1), 0.0);
    return ParameterGrid(std::move(t));
  }

  /// Original samples interleaved with chord midpoints (2M-1 points);
  /// the default validation grid for certification.
  ParameterGrid refined() const {
    std::vector<Complex> t;
    t.reserve(theta.size() * 2 - 1);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      t.push_back(theta[i]);
      if (i + 1 < theta.size()) t.push_back((theta[i] + theta[i + 1]) / 2.0);
    }
    return ParameterGrid(std::move(t));
  }

  std::size_t size() const { return theta.size(); }
};

/// Sampled family (A(theta_i), B(theta_i)); time-kind is carried by the caller.
struct EnsembleSystem {
  int n = 0;
  int m = 0;
  ParameterGrid grid;
  std::vector<Matrix> A;  // each n x n
  std::vector<Matrix> B;  // each n x m

  std::size_t samples() const { return grid.size(); }

  void validate() const {
    if (A.size() != grid.size() || B.size() != grid.size())
      throw ConditionError("system sample count does not match the grid");
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (A[i].rows() != n || A[i].cols() != n) throw ConditionError("A sample has wrong shape");
      if (B[i].rows() != n || B[i].cols() != m) throw ConditionError("B sample has wrong shape");
    }
  }
};

/// Sampled target family f(theta_i) in C^n.
struct TargetFamily {
  std::vector<Vector> f;
  std::size_t samples() const { return f.size(); }
};

/// Sampled realized states x(theta_i).
struct StateFamily {
  std::vector<Vector> x;
  std::size_t samples() const { return x.size(); }
};

/// Discrete-time open-loop input u_0..u_{T-1} (u_t applied at step t).
struct InputSequence {
  std::vector<Complex> values;
  std::size_t horizon() const { return values.size(); }
};

/// Piecewise-constant input on [0, N*tau): value values[l] on [l*tau, (l+1)*tau).
struct PiecewiseConstantInput {
  double tau = 0.0;
  std::vector<Complex> values;
  std::size_t pieces() const { return values.size(); }
  double duration() const { return tau * static_cast<double>(values.size()); }
};

/// Overridable tolerances; defaults are the project-wide contract.
struct Tolerances {
  double reachability_sigma_min = 1e-8;   // (N1) smallest singular value of the Kalman matrix
  double spectra_disjointness = 1e-6;     // (N2) min eigenvalue distance across distinct samples
  double eigengap = 1e-6;                 // (S2) min eigenvalue gap within a sample
  double s1_coefficient_drift = 1e-8;     // (S1) max |a_j(theta) - mean| for j >= 1
  double eigen_match_tie = 1e-12;         // arc matching: ambiguous assignment => refine grid
  double lipschitz_safety = 1.2;          // sampled Lipschitz estimates are scaled by this
};

/// Certified-mode caps; exceeding any is a CapError.
struct Caps {
  int degree_cap = 5000;        // per-term approximation degree
  long pole_cap = 1000000;      // total rational-sum terms N*M
  int monomial_cap = 200;       // Bernstein-to-monomial conversion degree
  int adaptive_degree_cap = 96; // least-squares escalation limit
};

enum class Mode { Certified, Adaptive };

/// Convenience builders used by tests and the CLI.
inline EnsembleSystem make_system(const ParameterGrid& grid,
                                  const std::function<Matrix(Complex)>& A_of,
                                  const std::function<Matrix(Complex)>& B_of) {
  EnsembleSystem s;
  s.grid = grid;
  for (Complex th : grid.theta) {
    s.A.push_back(A_of(th));
    s.B.push_back(B_of(th));
  }
  s.n = static_cast<int>(s.A.front().rows());
  s.m = static_cast<int>(s.B.front().cols());
  s.validate();
  return s;
}

inline TargetFamily make_target(const ParameterGrid& grid,
                                const std::function<Vector(Complex)>& f_of) {
  TargetFamily t;
  for (Complex th : grid.theta) t.f.push_back(f_of(th));
  return t;
}

}  // namespace ensteer
