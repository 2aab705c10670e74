#pragma once

#include <string>
#include <vector>

#include "ensteer/complex_poly.hpp"
#include "ensteer/conditions.hpp"
#include "ensteer/eigen_decomposition.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/report.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// Discrete synthesis output: the input, its generating polynomial, and the
/// accounted report.
struct SynthesisResult {
  InputSequence u;
  ComplexPolynomial p;
  SynthesisReport report;
};

/// Input extraction pinned by the time-ordering invariant: with horizon
/// T = deg p + 1, the flow equals p(A)b exactly when u_t is the coefficient
/// of z^{T-1-t}.
inline InputSequence input_from_poly(const ComplexPolynomial& p) {
  InputSequence u;
  const std::size_t T = p.coeffs.size();
  u.values.resize(T);
  for (std::size_t t = 0; t < T; ++t) u.values[t] = p.coeffs[T - 1 - t];
  return u;
}

namespace detail {

inline void require_pass_N1(const EnsembleSystem& sys, const Tolerances& tol,
                            const std::string& grid_name) {
  auto r = check_N1(sys, tol);
  if (!r.pass)
    throw ConditionError("(N1) fails on the " + grid_name + " grid: min Kalman singular value " +
                         std::to_string(r.min_sigma) + " at sample " +
                         std::to_string(r.worst_sample));
}

inline void require_pass_N2(const EnsembleSystem& sys, const Tolerances& tol,
                            const std::string& grid_name) {
  auto r = check_N2(sys, tol);
  if (!r.pass)
    throw ConditionError("(N2) fails on the " + grid_name + " grid: spectra at samples " +
                         std::to_string(r.sample_a) + " and " + std::to_string(r.sample_b) +
                         " come within " + std::to_string(r.min_gap));
}

inline void require_pass_S1(const EnsembleSystem& sys, const Tolerances& tol,
                            const std::string& grid_name) {
  auto r = check_S1(sys, tol);
  if (!r.pass)
    throw ConditionError("(S1) fails on the " + grid_name +
                         " grid: non-constant higher characteristic coefficients, drift " +
                         std::to_string(r.max_drift));
}

inline void require_pass_S2(const EnsembleSystem& sys, const Tolerances& tol,
                            const std::string& grid_name) {
  auto r = check_S2(sys, tol);
  if (!r.pass)
    throw ConditionError("(S2) fails on the " + grid_name + " grid: eigenvalue gap " +
                         std::to_string(r.min_gap) + " at sample " +
                         std::to_string(r.worst_sample));
}

/// Reorder the arcs of `eig` so that arc k starts nearest to arc k of `ref`
/// (greedy, tie-guarded). Keeps lambda_arcs, T columns, and transformed-target
/// coordinates consistent.
inline void match_arcs_to(EigenDecomposition& eig, const EigenDecomposition& ref,
                          const Tolerances& tol) {
  const int n = eig.arcs();
  if (ref.arcs() != n) throw ConditionError("arc matching: decompositions disagree on n");
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int k = 0; k < n; ++k) {
    Complex anchor = ref.lambda_arcs[static_cast<std::size_t>(k)].front();
    int best = -1;
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      double d = std::abs(eig.lambda_arcs[static_cast<std::size_t>(j)].front() - anchor);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = j;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (best < 0) throw ConditionError("arc matching exhausted candidates");
    if (std::isfinite(d2) && d2 - d1 < tol.eigen_match_tie)
      throw ConditionError("ambiguous arc matching between build and validation grids");
    used[static_cast<std::size_t>(best)] = true;
    perm[static_cast<std::size_t>(k)] = best;
  }

  std::vector<std::vector<Complex>> arcs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    arcs[static_cast<std::size_t>(k)] = std::move(eig.lambda_arcs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
  eig.lambda_arcs = std::move(arcs);

  for (auto& T : eig.T_mats) {
    Matrix Tp(T.rows(), T.cols());
    for (int k = 0; k < n; ++k) Tp.col(k) = T.col(perm[static_cast<std::size_t>(k)]);
    T = std::move(Tp);
  }
  for (auto& g : eig.Tinv_f) {
    Vector gp(g.size());
    for (int k = 0; k < n; ++k) gp(k) = g(perm[static_cast<std::size_t>(k)]);
    g = std::move(gp);
  }
}

}  // namespace detail

}  // namespace ensteer
