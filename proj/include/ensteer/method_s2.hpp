#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ensteer/complex_poly.hpp"
#include "ensteer/conditions.hpp"
#include "ensteer/eigen_decomposition.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/runge.hpp"
#include "ensteer/scalar_approx.hpp"
#include "ensteer/simulate.hpp"
#include "ensteer/synthesis_common.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// Method for families with simple eigenvalues: per-arc approximation of the
/// transformed target coordinates, blended by indicator polynomials of the
/// disjoint eigenvalue arcs. Budgets split the tolerance as eps/(3 T_norm) for
/// the fits and eps/(3 T_norm sum_l alpha_kl) for the indicators.
inline SynthesisResult method_s2(const EnsembleSystem& sys, const TargetFamily& f, double eps,
                                 Mode mode, const EnsembleSystem* sys_val = nullptr,
                                 const TargetFamily* f_val = nullptr, const Tolerances& tol = {},
                                 const Caps& caps = {}) {
  if (!(eps > 0.0))
    throw ConditionError(
        "eps must be positive: exact ensemble reachability is never possible, only "
        "eps-approximate steering");
  sys.validate();
  if (sys.m != 1) throw ConditionError("method requires a single-input system");
  if (f.samples() != sys.samples()) throw ConditionError("target does not match the grid");
  const EnsembleSystem& vsys = sys_val ? *sys_val : sys;
  const TargetFamily& vf = f_val ? *f_val : f;
  if ((sys_val == nullptr) != (f_val == nullptr))
    throw ConditionError("validation system and target must be supplied together");
  if (vf.samples() != vsys.samples()) throw ConditionError("validation target does not match its grid");

  detail::require_pass_N1(sys, tol, "build");
  detail::require_pass_N2(sys, tol, "build");
  detail::require_pass_S2(sys, tol, "build");
  detail::require_pass_N2(vsys, tol, "validation");
  detail::require_pass_S2(vsys, tol, "validation");

  const int n = sys.n;

  EigenDecomposition eig_b = eigendecompose_simple(sys, tol);
  transform_target(eig_b, f);
  EigenDecomposition eig_v = eigendecompose_simple(vsys, tol);
  transform_target(eig_v, vf);
  if (sys_val) detail::match_arcs_to(eig_v, eig_b, tol);

  const double T_norm = std::max(eig_b.T_norm, eig_v.T_norm);
  const double eps_fit = eps / (3.0 * T_norm);

  SynthesisResult res;
  res.report.method = "s2";
  res.report.mode = mode;
  res.report.eps = eps;

  std::vector<ComplexPolynomial> p_comp;
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> by, vy;
    for (const auto& g : eig_b.Tinv_f) by.push_back(g(k));
    for (const auto& g : eig_v.Tinv_f) vy.push_back(g(k));
    ScalarApprox a = approx_on_arc(eig_b.lambda_arcs[static_cast<std::size_t>(k)], by,
                                   eig_v.lambda_arcs[static_cast<std::size_t>(k)], vy, eps_fit,
                                   mode, "p_" + std::to_string(k + 1), tol, caps);
    res.report.degrees.push_back(a.p.degree());
    for (auto& st : a.stages) res.report.budget.push_back(std::move(st));
    p_comp.push_back(std::move(a.p));
  }

  // alpha_{k,l}: grid maxima of |p_k| over arc l (build and validation samples).
  std::vector<double> eps_q(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double alpha_sum = 0.0;
    for (int l = 0; l < n; ++l) {
      double a_kl = 0.0;
      for (const auto& z : eig_b.lambda_arcs[static_cast<std::size_t>(l)])
        a_kl = std::max(a_kl, std::abs(p_comp[static_cast<std::size_t>(k)].eval(z)));
      for (const auto& z : eig_v.lambda_arcs[static_cast<std::size_t>(l)])
        a_kl = std::max(a_kl, std::abs(p_comp[static_cast<std::size_t>(k)].eval(z)));
      alpha_sum += a_kl;
    }
    eps_q[static_cast<std::size_t>(k)] = eps / (3.0 * T_norm * std::max(alpha_sum, 1e-12));
  }

  IndicatorResult ind = indicator_polys(eig_b.lambda_arcs, eig_v.lambda_arcs, eps_q, mode, caps);
  for (int k = 0; k < n; ++k) {
    res.report.degrees.push_back(ind.q[static_cast<std::size_t>(k)].degree());
    res.report.budget.push_back({"q_" + std::to_string(k + 1) + " (indicator)",
                                 eps_q[static_cast<std::size_t>(k)],
                                 ind.measured[static_cast<std::size_t>(k)]});
  }

  ComplexPolynomial P;
  for (int k = 0; k < n; ++k)
    P = poly_add(P, poly_mul(p_comp[static_cast<std::size_t>(k)], ind.q[static_cast<std::size_t>(k)]));
  P.normalize();
  if (P.degree() > caps.degree_cap) throw CapError("method_s2: assembled degree exceeds the cap");

  res.p = std::move(P);
  res.u = input_from_poly(res.p);
  res.report.horizon = static_cast<int>(res.u.horizon());

  res.report.achieved_sup_error = sup_error(simulate_discrete(sys, res.u), f);
  const double val_sup = sup_error(simulate_discrete(vsys, res.u), vf);
  res.report.within_tolerance = val_sup <= eps;
  res.report.budget.push_back({"total (simulated on validation grid)", eps, val_sup});
  if (mode == Mode::Certified && !res.report.within_tolerance)
    throw CertificationError("certified synthesis exceeded eps end-to-end: measured " +
                             std::to_string(val_sup));
  return res;
}

}  // namespace ensteer
