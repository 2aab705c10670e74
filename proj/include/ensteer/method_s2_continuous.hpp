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

/// Continuous-time synthesis output: the piecewise-constant input, its
/// generating polynomial, the report, and the validation-grid decomposition
/// (which a caller needs to re-simulate).
struct ContinuousSynthesisResult {
  PiecewiseConstantInput u;
  ComplexPolynomial p;
  SynthesisReport report;
  EigenDecomposition eig_build;
  EigenDecomposition eig_val;
};

/// Piecewise-constant continuous-time method: diagonalize, map eigenvalue arcs
/// through z = e^{tau lambda}, fit the scaled target coordinates g_k/tau on the
/// image arcs, blend with indicators, and read the piece values off the
/// monomial coefficients. tau shrinks (halving, at most 20 times) until the
/// image arcs are injective and disjoint and the measured discretization
/// margin |tau p(e^{tau lambda}) - phi_k| stays within eps/2.
inline ContinuousSynthesisResult method_s2_continuous(
    const EnsembleSystem& sys, const TargetFamily& f, double eps, Mode mode,
    const EnsembleSystem* sys_val = nullptr, const TargetFamily* f_val = nullptr,
    const Tolerances& tol = {}, const Caps& caps = {}, double tau_start = 1.0) {
  if (!(eps > 0.0))
    throw ConditionError(
        "eps must be positive: exact ensemble reachability is never possible, only "
        "eps-approximate steering");
  sys.validate();
  if (sys.m != 1) throw ConditionError("method requires a single-input system");
  if (f.samples() != sys.samples()) throw ConditionError("target does not match the grid");
  if (!(tau_start > 0.0)) throw ConditionError("tau must start positive");
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

  ContinuousSynthesisResult res;
  res.eig_build = eigendecompose_simple(sys, tol);
  transform_target(res.eig_build, f);
  res.eig_val = eigendecompose_simple(vsys, tol);
  transform_target(res.eig_val, vf);
  if (sys_val) detail::match_arcs_to(res.eig_val, res.eig_build, tol);
  const EigenDecomposition& eig_b = res.eig_build;
  const EigenDecomposition& eig_v = res.eig_val;

  const double T_norm = std::max(eig_b.T_norm, eig_v.T_norm);

  auto image_arcs = [n](const EigenDecomposition& e, double tau) {
    std::vector<std::vector<Complex>> zs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      for (const auto& lam : e.lambda_arcs[static_cast<std::size_t>(k)])
        zs[static_cast<std::size_t>(k)].push_back(std::exp(tau * lam));
    return zs;
  };

  auto arcs_usable = [n](const std::vector<std::vector<Complex>>& zs) {
    double scale = 0.0;
    for (const auto& arc : zs)
      for (const auto& z : arc) scale = std::max(scale, std::abs(z));
    // Injectivity within each arc and disjointness across arcs, at grid resolution.
    for (int k = 0; k < n; ++k) {
      const auto& a = zs[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
          if (std::abs(a[i] - a[j]) <= 1e-12 * scale) return false;
      for (int l = k + 1; l < n; ++l)
        for (const auto& zi : a)
          for (const auto& zj : zs[static_cast<std::size_t>(l)])
            if (std::abs(zi - zj) <= 1e-12 * scale) return false;
    }
    return true;
  };

  double tau = tau_start;
  std::string last_failure;
  for (int attempt = 0; attempt <= 20; ++attempt, tau /= 2.0) {
    if (tau < 1e-8) break;
    auto zb = image_arcs(eig_b, tau);
    auto zv = image_arcs(eig_v, tau);
    if (!arcs_usable(zb) || !arcs_usable(zv)) {
      last_failure = "image arcs not injective/disjoint at tau = " + std::to_string(tau);
      continue;
    }

    SynthesisReport report;
    report.method = "s2ct";
    report.mode = mode;
    report.eps = eps;
    report.tau = tau;

    const double eps_fit = eps / (6.0 * tau * T_norm);
    std::vector<ComplexPolynomial> p_comp;
    bool stage_failed = false;
    try {
      for (int k = 0; k < n; ++k) {
        std::vector<Complex> by, vy;
        for (const auto& g : eig_b.Tinv_f) by.push_back(g(k) / tau);
        for (const auto& g : eig_v.Tinv_f) vy.push_back(g(k) / tau);
        ScalarApprox a = approx_on_arc(zb[static_cast<std::size_t>(k)], by,
                                       zv[static_cast<std::size_t>(k)], vy, eps_fit, mode,
                                       "p_" + std::to_string(k + 1), tol, caps);
        report.degrees.push_back(a.p.degree());
        for (auto& st : a.stages) report.budget.push_back(std::move(st));
        p_comp.push_back(std::move(a.p));
      }
    } catch (const CapError& e) {
      last_failure = e.what();
      stage_failed = true;
    }
    if (stage_failed) continue;

    std::vector<double> eps_q(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      double alpha_sum = 0.0;
      for (int l = 0; l < n; ++l) {
        double a_kl = 0.0;
        for (const auto& z : zb[static_cast<std::size_t>(l)])
          a_kl = std::max(a_kl, std::abs(p_comp[static_cast<std::size_t>(k)].eval(z)));
        for (const auto& z : zv[static_cast<std::size_t>(l)])
          a_kl = std::max(a_kl, std::abs(p_comp[static_cast<std::size_t>(k)].eval(z)));
        alpha_sum += a_kl;
      }
      eps_q[static_cast<std::size_t>(k)] = eps / (6.0 * tau * T_norm * std::max(alpha_sum, 1e-12));
    }

    IndicatorResult ind;
    try {
      ind = indicator_polys(zb, zv, eps_q, mode, caps);
    } catch (const CapError& e) {
      last_failure = e.what();
      continue;
    }
    for (int k = 0; k < n; ++k) {
      report.degrees.push_back(ind.q[static_cast<std::size_t>(k)].degree());
      report.budget.push_back({"q_" + std::to_string(k + 1) + " (indicator)",
                               eps_q[static_cast<std::size_t>(k)],
                               ind.measured[static_cast<std::size_t>(k)]});
    }

    ComplexPolynomial P;
    for (int k = 0; k < n; ++k)
      P = poly_add(P, poly_mul(p_comp[static_cast<std::size_t>(k)], ind.q[static_cast<std::size_t>(k)]));
    P.normalize();
    if (P.degree() > caps.degree_cap) {
      last_failure = "assembled degree exceeds the cap at tau = " + std::to_string(tau);
      continue;
    }

    // Piece values: p(z) = sum_l u_{N-1-l} z^l, so u_l = c_{N-1-l}.
    PiecewiseConstantInput u;
    u.tau = tau;
    const std::size_t N = P.coeffs.size();
    u.values.resize(N);
    for (std::size_t l = 0; l < N; ++l) u.values[l] = P.coeffs[N - 1 - l];

    // Discretization-consistency margin, measured directly on the validation
    // grid: |tau p(e^{tau lambda}) - phi_k| = tau |p(z)| |1 - (e^{tau lambda}-1)/(tau lambda)|.
    double margin = 0.0;
    for (std::size_t i = 0; i < eig_v.samples(); ++i)
      for (int k = 0; k < n; ++k) {
        Complex lam = eig_v.lambda_arcs[static_cast<std::size_t>(k)][i];
        Complex z = std::exp(tau * lam);
        margin = std::max(margin,
                          tau * std::abs(P.eval(z)) * std::abs(1.0 - expm1_over(tau * lam)));
      }
    if (margin > eps / 2.0) {
      last_failure = "discretization margin " + std::to_string(margin) +
                     " exceeds eps/2 at tau = " + std::to_string(tau);
      continue;
    }
    report.budget.push_back({"discretization margin (tau replacement)", eps / 2.0, margin});

    report.horizon = static_cast<int>(N);
    res.p = std::move(P);
    res.u = std::move(u);

    res.report = std::move(report);
    res.report.achieved_sup_error = sup_error(simulate_continuous_pwc(sys, eig_b, res.u), f);
    const double val_sup = sup_error(simulate_continuous_pwc(vsys, eig_v, res.u), vf);
    res.report.within_tolerance = val_sup <= eps;
    res.report.budget.push_back({"total (simulated on validation grid)", eps, val_sup});
    if (mode == Mode::Certified && !res.report.within_tolerance)
      throw CertificationError("certified synthesis exceeded eps end-to-end: measured " +
                               std::to_string(val_sup));
    return res;
  }
  throw CapError("tau halving exhausted without satisfying the contracts; last failure: " +
                 last_failure);
}

}  // namespace ensteer
