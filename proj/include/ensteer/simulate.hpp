#pragma once

#include <cmath>
#include <vector>

#include "ensteer/eigen_decomposition.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// x_{t+1} = A(theta) x_t + B(theta) u_t from x_0 = 0, returning x_T per sample.
/// Requires m = 1 (scalar input channel).
inline StateFamily simulate_discrete(const EnsembleSystem& sys, const InputSequence& u) {
  if (sys.m != 1) throw ConditionError("simulate_discrete requires a single-input system");
  sys.validate();
  StateFamily out;
  out.x.reserve(sys.samples());
  for (std::size_t i = 0; i < sys.samples(); ++i) {
    Vector x = Vector::Zero(sys.n);
    for (const Complex& ut : u.values) x = sys.A[i] * x + sys.B[i].col(0) * ut;
    out.x.push_back(std::move(x));
  }
  return out;
}

/// (e^x - 1)/x, switching to a degree-6 Taylor expansion for |x| < 1e-6.
inline Complex expm1_over(Complex x) {
  if (std::abs(x) < 1e-6) {
    Complex acc(1.0);
    // 1 + x/2 + x^2/6 + x^3/24 + x^4/120 + x^5/720 + x^6/5040
    double fact = 1.0;
    Complex xp(1.0);
    for (int k = 1; k <= 6; ++k) {
      xp *= x;
      fact *= static_cast<double>(k + 1);
      acc += xp / fact;
    }
    return acc;
  }
  return (std::exp(x) - 1.0) / x;
}

/// Flow of dx/dt = A(theta) x + b(theta) u(t) from 0 over [0, N*tau) for a
/// piecewise-constant input, evaluated through the sampled eigenstructure:
/// component k is tau * (e^{tau lambda}-1)/(tau lambda) * p_u(e^{tau lambda})
/// with p_u(z) = sum_l u_{N-1-l} z^l, then mapped back through T(theta).
inline StateFamily simulate_continuous_pwc(const EnsembleSystem& sys,
                                           const EigenDecomposition& eig,
                                           const PiecewiseConstantInput& u) {
  if (u.tau <= 0.0) throw ConditionError("piecewise-constant input needs tau > 0");
  if (u.values.empty()) throw ConditionError("piecewise-constant input needs at least one piece");
  if (eig.samples() != sys.samples())
    throw ConditionError("decomposition does not match the system grid");
  const int n = sys.n;
  const std::size_t N = u.values.size();

  StateFamily out;
  out.x.reserve(sys.samples());
  for (std::size_t i = 0; i < sys.samples(); ++i) {
    Vector phi_tilde(n);
    for (int k = 0; k < n; ++k) {
      Complex lam = eig.lambda_arcs[static_cast<std::size_t>(k)][i];
      Complex z = std::exp(u.tau * lam);
      // Horner for p_u(z) with coefficient of z^l equal to u_{N-1-l}.
      Complex p = u.values[0];
      for (std::size_t l = 1; l < N; ++l) p = p * z + u.values[l];
      phi_tilde(k) = u.tau * expm1_over(u.tau * lam) * p;
    }
    out.x.push_back(eig.T_mats[i] * phi_tilde);
  }
  return out;
}

/// max over the grid of the Euclidean distance ||x(theta_i) - f(theta_i)||.
inline double sup_error(const StateFamily& x, const TargetFamily& f) {
  if (x.samples() != f.samples()) throw ConditionError("sup_error: sample counts differ");
  if (x.samples() == 0) throw ConditionError("sup_error: empty families");
  double sup = 0.0;
  for (std::size_t i = 0; i < x.samples(); ++i) {
    if (x.x[i].size() != f.f[i].size()) throw ConditionError("sup_error: dimension mismatch");
    sup = std::max(sup, (x.x[i] - f.f[i]).norm());
  }
  return sup;
}

}  // namespace ensteer
