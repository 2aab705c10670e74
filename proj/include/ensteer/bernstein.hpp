#pragma once

#include <cmath>
#include <vector>

#include "ensteer/complex_poly.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// Certified Bernstein error bound on [a,b] for a Lipschitz f:
/// sqrt(2) * (4*M + (b-a)*L/2) * sqrt(ln n / n), valid for n >= 3.
inline double bernstein_bound(double M, double L, double length, int n) {
  return std::sqrt(2.0) * (4.0 * M + length * L / 2.0) * std::sqrt(std::log(double(n)) / double(n));
}

/// Smallest n >= 3 whose bound meets eps; linear scan (the bound decreases for n >= 3).
inline int bernstein_degree(double M, double L, double length, double eps, const Caps& caps = {}) {
  if (eps <= 0.0) throw ConditionError("bernstein_degree requires eps > 0");
  if (M < 0.0 || L < 0.0 || length < 0.0) throw ConditionError("bernstein_degree: negative bound data");
  for (int n = 3; n <= caps.degree_cap; ++n)
    if (bernstein_bound(M, L, length, n) <= eps) return n;
  throw CapError("bernstein_degree exceeds the degree cap for the requested tolerance");
}

/// Evaluate the Bernstein polynomial B_{n,f}(x) on [a,b] from the node values
/// f(a + k*(b-a)/n), k = 0..n. Weights are formed in the log domain (never raw
/// factorials) and renormalized so they sum to exactly 1, preserving the
/// convex-combination property for large n.
inline Complex bernstein_apply(const std::vector<Complex>& node_values, int n, double a, double b,
                               double x) {
  if (static_cast<int>(node_values.size()) != n + 1)
    throw ConditionError("bernstein_apply: need n+1 node values");
  if (!(b > a)) throw ConditionError("bernstein_apply: empty interval");
  if (x < a || x > b) throw ConditionError("bernstein_apply: point outside [a,b]");
  const double s = (x - a) / (b - a);
  if (s == 0.0) return node_values.front();
  if (s == 1.0) return node_values.back();

  const double ls = std::log(s);
  const double l1s = std::log1p(-s);
  const double lgn = std::lgamma(double(n) + 1.0);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  double wsum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double lw = lgn - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0) +
                k * ls + (n - k) * l1s;
    w[static_cast<std::size_t>(k)] = std::exp(lw);
    wsum += w[static_cast<std::size_t>(k)];
  }
  Complex acc(0.0);
  for (int k = 0; k <= n; ++k) acc += node_values[static_cast<std::size_t>(k)] * (w[static_cast<std::size_t>(k)] / wsum);
  return acc;
}

/// Exact conversion of the Bernstein form to monomial coefficients in x.
/// Mathematically exact; numerically the basis change is ill conditioned, so a
/// warning is flagged above n = 60 and n above the monomial cap is refused.
inline ComplexPolynomial bernstein_to_monomial(const std::vector<Complex>& node_values, int n,
                                               double a, double b, const Caps& caps = {},
                                               bool* conditioning_warning = nullptr) {
  if (static_cast<int>(node_values.size()) != n + 1)
    throw ConditionError("bernstein_to_monomial: need n+1 node values");
  if (!(b > a)) throw ConditionError("bernstein_to_monomial: empty interval");
  if (n > caps.monomial_cap)
    throw CapError("bernstein_to_monomial: degree exceeds the monomial conversion cap");
  if (conditioning_warning) *conditioning_warning = (n > 60);

  // Pascal triangle up to row n (double; exact through n = 56, adequate after).
  std::vector<std::vector<double>> C(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    C[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1.0);
    for (int j = 1; j < i; ++j)
      C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          C[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          C[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
  }

  // Coefficients in s = (x-a)/(b-a): gamma_i = sum_{k<=i} f_k C(n,k) C(n-k,i-k) (-1)^{i-k}.
  std::vector<Complex> gamma(static_cast<std::size_t>(n) + 1, Complex(0.0));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= i; ++k) {
      double sign = ((i - k) % 2 == 0) ? 1.0 : -1.0;
      gamma[static_cast<std::size_t>(i)] += node_values[static_cast<std::size_t>(k)] *
          (C[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] *
           C[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(i - k)] * sign);
    }

  // Substitute s = (x - a)/(b - a).
  return poly_compose_affine(ComplexPolynomial(std::move(gamma)), Complex(a, 0.0),
                             Complex(1.0 / (b - a), 0.0));
}

}  // namespace ensteer
