#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ensteer/complex_poly.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// Fourier coefficients g^(k), k = -(n-1)..(n-1), of a function sampled on the
/// uniform circle grid z_j = e^{2 pi i j / Q}: trapezoid rule on the periodic
/// integral, requiring Q >= 8n for the quadrature to sit under the Fejer bound.
inline std::vector<Complex> fourier_coeffs(const std::vector<Complex>& circle_values, int n) {
  const int Q = static_cast<int>(circle_values.size());
  if (n < 1) throw ConditionError("fourier_coeffs requires n >= 1");
  if (Q < 8 * n) throw ConditionError("fourier_coeffs: circle grid too small (need Q >= 8n)");
  std::vector<Complex> ghat(static_cast<std::size_t>(2 * n - 1));
  const double step = 2.0 * std::numbers::pi / Q;
  for (int k = -(n - 1); k <= n - 1; ++k) {
    Complex acc(0.0);
    for (int j = 0; j < Q; ++j) {
      double s = step * j;
      acc += circle_values[static_cast<std::size_t>(j)] * std::polar(1.0, -k * s);
    }
    ghat[static_cast<std::size_t>(k + n - 1)] = acc / static_cast<double>(Q);
  }
  return ghat;
}

/// Fejer mean F_n(z) = sum_{|k| < n} ((n - |k|)/n) g^(k) z^k.
inline LaurentPolynomial fejer_poly(const std::vector<Complex>& ghat, int n) {
  if (static_cast<int>(ghat.size()) != 2 * n - 1)
    throw ConditionError("fejer_poly: coefficient window must have length 2n-1");
  LaurentPolynomial F;
  F.n_neg = n - 1;
  F.coeffs.assign(static_cast<std::size_t>(2 * n - 1), Complex(0.0));
  for (int k = -(n - 1); k <= n - 1; ++k) {
    double w = static_cast<double>(n - std::abs(k)) / static_cast<double>(n);
    F.coeffs[static_cast<std::size_t>(k + n - 1)] = w * ghat[static_cast<std::size_t>(k + n - 1)];
  }
  return F;
}

/// Certified Fejer bound for an L-Lipschitz function on the circle:
/// 2 sqrt(2) pi L ln(n) / n.
inline double fejer_bound(double L, int n) {
  return 2.0 * std::sqrt(2.0) * std::numbers::pi * L * std::log(double(n)) / double(n);
}

/// Smallest n >= 2 whose bound meets eps (linear scan).
inline int fejer_degree(double L, double eps, const Caps& caps = {}) {
  if (eps <= 0.0) throw ConditionError("fejer_degree requires eps > 0");
  if (L < 0.0) throw ConditionError("fejer_degree: negative Lipschitz constant");
  for (int n = 2; n <= caps.degree_cap; ++n)
    if (fejer_bound(L, n) <= eps) return n;
  throw CapError("fejer_degree exceeds the degree cap for the requested tolerance");
}

/// Values of a function given on a circle arc, extended to a full circle grid:
/// on the arc the given samples are angle-interpolated; off the arc the
/// extension is linear between the endpoint values,
/// w1 + (w2 - w1) (z - z1)/(z2 - z1). An arc covering the whole circle needs no
/// extension and is interpolated everywhere.
inline std::vector<Complex> extend_arc_to_circle(const std::vector<Complex>& arc_points,
                                                 const std::vector<Complex>& arc_values,
                                                 const std::vector<Complex>& circle_grid) {
  if (arc_points.size() != arc_values.size() || arc_points.size() < 2)
    throw ConditionError("extend_arc_to_circle: need at least two matched arc samples");

  // Unwrapped, monotone angles along the sample order.
  const std::size_t M = arc_points.size();
  std::vector<double> phi(M);
  phi[0] = std::arg(arc_points[0]);
  for (std::size_t i = 1; i < M; ++i) {
    double d = std::arg(arc_points[i]) - std::arg(arc_points[i - 1]);
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    phi[i] = phi[i - 1] + d;
  }
  const double span = phi.back() - phi.front();
  if (span == 0.0) throw ConditionError("extend_arc_to_circle: degenerate arc");
  const bool ccw = span > 0.0;
  const bool full_circle = std::abs(span) >= 2.0 * std::numbers::pi - 1e-9;

  auto interp_at = [&](double t) {
    // t lies in [phi.front(), phi.back()] (or reversed); locate and lerp.
    std::size_t lo = 0, hi = M - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      bool left = ccw ? (phi[mid] <= t) : (phi[mid] >= t);
      if (left) lo = mid; else hi = mid;
    }
    double denom = phi[hi] - phi[lo];
    double w = denom == 0.0 ? 0.0 : (t - phi[lo]) / denom;
    return arc_values[lo] * (1.0 - w) + arc_values[hi] * w;
  };

  const Complex z1 = arc_points.front(), z2 = arc_points.back();
  const Complex w1 = arc_values.front(), w2 = arc_values.back();

  std::vector<Complex> out;
  out.reserve(circle_grid.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (const Complex& g : circle_grid) {
    double psi = std::arg(g);
    double t;
    if (ccw) {
      t = phi.front() + std::fmod(psi - phi.front(), two_pi);
      if (t < phi.front()) t += two_pi;
    } else {
      t = phi.front() - std::fmod(phi.front() - psi, two_pi);
      if (t > phi.front()) t -= two_pi;
    }
    bool on_arc = full_circle || (ccw ? t <= phi.back() + 1e-12 : t >= phi.back() - 1e-12);
    if (on_arc) {
      out.push_back(interp_at(std::clamp(t, std::min(phi.front(), phi.back()),
                                         std::max(phi.front(), phi.back()))));
    } else {
      out.push_back(w1 + (w2 - w1) * (g - z1) / (z2 - z1));
    }
  }
  return out;
}

}  // namespace ensteer
