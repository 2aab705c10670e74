#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace ensteer {

using Complex = std::complex<double>;

/// Dense polynomial over C, coefficients in ascending powers.
/// coeffs is never empty; the zero polynomial is {0} with degree 0.
struct ComplexPolynomial {
  std::vector<Complex> coeffs{Complex(0.0, 0.0)};

  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<Complex> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.assign(1, Complex(0.0, 0.0));
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  // Drops trailing exact zeros only; tolerance trimming would change the input horizon.
  void normalize() {
    while (coeffs.size() > 1 && coeffs.back() == Complex(0.0, 0.0)) coeffs.pop_back();
  }

  Complex eval(Complex z) const {
    Complex acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
  }

  Complex operator()(Complex z) const { return eval(z); }
};

inline ComplexPolynomial poly_add(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  std::vector<Complex> c(std::max(a.coeffs.size(), b.coeffs.size()), Complex(0.0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return ComplexPolynomial(std::move(c));
}

inline ComplexPolynomial poly_scale(const ComplexPolynomial& a, Complex s) {
  ComplexPolynomial r = a;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

inline ComplexPolynomial poly_mul(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  std::vector<Complex> c(a.coeffs.size() + b.coeffs.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return ComplexPolynomial(std::move(c));
}

/// outer(inner(z)), expanded in monomials (Horner at the polynomial level).
inline ComplexPolynomial poly_compose(const ComplexPolynomial& outer,
                                      const ComplexPolynomial& inner) {
  ComplexPolynomial acc({outer.coeffs.back()});
  for (std::size_t i = outer.coeffs.size() - 1; i-- > 0;) {
    acc = poly_mul(acc, inner);
    acc.coeffs[0] += outer.coeffs[i];
  }
  return acc;
}

/// p((z - shift) * scale) as a polynomial in z; exact basis change.
inline ComplexPolynomial poly_compose_affine(const ComplexPolynomial& p, Complex shift,
                                             Complex scale) {
  ComplexPolynomial lin({-shift * scale, scale});
  return poly_compose(p, lin);
}

/// Laurent polynomial sum_{k=-n_neg}^{n_pos} c_k z^k.
/// Storage: coeffs[i] is the coefficient of z^(i - n_neg).
struct LaurentPolynomial {
  int n_neg = 0;
  std::vector<Complex> coeffs{Complex(0.0)};

  Complex coeff(int k) const {
    int i = k + n_neg;
    if (i < 0 || i >= static_cast<int>(coeffs.size())) return Complex(0.0);
    return coeffs[static_cast<std::size_t>(i)];
  }

  int min_power() const { return -n_neg; }
  int max_power() const { return static_cast<int>(coeffs.size()) - 1 - n_neg; }

  Complex eval(Complex z) const {
    Complex acc(0.0);
    Complex zn = std::pow(z, min_power());
    for (const auto& c : coeffs) {
      acc += c * zn;
      zn *= z;
    }
    return acc;
  }

  /// Nonnegative-power part as an ordinary polynomial (k >= 0).
  ComplexPolynomial plus_part() const {
    std::vector<Complex> c;
    for (int k = 0; k <= std::max(max_power(), 0); ++k) c.push_back(coeff(k));
    return ComplexPolynomial(std::move(c));
  }

  /// Negative-power part as a polynomial in w = 1/z with zero constant term:
  /// minus_part()(1/z) = sum_{k<0} c_k z^k.
  ComplexPolynomial minus_part() const {
    std::vector<Complex> c{Complex(0.0)};
    for (int k = 1; k <= n_neg; ++k) c.push_back(coeff(-k));
    return ComplexPolynomial(std::move(c));
  }
};

}  // namespace ensteer
