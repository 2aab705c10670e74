#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ensteer/complex_poly.hpp"
#include "ensteer/eigen_decomposition.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

/// A measured certified stage missed its budget (construction bug or bad
/// problem data, never silently tolerated).
struct CertificationError : CapError {
  using CapError::CapError;
};

/// Compact set known through ordered samples of one or more Jordan arcs.
struct SampledCompact {
  std::vector<std::vector<Complex>> arcs;

  static SampledCompact single(std::vector<Complex> pts) {
    SampledCompact k;
    k.arcs.push_back(std::move(pts));
    return k;
  }

  std::vector<Complex> all() const {
    std::vector<Complex> out;
    for (const auto& a : arcs) out.insert(out.end(), a.begin(), a.end());
    return out;
  }

  /// Largest gap between consecutive samples along any arc; the continuum is
  /// assumed within half this distance of the sample cloud.
  double spacing() const {
    double h = 0.0;
    for (const auto& a : arcs)
      for (std::size_t i = 0; i + 1 < a.size(); ++i) h = std::max(h, std::abs(a[i + 1] - a[i]));
    return h;
  }

  double eta() const {
    double e = 0.0;
    for (const auto& a : arcs)
      for (const auto& z : a) e = std::max(e, std::abs(z));
    return e;
  }

  double diameter() const {
    auto pts = all();
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
  }

  double dist(Complex c) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : arcs)
      for (const auto& z : a) d = std::min(d, std::abs(z - c));
    return d;
  }
};

/// Oriented axis-aligned segment of the selection boundary.
struct Segment {
  Complex from, to;
  Complex midpoint(double t) const { return from + (to - from) * t; }
};

struct SegmentSet {
  std::vector<Segment> segments;
  double delta = 0.0;
};

/// Boundary of the union of selected grid boxes: axis-aligned grid of pitch
/// delta (offset half a cell from the sample bounding box so isolated points
/// fall strictly inside cells), boxes kept when they meet the sample cloud
/// dilated by half the sample spacing, edges kept when owned by exactly one
/// selected box, oriented counterclockwise per box.
inline SegmentSet grid_segments(const SampledCompact& K, double omega_margin, double delta) {
  if (!(delta > 0.0)) throw ConditionError("grid_segments: delta must be positive");
  if (!(delta < omega_margin / std::numbers::sqrt2))
    throw ConditionError("grid_segments: need delta < omega_margin / sqrt(2)");
  auto pts = K.all();
  if (pts.empty()) throw ConditionError("grid_segments: empty compact");

  const double dilate = K.spacing() / 2.0;
  double min_x = pts[0].real(), max_x = pts[0].real();
  double min_y = pts[0].imag(), max_y = pts[0].imag();
  for (const auto& z : pts) {
    min_x = std::min(min_x, z.real());
    max_x = std::max(max_x, z.real());
    min_y = std::min(min_y, z.imag());
    max_y = std::max(max_y, z.imag());
  }
  const double ox = min_x - delta / 2.0;
  const double oy = min_y - delta / 2.0;
  const int pad = static_cast<int>(std::ceil(dilate / delta)) + 1;
  const int nx = static_cast<int>(std::ceil((max_x - ox) / delta)) + pad;
  const int ny = static_cast<int>(std::ceil((max_y - oy) / delta)) + pad;

  auto cell_dist = [&](int ix, int iy, const Complex& p) {
    double lx = ox + ix * delta, hx = lx + delta;
    double ly = oy + iy * delta, hy = ly + delta;
    double dx = std::max({0.0, lx - p.real(), p.real() - hx});
    double dy = std::max({0.0, ly - p.imag(), p.imag() - hy});
    return std::hypot(dx, dy);
  };

  std::vector<std::pair<int, int>> selected;
  for (int ix = -pad; ix < nx; ++ix)
    for (int iy = -pad; iy < ny; ++iy) {
      for (const auto& p : pts)
        if (cell_dist(ix, iy, p) <= dilate) {
          selected.emplace_back(ix, iy);
          break;
        }
    }
  if (selected.empty()) throw ConditionError("grid_segments: no box meets the compact");

  // Edge bookkeeping: horizontal edge (ix,iy) is the bottom of cell (ix,iy);
  // vertical edge (ix,iy) is the left side of cell (ix,iy).
  struct EdgeUse {
    int count = 0;
    bool from_below = false;  // horizontal: owned as bottom edge; vertical: owned as left edge
  };
  std::map<std::tuple<char, int, int>, EdgeUse> edges;
  for (auto [ix, iy] : selected) {
    auto touch = [&](char kind, int ex, int ey, bool primary) {
      auto& e = edges[{kind, ex, ey}];
      e.count++;
      if (primary) e.from_below = true;
    };
    touch('H', ix, iy, true);          // bottom
    touch('H', ix, iy + 1, false);     // top (bottom edge of the cell above)
    touch('V', ix, iy, true);          // left
    touch('V', ix + 1, iy, false);     // right (left edge of the cell to the right)
  }

  SegmentSet out;
  out.delta = delta;
  for (const auto& [key, use] : edges) {
    if (use.count != 1) continue;
    auto [kind, ex, ey] = key;
    double x = ox + ex * delta, y = oy + ey * delta;
    if (kind == 'H') {
      // Bottom edge of its box runs left-to-right; a top edge runs right-to-left.
      if (use.from_below)
        out.segments.push_back({Complex(x, y), Complex(x + delta, y)});
      else
        out.segments.push_back({Complex(x + delta, y), Complex(x, y)});
    } else {
      // Left edge runs downward; a right edge runs upward.
      if (use.from_below)
        out.segments.push_back({Complex(x, y + delta), Complex(x, y)});
      else
        out.segments.push_back({Complex(x, y), Complex(x, y + delta)});
    }
  }
  return out;
}

/// Discretized Cauchy integral: sum over poles w of c/(w - z), with the
/// 1/(2 pi i) prefactor folded into the coefficients c.
struct RationalSum {
  std::vector<Complex> w;
  std::vector<Complex> c;
  int n_segments = 0;
  int per_segment = 0;

  Complex eval(Complex z) const {
    Complex acc(0.0);
    for (std::size_t i = 0; i < w.size(); ++i) acc += c[i] / (w[i] - z);
    return acc;
  }
};

/// Midpoint discretization of the boundary integral: each segment is split
/// into M = ceil(N delta^2 L_hat / (2 pi eps_step)) subsegments; the measured
/// deviation from f on the validation samples must stay within eps_step.
inline RationalSum rational_approx(const std::function<Complex(Complex)>& f,
                                   const SegmentSet& segs, double eps_step, double L_hat,
                                   const SampledCompact& K_val, const Caps& caps = {}) {
  if (!(eps_step > 0.0)) throw ConditionError("rational_approx: eps_step must be positive");
  const int N = static_cast<int>(segs.segments.size());
  if (N == 0) throw ConditionError("rational_approx: empty segment set");
  const double need = double(N) * segs.delta * segs.delta * std::max(L_hat, 0.0) /
                      (2.0 * std::numbers::pi * eps_step);
  const long M = std::max(1L, static_cast<long>(std::ceil(need)));
  if (static_cast<long>(N) * M > caps.pole_cap)
    throw CapError("rational_approx: pole cap exceeded (N*M = " + std::to_string(N * M) + ")");

  RationalSum rs;
  rs.n_segments = N;
  rs.per_segment = static_cast<int>(M);
  const Complex fold = 1.0 / (Complex(0.0, 2.0 * std::numbers::pi));
  for (const auto& s : segs.segments) {
    const Complex inc = (s.to - s.from) / static_cast<double>(M);
    for (long l = 0; l < M; ++l) {
      Complex wl = s.from + inc * (static_cast<double>(l) + 0.5);
      rs.w.push_back(wl);
      rs.c.push_back(f(wl) * inc * fold);
    }
  }

  double measured = 0.0;
  for (const auto& z : K_val.all()) measured = std::max(measured, std::abs(f(z) - rs.eval(z)));
  if (measured > eps_step)
    throw CertificationError("rational_approx missed its budget: measured " +
                             std::to_string(measured) + " > " + std::to_string(eps_step));
  return rs;
}

/// Rational function with its only pole at b: sum_q E[q-1] (z-b)^{-q}.
struct ShiftedSum {
  Complex b;
  std::vector<Complex> E;

  Complex eval(Complex z) const {
    Complex inv = 1.0 / (z - b);
    Complex acc(0.0);
    Complex p = inv;
    for (const auto& e : E) {
      acc += e * p;
      p *= inv;
    }
    return acc;
  }
};

struct PoleShiftReport {
  double alpha = 0.0;              // min distance from b to the compact
  std::vector<double> delta_kl;    // per pole
  std::vector<int> degree;         // per pole: one-jump series degree, or max power after chaining
  int chained = 0;                 // poles that needed the hop chain
  double measured = 0.0;
};

namespace detail {

/// One nested hop: re-express coefficients over (z-c)^{-q} in powers of
/// (z-c2)^{-q}, truncating each expansion once its tail bound on the compact
/// falls under tail_slot. alpha2 bounds dist(c2, K) from below. The j-th term
/// of source power q has sup |e_q| C(q-1+j, j) rho^j / alpha2^q on the compact
/// (rho = |c-c2|/alpha2 < 1), so consecutive-term sups scale by
/// rho (q+j)/(j+1); the walk stops when that ratio is below 1 and the
/// geometric tail fits the slot. Terms past power_cap are dropped with their
/// sup bounds accumulated into slop; the caller's measured gate is what
/// ultimately certifies the result.
inline void hop_coeffs(std::vector<Complex>& e, Complex c, Complex c2, double alpha2,
                       double tail_slot, int power_cap, double& slop) {
  const Complex d = c - c2;
  const double rho = std::abs(d) / alpha2;
  if (rho >= 0.95) throw CertificationError("pole push: hop ratio not contractive");
  std::vector<Complex> out(static_cast<std::size_t>(power_cap), Complex(0.0));
  const std::size_t Q = e.size();
  const double slot_q = tail_slot / static_cast<double>(std::max<std::size_t>(Q, 1));
  for (std::size_t qi = 0; qi < Q; ++qi) {
    if (e[qi] == Complex(0.0)) continue;
    const int q = static_cast<int>(qi) + 1;
    Complex term = e[qi];                                // coefficient of (z-c2)^{-(q+j)}
    double sup = std::abs(e[qi]) / std::pow(alpha2, q);  // its sup on the compact
    for (int j = 0;; ++j) {
      const double ratio = rho * double(q + j) / double(j + 1);  // sup_{j+1} / sup_j
      if (q + j > power_cap) {
        // No representable power left: walk the dropped terms until the ratio
        // turns geometric, then close with the geometric tail (rho < 0.95
        // guarantees the walk ends; term ratios decrease in j).
        double s = sup;
        double r = ratio;
        for (int jj = j; r >= 1.0; r = rho * double(q + ++jj) / double(jj + 1)) {
          slop += s;
          s *= r;
        }
        slop += s / (1.0 - r);
        break;
      }
      out[static_cast<std::size_t>(q + j - 1)] += term;
      const double sup_next = sup * ratio;
      if (ratio < 1.0 && sup_next / (1.0 - ratio) <= slot_q) {
        slop += sup_next / (1.0 - ratio);
        break;
      }
      term *= d * (double(q + j) / double(j + 1));
      sup = sup_next;
    }
  }
  e = std::move(out);
}

/// Push the representation sum_q e[q-1] (z-c)^{-q} away from the compact with
/// nested radial hops: each hop moves along the ray from the nearest compact
/// sample through c and is accepted only when the distance grows by at least
/// 0.98 of the hop length. A hop multiplies the sup mass of a power-q term by
/// (dist / (dist2 - t))^q, so near-nested hops are the only certified moves;
/// in particular a pole can never be carried around or across the compact.
/// Distance grows ~25% per hop, keeping the degree spread near its floor
/// (final top power ~ initial spread x dist growth). stop(c, dist) sees each
/// hop's start point (the original position first) and may throw to refuse.
inline Complex escape_pole(std::vector<Complex>& e, Complex c, const SampledCompact& K,
                           const std::function<bool(Complex, double)>& stop, double hop_slot,
                           int power_cap, double& slop, int hop_cap = 64) {
  const double h = K.spacing();
  auto true_dist = [&](Complex z) { return std::max(K.dist(z) - h / 2.0, 1e-300); };
  const std::vector<Complex> samples = K.all();
  for (int hops = 0;; ++hops) {
    const double ac = true_dist(c);
    if (stop(c, ac)) return c;
    if (hops >= hop_cap) throw CapError("pole push: hop cap exceeded");
    Complex near = samples.front();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
      double dp = std::abs(c - p);
      if (dp < best) {
        best = dp;
        near = p;
      }
    }
    const Complex u = best > 0.0 ? (c - near) / best : Complex(1.0, 0.0);
    double t = 0.25 * ac;
    Complex c2;
    double ad = 0.0;
    for (int tries = 0;; ++tries) {
      c2 = c + u * t;
      ad = true_dist(c2);
      if (ad >= ac + 0.98 * t) break;
      if (tries == 8)
        throw CapError(
            "pole push stalled: no nested outward hop exists here (the compact "
            "curves around this pole); use adaptive mode");
      t *= 0.5;
    }
    hop_coeffs(e, c, c2, ad, hop_slot, power_cap, slop);
    c = c2;
  }
}

}  // namespace detail

/// Shift all poles of rs to the single location b. Poles already closer to b
/// than the whole compact (delta_kl <= 0.95 alpha) shift in one truncated
/// geometric jump with the certified degree bound; the rest escape radially
/// away from the compact until b's jump basin admits a nested landing hop.
/// Nested outward hops are the only moves whose mass bound does not grow, so
/// b must lie roughly along the pole's own escape ray; a b that would require
/// carrying the pole around the compact is refused (CertificationError)
/// rather than silently decertified. Measured |rs - shifted| over the compact
/// samples must stay within eps_step.
inline ShiftedSum pole_shift(const RationalSum& rs, const SampledCompact& K, Complex b,
                             double eps_step, const Caps& caps = {},
                             PoleShiftReport* report = nullptr) {
  if (rs.w.empty()) throw ConditionError("pole_shift: empty rational sum");
  const double h = K.spacing();
  const double alpha = std::max(K.dist(b) - h / 2.0, 0.0);
  if (alpha <= 0.0) throw ConditionError("pole_shift: b touches the compact");
  const std::size_t P = rs.w.size();
  const double slot_pole = eps_step / static_cast<double>(P);
  const int power_cap = 256;

  PoleShiftReport rep;
  rep.alpha = alpha;

  ShiftedSum out;
  out.b = b;
  out.E.assign(static_cast<std::size_t>(power_cap), Complex(0.0));

  for (std::size_t i = 0; i < P; ++i) {
    const Complex w = rs.w[i];
    const Complex cf = rs.c[i];
    const double dkl = std::abs(w - b);
    rep.delta_kl.push_back(dkl);

    if (dkl <= 0.95 * alpha && std::abs(cf) > 0.0) {
      // One jump: 1/(w-z) = -sum_{v=0}^{m} (w-b)^v (z-b)^{-(v+1)} + tail,
      // tail bounded by (dkl/alpha)^{m+1} / (alpha - dkl).
      int m = 0;
      if (dkl > 0.0) {
        double x = slot_pole * (alpha - dkl) / std::abs(cf);
        if (x < 1.0) {
          double need = std::ceil(std::log(x) / (std::log(dkl) - std::log(alpha)));
          m = std::max(0, static_cast<int>(need) - 1);
        }
      }
      if (m + 1 > power_cap)
        throw CapError("pole_shift: one-jump degree exceeds the power cap");
      Complex pw(1.0);
      for (int v = 0; v <= m; ++v) {
        out.E[static_cast<std::size_t>(v)] -= cf * pw;
        pw *= (w - b);
      }
      rep.degree.push_back(m);
      continue;
    }
    if (std::abs(cf) == 0.0) {
      rep.degree.push_back(0);
      continue;
    }

    // Chain route: nested radial escape until the landing hop to b is itself
    // nested (|c - b| small against alpha AND alpha - |c - b| dominates the
    // current distance, so the landing contraction ratio stays under control).
    rep.chained++;
    std::vector<Complex> e(1, -cf);  // 1/(w-z) = -(z-w)^{-1}
    double slop = 0.0;
    Complex c = detail::escape_pole(
        e, w, K,
        [&](Complex cc, double ac) {
          if (ac > 1.25 * alpha)
            throw CertificationError(
                "pole_shift: b is not radially reachable from this pole; a "
                "certified chain cannot carry a pole around the compact");
          const double d = std::abs(cc - b);
          return d <= 0.7 * alpha && alpha - d >= 0.9 * ac;
        },
        slot_pole / 64.0, power_cap, slop);
    detail::hop_coeffs(e, c, b, alpha, slot_pole / 2.0, power_cap, slop);

    int top = 0;
    for (int q = 0; q < power_cap; ++q)
      if (e[static_cast<std::size_t>(q)] != Complex(0.0)) top = q + 1;
    rep.degree.push_back(top > 0 ? top - 1 : 0);
    for (int q = 0; q < power_cap; ++q) out.E[static_cast<std::size_t>(q)] += e[static_cast<std::size_t>(q)];
  }

  while (out.E.size() > 1 && out.E.back() == Complex(0.0)) out.E.pop_back();

  double measured = 0.0;
  for (const auto& z : K.all()) measured = std::max(measured, std::abs(rs.eval(z) - out.eval(z)));
  rep.measured = measured;
  if (report) *report = rep;
  if (measured > eps_step)
    throw CertificationError("pole_shift missed its budget: measured " + std::to_string(measured) +
                             " > " + std::to_string(eps_step));
  return out;
}

struct PolynomializeReport {
  std::vector<int> m_v;  // Taylor truncation degree per power of (z-b)^{-1}
  double measured = 0.0;
};

/// Taylor expansion about 0 of each (z-b)^{-(v+1)} with the closed-form
/// coefficients a_mu = C(mu+v, v) (-1)^{v+1} / b^{mu+v+1}; truncation degrees
/// come from the Cauchy-estimate tail bound on |xi| = r = |b|/2 (valid since
/// the compact sits inside |z| < r). Measured |shifted - p| must stay within
/// eps_step on the compact samples.
inline ComplexPolynomial polynomialize(const ShiftedSum& shifted, const SampledCompact& K,
                                       double eps_step, const Caps& caps = {},
                                       PolynomializeReport* report = nullptr) {
  const double eta = K.eta() + K.spacing() / 2.0;
  const double r = std::abs(shifted.b) / 2.0;
  if (!(eta < r))
    throw ConditionError("polynomialize: compact not inside |z| < |b|/2; move b outward");
  const double ratio = eta / r;

  int live = 0;
  for (const auto& e : shifted.E)
    if (e != Complex(0.0)) live++;
  if (live == 0) return ComplexPolynomial();
  const double slot = eps_step / static_cast<double>(live);

  const double lb = std::log(std::abs(shifted.b));
  const double ab = std::arg(shifted.b);

  PolynomializeReport rep;
  std::vector<Complex> coeffs(1, Complex(0.0));
  for (std::size_t qi = 0; qi < shifted.E.size(); ++qi) {
    const Complex Eq = shifted.E[qi];
    if (Eq == Complex(0.0)) continue;
    const int v = static_cast<int>(qi);
    // |E| (eta/r)^{m+1} / (r^{v+1} (1 - eta/r)) <= slot
    double x = slot * std::pow(r, v + 1) * (1.0 - ratio) / std::abs(Eq);
    int m = 0;
    if (x < 1.0) m = std::max(0, static_cast<int>(std::ceil(std::log(x) / std::log(ratio))) - 1);
    if (m > caps.degree_cap) throw CapError("polynomialize: degree cap exceeded");
    rep.m_v.push_back(m);
    if (static_cast<int>(coeffs.size()) < m + 1) coeffs.resize(static_cast<std::size_t>(m) + 1, Complex(0.0));
    const double sign_phase = (v % 2 == 0) ? std::numbers::pi : 0.0;  // (-1)^{v+1}
    for (int mu = 0; mu <= m; ++mu) {
      double lmag = std::lgamma(double(mu + v) + 1.0) - std::lgamma(double(v) + 1.0) -
                    std::lgamma(double(mu) + 1.0) - (mu + v + 1) * lb;
      double phase = sign_phase - (mu + v + 1) * ab;
      coeffs[static_cast<std::size_t>(mu)] += Eq * std::polar(std::exp(lmag), phase);
    }
  }

  ComplexPolynomial p(std::move(coeffs));
  double measured = 0.0;
  for (const auto& z : K.all()) measured = std::max(measured, std::abs(shifted.eval(z) - p.eval(z)));
  rep.measured = measured;
  if (report) *report = rep;
  if (measured > eps_step)
    throw CertificationError("polynomialize missed its budget: measured " +
                             std::to_string(measured) + " > " + std::to_string(eps_step));
  return p;
}

/// Least-squares fits of escalating degree in a centered, scaled basis; the
/// first degree whose measured sup error on the validation samples meets eps
/// wins. The measurement evaluates the recomposed monomial polynomial, so
/// basis-change round-off counts against the fit.
struct AdaptiveFit {
  ComplexPolynomial p;
  int degree = 0;
  double measured = 0.0;
};

inline AdaptiveFit adaptive_fit(const std::vector<Complex>& build_z,
                                const std::vector<Complex>& build_y,
                                const std::vector<Complex>& val_z,
                                const std::vector<Complex>& val_y, double eps,
                                const Caps& caps = {}) {
  if (build_z.size() != build_y.size() || build_z.empty())
    throw ConditionError("adaptive_fit: mismatched build samples");
  if (val_z.size() != val_y.size() || val_z.empty())
    throw ConditionError("adaptive_fit: mismatched validation samples");

  Complex center(0.0);
  for (const auto& z : build_z) center += z;
  center /= static_cast<double>(build_z.size());
  double scale = 0.0;
  for (const auto& z : build_z) scale = std::max(scale, std::abs(z - center));
  if (scale == 0.0) scale = 1.0;

  const int max_d = std::min<int>(caps.adaptive_degree_cap, static_cast<int>(build_z.size()) - 1);
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d <= max_d; ++d) {
    Eigen::MatrixXcd V(build_z.size(), d + 1);
    for (std::size_t i = 0; i < build_z.size(); ++i) {
      Complex u = (build_z[i] - center) / scale;
      Complex p(1.0);
      for (int j = 0; j <= d; ++j) {
        V(static_cast<Eigen::Index>(i), j) = p;
        p *= u;
      }
    }
    Eigen::VectorXcd y(build_y.size());
    for (std::size_t i = 0; i < build_y.size(); ++i) y(static_cast<Eigen::Index>(i)) = build_y[i];
    Eigen::VectorXcd a = V.colPivHouseholderQr().solve(y);

    ComplexPolynomial pu(std::vector<Complex>(a.data(), a.data() + a.size()));
    ComplexPolynomial p = poly_compose_affine(pu, center, Complex(1.0 / scale, 0.0));
    p.normalize();

    double measured = 0.0;
    for (std::size_t i = 0; i < val_z.size(); ++i)
      measured = std::max(measured, std::abs(p.eval(val_z[i]) - val_y[i]));
    best = std::min(best, measured);
    if (measured <= eps) return {std::move(p), d, measured};
  }
  throw CapError("adaptive_fit: degree escalation cap reached (best measured " +
                 std::to_string(best) + " > eps " + std::to_string(eps) + ")");
}

struct RungeStage {
  std::string name;
  double allotted = 0.0;
  double measured = 0.0;
};

struct RungeResult {
  ComplexPolynomial p;
  Mode mode = Mode::Adaptive;
  std::vector<RungeStage> stages;
  double measured_total = 0.0;
  int adaptive_degree = -1;
  SegmentSet segments;
  RationalSum rational;
  std::vector<ShiftedSum> shifted;
  PoleShiftReport shift_report;
  PolynomializeReport poly_report;
};

/// End-to-end polynomial approximation of a holomorphic f on the sampled
/// compact. Certified mode budgets eps/3 per stage (boundary discretization,
/// pole relocation, Taylor polynomialization) and measures each stage;
/// adaptive mode is a least-squares escalation. omega_margin is the
/// caller-declared distance from the compact to the boundary of f's holomorphy
/// region.
inline RungeResult runge_approx(const std::function<Complex(Complex)>& f,
                                const SampledCompact& K_build, const SampledCompact& K_val,
                                double eps, double omega_margin, Mode mode,
                                const Caps& caps = {}) {
  if (!(eps > 0.0)) throw ConditionError("runge_approx: eps must be positive");
  RungeResult res;
  res.mode = mode;

  if (mode == Mode::Adaptive) {
    std::vector<Complex> bz = K_build.all(), by, vz = K_val.all(), vy;
    for (const auto& z : bz) by.push_back(f(z));
    for (const auto& z : vz) vy.push_back(f(z));
    AdaptiveFit fit = adaptive_fit(bz, by, vz, vy, eps, caps);
    res.p = fit.p;
    res.adaptive_degree = fit.degree;
    res.measured_total = fit.measured;
    res.stages.push_back({"adaptive_fit", eps, fit.measured});
    return res;
  }

  if (!(omega_margin > 0.0))
    throw ConditionError("runge_approx: certified mode needs a positive holomorphy margin");
  const double eps_step = eps / 3.0;

  const double diam = K_build.diameter();
  double delta = 0.9 * omega_margin / std::numbers::sqrt2;
  if (diam > 0.0) delta = std::min(delta, diam / 4.0);
  res.segments = grid_segments(K_build, omega_margin, delta);

  // Lipschitz scale of xi -> f(xi)/(xi - z) over the segments, sup over z.
  double L_hat = 0.0;
  {
    const int S = 9;
    std::vector<Complex> xs(S), ys(S);
    for (const auto& z : K_val.all()) {
      for (const auto& seg : res.segments.segments) {
        for (int j = 0; j < S; ++j) {
          xs[static_cast<std::size_t>(j)] = seg.midpoint((j + 0.5) / S);
          ys[static_cast<std::size_t>(j)] =
              f(xs[static_cast<std::size_t>(j)]) / (xs[static_cast<std::size_t>(j)] - z);
        }
        L_hat = std::max(L_hat, lipschitz_estimate(xs, ys).L);
      }
    }
  }

  res.rational = rational_approx(f, res.segments, eps_step, L_hat, K_val, caps);
  double m1 = 0.0;
  for (const auto& z : K_val.all()) m1 = std::max(m1, std::abs(f(z) - res.rational.eval(z)));
  res.stages.push_back({"rational_approx", eps_step, m1});

  // Stage 2: pole relocation. Every pole escapes outward along its own ray
  // from the compact until it reaches the Taylor range |c| >= 3 eta. Nested
  // radial hops are the only certified moves (any other hop multiplies a
  // power-q term's sup mass by an unbounded factor), so poles are never merged
  // to one shared location; stage 3 expands each final center separately.
  const double eta = K_build.eta() + K_build.spacing() / 2.0;
  const double R_free = 3.0 * std::max(eta, 1e-12);
  const std::size_t P = res.rational.w.size();
  const double slot_pole = eps_step / static_cast<double>(std::max<std::size_t>(P, 1));
  const int power_cap = 256;
  res.shift_report = PoleShiftReport{};
  res.shift_report.alpha = std::numeric_limits<double>::infinity();
  const double h_val = K_val.spacing();
  for (std::size_t i = 0; i < P; ++i) {
    const Complex w = res.rational.w[i];
    const Complex cf = res.rational.c[i];
    res.shift_report.delta_kl.push_back(0.0);
    res.shift_report.degree.push_back(0);
    if (cf == Complex(0.0)) continue;
    std::vector<Complex> e(1, -cf);  // 1/(w-z) = -(z-w)^{-1}
    Complex c = w;
    if (std::abs(w) < R_free) {
      res.shift_report.chained++;
      double slop = 0.0;
      c = detail::escape_pole(
          e, w, K_val, [&](Complex cc, double) { return std::abs(cc) >= R_free; },
          slot_pole / 32.0, power_cap, slop);
    }
    while (e.size() > 1 && e.back() == Complex(0.0)) e.pop_back();
    res.shift_report.delta_kl.back() = std::abs(c - w);
    res.shift_report.degree.back() = static_cast<int>(e.size()) - 1;
    res.shift_report.alpha =
        std::min(res.shift_report.alpha, std::max(K_val.dist(c) - h_val / 2.0, 0.0));
    res.shifted.push_back(ShiftedSum{c, std::move(e)});
  }
  double m2 = 0.0;
  for (const auto& z : K_val.all()) {
    Complex s(0.0);
    for (const auto& sh : res.shifted) s += sh.eval(z);
    m2 = std::max(m2, std::abs(res.rational.eval(z) - s));
  }
  res.shift_report.measured = m2;
  res.stages.push_back({"pole_relocation", eps_step, m2});
  if (m2 > eps_step)
    throw CertificationError("pole relocation missed its budget: measured " +
                             std::to_string(m2) + " > " + std::to_string(eps_step));

  // Stage 3: per-center Taylor replacement, the stage budget split evenly
  // across the relocated centers.
  res.poly_report = PolynomializeReport{};
  const double slot_center =
      eps_step / static_cast<double>(std::max<std::size_t>(res.shifted.size(), 1));
  for (const auto& sh : res.shifted) {
    PolynomializeReport pr;
    res.p = poly_add(res.p, polynomialize(sh, K_val, slot_center, caps, &pr));
    res.poly_report.m_v.insert(res.poly_report.m_v.end(), pr.m_v.begin(), pr.m_v.end());
  }
  double m3 = 0.0;
  for (const auto& z : K_val.all()) {
    Complex s(0.0);
    for (const auto& sh : res.shifted) s += sh.eval(z);
    m3 = std::max(m3, std::abs(s - res.p.eval(z)));
  }
  res.poly_report.measured = m3;
  res.stages.push_back({"polynomial_replacement", eps_step, m3});
  if (m3 > eps_step)
    throw CertificationError("polynomial replacement missed its budget: measured " +
                             std::to_string(m3) + " > " + std::to_string(eps_step));

  double total = 0.0;
  for (const auto& z : K_val.all()) total = std::max(total, std::abs(f(z) - res.p.eval(z)));
  res.measured_total = total;
  if (total > eps)
    throw CertificationError("runge_approx: total measured error " + std::to_string(total) +
                             " exceeds eps " + std::to_string(eps));
  return res;
}

/// Indicator polynomials for pairwise-disjoint sampled sets: q_k is 1 on its
/// own set and 0 on the others within eps_k, built on tubes of radius
/// d_min / 4 around the sets. A single set short-circuits to the constant 1.
struct IndicatorResult {
  std::vector<ComplexPolynomial> q;
  std::vector<double> measured;
  std::vector<int> degrees;
};

inline IndicatorResult indicator_polys(const std::vector<std::vector<Complex>>& sets_build,
                                       const std::vector<std::vector<Complex>>& sets_val,
                                       const std::vector<double>& eps_k, Mode mode,
                                       const Caps& caps = {}) {
  const std::size_t n = sets_build.size();
  if (n == 0 || sets_val.size() != n || eps_k.size() != n)
    throw ConditionError("indicator_polys: mismatched inputs");
  IndicatorResult out;
  if (n == 1) {
    out.q.push_back(ComplexPolynomial({Complex(1.0)}));
    out.measured.push_back(0.0);
    out.degrees.push_back(0);
    return out;
  }

  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (const auto& zi : sets_build[i])
        for (const auto& zj : sets_build[j]) d_min = std::min(d_min, std::abs(zi - zj));
  if (!(d_min > 0.0))
    throw ConditionError("indicator_polys: sets overlap; indicator tubes collapse");

  SampledCompact Kb, Kv;
  Kb.arcs = sets_build;
  Kv.arcs = sets_val;

  auto nearest_set = [&](Complex z) {
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& p : sets_build[k]) {
        double d = std::abs(p - z);
        if (d < best) {
          best = d;
          arg = k;
        }
      }
    return arg;
  };

  for (std::size_t k = 0; k < n; ++k) {
    auto h_k = [&, k](Complex z) { return Complex(nearest_set(z) == k ? 1.0 : 0.0); };
    RungeResult r = runge_approx(h_k, Kb, Kv, eps_k[k], d_min / 4.0, mode, caps);
    out.q.push_back(r.p);
    out.measured.push_back(r.measured_total);
    out.degrees.push_back(r.p.degree());
  }
  return out;
}

}  // namespace ensteer
