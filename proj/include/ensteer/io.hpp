#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../../vendor/json.hpp"
#include "ensteer/complex_poly.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/report.hpp"
#include "ensteer/types.hpp"

namespace ensteer {

namespace io_detail {

using nlohmann::json;

inline Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json emit_complex(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace io_detail

/// Polynomial-in-theta entry: value(theta) by Horner on the coefficient list.
inline Complex eval_theta_poly(const std::vector<Complex>& coeffs, Complex theta) {
  if (coeffs.empty()) return Complex(0.0);
  Complex acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * theta + coeffs[i];
  return acc;
}

/// Parsed, re-instantiable system specification. Polynomial entries can be
/// evaluated on any grid (enabling --grid overrides and refined validation
/// grids); sampled tables are tied to the declared grid.
struct SystemSpecModel {
  int n = 0, m = 0;
  bool continuous = false;

  bool param_interval = false;
  double pa = 0.0, pb = 0.0;
  int psamples = 0;
  std::vector<Complex> plist;

  bool entries_poly = false;  // both A and B given as theta-polynomials
  std::vector<std::vector<std::vector<Complex>>> A_poly, B_poly;  // [row][col][coeff]
  std::vector<Matrix> A_samples, B_samples;

  ParameterGrid grid(int samples_override = 0) const {
    if (param_interval) {
      int s = samples_override > 0 ? samples_override : psamples;
      return ParameterGrid::interval(pa, pb, s);
    }
    if (samples_override > 0)
      throw ParseError("--grid can only override an interval-kind parameter specification");
    return ParameterGrid(plist);
  }

  bool evaluable() const { return entries_poly; }

  EnsembleSystem instantiate(const ParameterGrid& g) const {
    EnsembleSystem sys;
    sys.n = n;
    sys.m = m;
    sys.grid = g;
    if (entries_poly) {
      for (Complex th : g.theta) {
        Matrix A(n, n), B(n, m);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) A(i, j) = eval_theta_poly(A_poly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], th);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < m; ++j) B(i, j) = eval_theta_poly(B_poly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], th);
        sys.A.push_back(std::move(A));
        sys.B.push_back(std::move(B));
      }
    } else {
      if (g.size() != A_samples.size())
        throw ParseError("sampled entries cannot be re-gridded: grid size differs from the table");
      sys.A = A_samples;
      sys.B = B_samples;
    }
    sys.validate();
    return sys;
  }
};

inline SystemSpecModel parse_system_spec(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("system spec: ") + e.what());
  }
  SystemSpecModel s;
  try {
    s.n = j.at("n").get<int>();
    s.m = j.at("m").get<int>();
    if (s.n < 1 || s.m < 1) throw ParseError("system spec: n and m must be positive");
    std::string time = j.value("time", std::string("discrete"));
    if (time != "discrete" && time != "continuous")
      throw ParseError("system spec: time must be \"discrete\" or \"continuous\"");
    s.continuous = (time == "continuous");

    const json& par = j.at("parameter");
    std::string kind = par.at("kind").get<std::string>();
    if (kind == "interval") {
      s.param_interval = true;
      s.pa = par.at("a").get<double>();
      s.pb = par.at("b").get<double>();
      s.psamples = par.at("samples").get<int>();
      if (s.psamples < 1) throw ParseError("system spec: samples must be >= 1");
      if (!(s.pb > s.pa)) throw ParseError("system spec: interval needs b > a");
    } else if (kind == "list") {
      for (const auto& v : par.at("values"))
        s.plist.push_back(io_detail::parse_complex(v, "parameter values"));
      if (s.plist.empty()) throw ParseError("system spec: empty parameter list");
    } else {
      throw ParseError("system spec: parameter.kind must be \"interval\" or \"list\"");
    }

    auto parse_entries = [&](const json& e, int rows, int cols, const std::string& name,
                             std::vector<std::vector<std::vector<Complex>>>& poly,
                             std::vector<Matrix>& samples, bool& is_poly) {
      std::string ekind = e.at("kind").get<std::string>();
      if (ekind == "poly") {
        is_poly = true;
        const json& ent = e.at("entries");
        if (static_cast<int>(ent.size()) != rows) throw ParseError(name + ": wrong row count");
        for (const auto& row : ent) {
          if (static_cast<int>(row.size()) != cols) throw ParseError(name + ": wrong column count");
          std::vector<std::vector<Complex>> r;
          for (const auto& cell : row) {
            std::vector<Complex> coeffs;
            for (const auto& c : cell) coeffs.push_back(io_detail::parse_complex(c, name));
            if (coeffs.empty()) coeffs.push_back(Complex(0.0));
            r.push_back(std::move(coeffs));
          }
          poly.push_back(std::move(r));
        }
      } else if (ekind == "samples") {
        is_poly = false;
        std::size_t M = s.param_interval ? static_cast<std::size_t>(s.psamples) : s.plist.size();
        const json& vals = e.at("values");
        if (vals.size() != M) throw ParseError(name + ": sample count does not match the grid");
        for (const auto& tab : vals) {
          if (static_cast<int>(tab.size()) != rows) throw ParseError(name + ": wrong row count");
          Matrix Mx(rows, cols);
          for (int i = 0; i < rows; ++i) {
            if (static_cast<int>(tab[static_cast<std::size_t>(i)].size()) != cols)
              throw ParseError(name + ": wrong column count");
            for (int c = 0; c < cols; ++c)
              Mx(i, c) = io_detail::parse_complex(tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], name);
          }
          samples.push_back(std::move(Mx));
        }
      } else {
        throw ParseError(name + ": kind must be \"poly\" or \"samples\"");
      }
    };

    bool a_poly = false, b_poly = false;
    parse_entries(j.at("A"), s.n, s.n, "A", s.A_poly, s.A_samples, a_poly);
    parse_entries(j.at("B"), s.n, s.m, "B", s.B_poly, s.B_samples, b_poly);
    if (a_poly != b_poly)
      throw ParseError("system spec: A and B must both be \"poly\" or both be \"samples\"");
    s.entries_poly = a_poly;
  } catch (const json::exception& e) {
    throw ParseError(std::string("system spec: ") + e.what());
  }
  return s;
}

/// Parsed target specification (polynomial components or per-sample tables).
struct TargetSpecModel {
  int n = 0;
  bool entries_poly = false;
  std::vector<std::vector<Complex>> poly_coeffs;  // [component][coeff]
  std::vector<Vector> sample_values;              // [sample]

  bool evaluable() const { return entries_poly; }

  TargetFamily instantiate(const ParameterGrid& g) const {
    TargetFamily t;
    if (entries_poly) {
      for (Complex th : g.theta) {
        Vector v(n);
        for (int k = 0; k < n; ++k) v(k) = eval_theta_poly(poly_coeffs[static_cast<std::size_t>(k)], th);
        t.f.push_back(std::move(v));
      }
    } else {
      if (g.size() != sample_values.size())
        throw ParseError("sampled target cannot be re-gridded: grid size differs from the table");
      t.f = sample_values;
    }
    return t;
  }
};

inline TargetSpecModel parse_target_spec(const std::string& text, int n) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("target spec: ") + e.what());
  }
  TargetSpecModel t;
  t.n = n;
  try {
    const json& f = j.at("f");
    std::string kind = f.at("kind").get<std::string>();
    if (kind == "poly") {
      t.entries_poly = true;
      const json& ent = f.at("entries");
      if (static_cast<int>(ent.size()) != n) throw ParseError("target: needs n component entries");
      for (const auto& cell : ent) {
        std::vector<Complex> coeffs;
        for (const auto& c : cell) coeffs.push_back(io_detail::parse_complex(c, "target"));
        if (coeffs.empty()) coeffs.push_back(Complex(0.0));
        t.poly_coeffs.push_back(std::move(coeffs));
      }
    } else if (kind == "samples") {
      t.entries_poly = false;
      for (const auto& row : f.at("values")) {
        if (static_cast<int>(row.size()) != n)
          throw ParseError("target: each sample needs n components");
        Vector v(n);
        for (int k = 0; k < n; ++k) v(k) = io_detail::parse_complex(row[static_cast<std::size_t>(k)], "target");
        t.sample_values.push_back(std::move(v));
      }
      if (t.sample_values.empty()) throw ParseError("target: empty sample table");
    } else {
      throw ParseError("target: kind must be \"poly\" or \"samples\"");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("target spec: ") + e.what());
  }
  return t;
}

/// Input CSV, discrete: header "t,re,im" then one row per step.
inline std::string emit_input_csv(const InputSequence& u) {
  std::ostringstream os;
  os << "t,re,im\n";
  for (std::size_t t = 0; t < u.values.size(); ++t)
    os << t << "," << io_detail::fmt17(u.values[t].real()) << ","
       << io_detail::fmt17(u.values[t].imag()) << "\n";
  return os.str();
}

/// Input CSV, piecewise constant: "tau=<value>" line, then "l,re,im" rows.
inline std::string emit_input_csv(const PiecewiseConstantInput& u) {
  std::ostringstream os;
  os << "tau=" << io_detail::fmt17(u.tau) << "\n";
  os << "l,re,im\n";
  for (std::size_t l = 0; l < u.values.size(); ++l)
    os << l << "," << io_detail::fmt17(u.values[l].real()) << ","
       << io_detail::fmt17(u.values[l].imag()) << "\n";
  return os.str();
}

struct ParsedInput {
  bool piecewise_constant = false;
  InputSequence discrete;
  PiecewiseConstantInput pwc;
};

inline ParsedInput parse_input_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("input file: empty");
  ParsedInput out;
  std::size_t expect_index = 0;
  auto parse_rows = [&](std::vector<Complex>& dst) {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::size_t c1 = line.find(','), c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw ParseError("input file: rows are index,re,im");
      try {
        std::size_t idx = std::stoul(line.substr(0, c1));
        double re = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        double im = std::stod(line.substr(c2 + 1));
        if (idx != expect_index) throw ParseError("input file: indices must be 0,1,2,...");
        ++expect_index;
        dst.emplace_back(re, im);
      } catch (const std::invalid_argument&) {
        throw ParseError("input file: malformed number in row '" + line + "'");
      } catch (const std::out_of_range&) {
        throw ParseError("input file: number out of range in row '" + line + "'");
      }
    }
    if (dst.empty()) throw ParseError("input file: no rows");
  };

  if (line.rfind("tau=", 0) == 0) {
    out.piecewise_constant = true;
    try {
      out.pwc.tau = std::stod(line.substr(4));
    } catch (...) {
      throw ParseError("input file: malformed tau line");
    }
    if (!(out.pwc.tau > 0.0)) throw ParseError("input file: tau must be positive");
    if (!std::getline(is, line) || line != "l,re,im")
      throw ParseError("input file: expected header l,re,im after the tau line");
    parse_rows(out.pwc.values);
  } else if (line == "t,re,im") {
    parse_rows(out.discrete.values);
  } else {
    throw ParseError("input file: unknown header '" + line + "'");
  }
  return out;
}

/// Report serialization.
inline std::string emit_report_json(const SynthesisReport& r) {
  using nlohmann::json;
  json j;
  j["method"] = r.method;
  j["mode"] = (r.mode == Mode::Certified) ? "certified" : "adaptive";
  j["eps"] = r.eps;
  j["horizon"] = r.horizon;
  if (r.tau > 0.0) j["tau"] = r.tau;
  j["achieved_sup_error"] = r.achieved_sup_error;
  j["within_tolerance"] = r.within_tolerance;
  j["degrees"] = r.degrees;
  j["budget"] = json::array();
  for (const auto& b : r.budget)
    j["budget"].push_back({{"name", b.name}, {"allotted", b.allotted}, {"measured", b.measured}});
  return j.dump(2) + "\n";
}

/// Error profile CSV: per-sample Euclidean error and the closing sup line.
inline std::string emit_error_profile_csv(const StateFamily& x, const TargetFamily& f) {
  if (x.samples() != f.samples()) throw ConditionError("error profile: sample counts differ");
  std::ostringstream os;
  os << "theta_index,err\n";
  double sup = 0.0;
  for (std::size_t i = 0; i < x.samples(); ++i) {
    double e = (x.x[i] - f.f[i]).norm();
    sup = std::max(sup, e);
    os << i << "," << io_detail::fmt17(e) << "\n";
  }
  os << "sup_error," << io_detail::fmt17(sup) << "\n";
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

}  // namespace ensteer
