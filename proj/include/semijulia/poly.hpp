#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semijulia/rng.hpp"
#include "semijulia/sphere.hpp"

// Complex polynomials: parsing, evaluation, composition, escape radius, and
// full preimage sets via Aberth-Ehrlich simultaneous root finding. Preimages
// are the backward-orbit primitive for every cloud engine, so the solver is
// deterministic and allocation-light.

namespace semijulia {

using Complex = std::complex<double>;
using ComplexL = std::complex<long double>;

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct ConvergenceError : std::runtime_error {
  double best_residual;
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), best_residual(residual) {}
};

class Polynomial {
 public:
  // Coefficients highest degree first; leading zeros are stripped.
  explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == Complex(0.0, 0.0)) ++lead;
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
    if (coeffs_.empty()) throw std::invalid_argument("Polynomial: zero polynomial");
    for (const auto& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument("Polynomial: non-finite coefficient");
      }
    }
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex leading() const { return coeffs_.front(); }

  Complex coeff_of_power(int power) const {
    if (power < 0 || power > degree()) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(degree() - power)];
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<Complex> coeffs_;
};

// Order-sensitive hash of the exact coefficient bit patterns.
inline std::uint64_t poly_hash(const Polynomial& p) {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (const auto& c : p.coeffs()) {
    std::uint64_t re, im;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&re, &c, sizeof re);
    std::memcpy(&im, reinterpret_cast<const char*>(&c) + sizeof(double), sizeof im);
    h = mix64(h, re, im);
  }
  return h;
}

// max(1, largest |coeff|); the reference scale for residual tolerances.
inline double coefficient_scale(const Polynomial& p) {
  double s = 1.0;
  for (const auto& c : p.coeffs()) s = std::max(s, std::abs(c));
  return s;
}

inline Complex eval(const Polynomial& p, Complex z) {
  Complex acc = p.coeffs().front();
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) acc = acc * z + p.coeffs()[i];
  return acc;
}

inline ComplexL eval_ld(const Polynomial& p, ComplexL z) {
  ComplexL acc(p.coeffs().front().real(), p.coeffs().front().imag());
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) {
    acc = acc * z + ComplexL(p.coeffs()[i].real(), p.coeffs()[i].imag());
  }
  return acc;
}

// Polynomials fix infinity (degree >= 1).
inline SpherePoint eval(const Polynomial& p, const SpherePoint& z) {
  if (z.is_infinity()) {
    if (p.degree() >= 1) return SpherePoint::infinity();
    return SpherePoint(p.leading().real(), p.leading().imag());
  }
  const Complex w = eval(p, z.value());
  if (std::isnan(w.real()) || std::isnan(w.imag()) || !std::isfinite(std::abs(w))) {
    return SpherePoint::infinity();
  }
  return SpherePoint(w.real(), w.imag());
}

inline Polynomial derivative(const Polynomial& p) {
  const int k = p.degree();
  if (k == 0) return Polynomial({Complex(0.0, 0.0), Complex(0.0, 0.0)});  // never used
  std::vector<Complex> d(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    d[static_cast<std::size_t>(i)] = p.coeffs()[static_cast<std::size_t>(i)] *
                                     static_cast<double>(k - i);
  }
  return Polynomial(std::move(d));
}

inline Polynomial compose(const Polynomial& p, const Polynomial& q) {
  // Horner in q: result = (((a0) q + a1) q + a2) ...
  std::vector<Complex> acc{p.coeffs().front()};
  auto mul = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> r(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) {
    acc = mul(acc, q.coeffs());
    acc.back() += p.coeffs()[i];
  }
  return Polynomial(std::move(acc));
}

// R = max(1, (2 + sum |a_i|) / |a_k|): |z| >= R implies |p(z)| >= 2|z|, so
// the orbit at least doubles once past R.
inline double escape_radius(const Polynomial& p) {
  if (p.degree() < 2) throw std::invalid_argument("escape_radius: degree < 2");
  double s = 2.0;
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) s += std::abs(p.coeffs()[i]);
  return std::max(1.0, s / std::abs(p.leading()));
}

struct PreimageSet {
  std::vector<SpherePoint> points;  // multiset: size equals the degree
  double residual = 0.0;            // max |p(root) - w| over returned roots
};

// Deterministic Aberth-Ehrlich solver for p(z) = w with Newton polishing.
// Reusable across many right-hand sides; the orbit engines keep one per
// generator (copy per worker thread).
class RootSolver {
 public:
  explicit RootSolver(const Polynomial& p)
      : c_(p.coeffs()), deg_(p.degree()), scale_(coefficient_scale(p)) {
    if (deg_ < 1) throw std::invalid_argument("RootSolver: degree < 1");
    cl_.reserve(c_.size());
    for (const auto& v : c_) cl_.emplace_back(v.real(), v.imag());
    q_.resize(c_.size());
    z_.assign(static_cast<std::size_t>(deg_), Complex(0.0, 0.0));
  }

  int degree() const { return deg_; }
  double last_residual() const { return residual_; }

  // Roots of p(z) = w, with multiplicity; out is resized to degree().
  // Throws ConvergenceError if the residual target cannot be met.
  void solve(Complex w, std::vector<Complex>& out) {
    out.resize(static_cast<std::size_t>(deg_));
    if (deg_ == 1) {
      out[0] = (w - c_[1]) / c_[0];
      residual_ = static_cast<double>(residual_ld(ComplexL(w.real(), w.imag()),
                                                  out.data(), 1));
      return;
    }
    const double tol = 1e-10 * std::max({1.0, std::abs(w), scale_});
    double best = HUGE_VAL;
    for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
      aberth(w, attempt, attempt == 0 ? 80 : 200);
      polish();
      cluster();
      const double res =
          static_cast<double>(residual_ld(ComplexL(w.real(), w.imag()), z_.data(),
                                          static_cast<std::size_t>(deg_)));
      if (res < best) {
        best = res;
        std::copy(z_.begin(), z_.end(), out.begin());
      }
      if (best <= tol) {
        residual_ = best;
        return;
      }
    }
    throw ConvergenceError("root iteration did not converge", best);
  }

  // Double-precision solve plus long-double Newton polishing against a
  // long-double right-hand side. Used on orbit paths where forward letters
  // amplify any error injected by backward steps.
  void solve_ld(ComplexL w, std::vector<ComplexL>& out) {
    solve(Complex(static_cast<double>(w.real()), static_cast<double>(w.imag())),
          tmp_);
    out.resize(static_cast<std::size_t>(deg_));
    for (int i = 0; i < deg_; ++i) {
      ComplexL x(tmp_[static_cast<std::size_t>(i)].real(),
                 tmp_[static_cast<std::size_t>(i)].imag());
      for (int step = 0; step < 2; ++step) {
        ComplexL f, df;
        horner_ld(x, f, df);
        f -= w;
        if (df == ComplexL(0.0L, 0.0L)) break;
        x -= f / df;
      }
      out[static_cast<std::size_t>(i)] = x;
    }
  }

 private:
  void aberth(Complex w, std::uint64_t salt, int max_iter) {
    q_ = c_;
    q_.back() -= w;
    double radius = 0.0;  // Cauchy bound on |roots|
    for (std::size_t i = 1; i < q_.size(); ++i) {
      radius = std::max(radius, std::abs(q_[i] / q_[0]));
    }
    radius = (1.0 + radius) * (1.0 + 0.35 * static_cast<double>(salt));
    // Perturbed initial circle; the fixed phase breaks axis symmetry and the
    // per-index jitter breaks any residual ties.
    const double phase0 = 0.40275439 + 0.31 * static_cast<double>(salt);
    for (int i = 0; i < deg_; ++i) {
      const double jitter =
          unit_double(mix64(0x0ABE27ULL, salt, static_cast<std::uint64_t>(i))) - 0.5;
      const double ang =
          2.0 * M_PI * ((i + 0.5 + 0.35 * jitter) / deg_) + phase0;
      z_[static_cast<std::size_t>(i)] = radius * Complex(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < max_iter; ++it) {
      bool converged = true;
      for (int i = 0; i < deg_; ++i) {
        Complex zi = z_[static_cast<std::size_t>(i)];
        Complex f = q_[0], df(0.0, 0.0);
        for (std::size_t t = 1; t < q_.size(); ++t) {
          df = df * zi + f;
          f = f * zi + q_[t];
        }
        if (std::abs(f) == 0.0) continue;
        if (df == Complex(0.0, 0.0)) {
          z_[static_cast<std::size_t>(i)] += Complex(1e-8 * (1.0 + std::abs(zi)), 0.0);
          converged = false;
          continue;
        }
        const Complex newton = f / df;
        Complex sum(0.0, 0.0);
        bool collision = false;
        for (int j = 0; j < deg_; ++j) {
          if (j == i) continue;
          const Complex diff = zi - z_[static_cast<std::size_t>(j)];
          if (diff == Complex(0.0, 0.0)) {
            collision = true;
            break;
          }
          sum += Complex(1.0, 0.0) / diff;
        }
        if (collision) {
          z_[static_cast<std::size_t>(i)] += Complex(0.0, 1e-8 * (1.0 + std::abs(zi)));
          converged = false;
          continue;
        }
        const Complex denom = Complex(1.0, 0.0) - newton * sum;
        const Complex step = denom == Complex(0.0, 0.0) ? newton : newton / denom;
        z_[static_cast<std::size_t>(i)] = zi - step;
        if (std::abs(step) > 1e-14 * (1.0 + std::abs(zi))) converged = false;
      }
      if (converged) break;
    }
  }

  void polish() {
    for (int i = 0; i < deg_; ++i) {
      Complex x = z_[static_cast<std::size_t>(i)];
      for (int step = 0; step < 2; ++step) {
        Complex f = q_[0], df(0.0, 0.0);
        for (std::size_t t = 1; t < q_.size(); ++t) {
          df = df * x + f;
          f = f * x + q_[t];
        }
        if (df == Complex(0.0, 0.0)) break;
        const Complex delta = f / df;
        if (std::abs(delta) > 0.5 * (1.0 + std::abs(x))) break;  // reject wild steps
        x -= delta;
      }
      z_[static_cast<std::size_t>(i)] = x;
    }
  }

  // Roots closer than 1e-8 * scale collapse to their cluster mean; the
  // multiset keeps one entry per member, so multiplicities are preserved.
  void cluster() {
    const std::size_t n = static_cast<std::size_t>(deg_);
    tmp_cluster_.resize(n);
    tmp_cluster_mask_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      Complex sum = z_[i];
      int count = 1;
      const double lim = 1e-8 * std::max(1.0, std::abs(z_[i]));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (std::abs(z_[j] - z_[i]) <= lim) {
          sum += z_[j];
          ++count;
        }
      }
      if (count > 1) {
        tmp_cluster_[i] = sum / static_cast<double>(count);
        tmp_cluster_mask_[i] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (tmp_cluster_mask_[i]) z_[i] = tmp_cluster_[i];
    }
  }

  long double residual_ld(ComplexL w, const Complex* roots, std::size_t n) const {
    long double worst = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      ComplexL x(roots[i].real(), roots[i].imag());
      ComplexL f, df;
      horner_ld(x, f, df);
      worst = std::max(worst, std::abs(f - w));
    }
    return worst;
  }

  void horner_ld(ComplexL x, ComplexL& f, ComplexL& df) const {
    f = cl_[0];
    df = ComplexL(0.0L, 0.0L);
    for (std::size_t t = 1; t < cl_.size(); ++t) {
      df = df * x + f;
      f = f * x + cl_[t];
    }
  }

  std::vector<Complex> c_;
  std::vector<ComplexL> cl_;
  std::vector<Complex> q_;
  std::vector<Complex> z_;
  std::vector<Complex> tmp_;
  std::vector<Complex> tmp_cluster_;
  std::vector<char> tmp_cluster_mask_;
  int deg_;
  double scale_;
  double residual_ = 0.0;
};

// The k preimages of w under p, with multiplicity. preimages(p, inf) is
// {inf} with multiplicity k.
inline PreimageSet preimages(const Polynomial& p, const SpherePoint& w) {
  PreimageSet out;
  if (w.is_infinity()) {
    out.points.assign(static_cast<std::size_t>(p.degree()), SpherePoint::infinity());
    return out;
  }
  RootSolver solver(p);
  std::vector<Complex> roots;
  solver.solve(w.value(), roots);
  out.points.reserve(roots.size());
  for (const auto& r : roots) out.points.emplace_back(r.real(), r.imag());
  out.residual = solver.last_residual();
  return out;
}

// ---------------------------------------------------------------------------
// Expression grammar
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*        (divisor must be constant)
//   factor := number | 'i' | 'z' ('^' uint)? | '(' expr ')'
//   number := decimal with optional sign and exponent
// ---------------------------------------------------------------------------

namespace poly_detail {

// Coefficients lowest degree first while parsing; reversed on construction.
using Coeffs = std::vector<Complex>;

inline Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Coeffs sub(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  Coeffs r(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Coeffs parse() {
    Coeffs e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Coeffs expr() {
    skip_ws();
    bool negate = false;
    if (peek_is('-')) {
      // Unary sign folds into the first term unless a digit follows, in
      // which case the number grammar consumes it.
      std::size_t save = pos_;
      ++pos_;
      skip_ws();
      if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                               s_[pos_] == '.')) {
        pos_ = save;  // let number() take the sign
      } else {
        negate = true;
      }
    } else if (peek_is('+')) {
      ++pos_;
    }
    Coeffs acc = term();
    if (negate) {
      for (auto& c : acc) c = -c;
    }
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      const char op = s_[pos_];
      if (op != '+' && op != '-') break;
      ++pos_;
      Coeffs t = term();
      acc = op == '+' ? add(acc, t) : sub(acc, t);
    }
    return acc;
  }

  Coeffs term() {
    Coeffs acc = factor();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      const char op = s_[pos_];
      if (op != '*' && op != '/') break;
      const std::size_t op_pos = pos_;
      ++pos_;
      Coeffs f = factor();
      if (op == '*') {
        acc = mul(acc, f);
      } else {
        if (f.size() != 1) {
          throw ParseError("division by non-constant polynomial", op_pos);
        }
        if (f[0] == Complex(0.0, 0.0)) throw ParseError("division by zero", op_pos);
        for (auto& c : acc) c /= f[0];
      }
    }
    return acc;
  }

  Coeffs factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected factor");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Coeffs e = expr();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == 'i') {
      ++pos_;
      return {Complex(0.0, 1.0)};
    }
    if (c == 'z') {
      ++pos_;
      int power = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip_ws();
        power = parse_uint();
      }
      Coeffs m(static_cast<std::size_t>(power) + 1, Complex(0.0, 0.0));
      m.back() = Complex(1.0, 0.0);
      return m;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
        c == '+') {
      return {Complex(parse_number(), 0.0)};
    }
    fail("expected number, 'i', 'z' or '('");
  }

  int parse_uint() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      fail("expected exponent");
    }
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 512) fail("exponent too large");
      ++pos_;
    }
    return static_cast<int>(v);
  }

  double parse_number() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) {
      pos_ = start;
      fail("expected number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t exp_start = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        pos_ = exp_start;  // 'e' was not an exponent: reject
        fail("malformed exponent");
      }
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (res.ec != std::errc()) fail("malformed number");
    return value;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace poly_detail

inline Polynomial parse_poly(std::string_view text) {
  poly_detail::Parser parser(text);
  poly_detail::Coeffs low_first = parser.parse();
  std::reverse(low_first.begin(), low_first.end());
  bool all_zero = true;
  for (const auto& c : low_first) all_zero = all_zero && c == Complex(0.0, 0.0);
  if (all_zero) throw ParseError("zero polynomial", 0);
  return Polynomial(std::move(low_first));
}

// Canonical text form; parse_poly(format_poly(p)) reproduces the exact
// coefficients (doubles printed with 17 significant digits).
inline std::string format_poly(const Polynomial& p) {
  using poly_detail::fmt_double;
  std::string out;
  const int deg = p.degree();
  bool first = true;
  for (int pow = deg; pow >= 0; --pow) {
    Complex c = p.coeff_of_power(pow);
    if (c == Complex(0.0, 0.0)) continue;
    if (!first) {
      const bool negate_real = c.imag() == 0.0 && c.real() < 0.0;
      const bool negate_imag = c.real() == 0.0 && c.imag() < 0.0;
      if (negate_real || negate_imag) {
        out += " - ";
        c = -c;
      } else {
        out += " + ";
      }
    }
    first = false;
    std::string coeff;
    bool need_star = true;
    if (c.imag() == 0.0) {
      if (c.real() == 1.0 && pow >= 1) {
        need_star = false;
      } else {
        coeff = fmt_double(c.real());
      }
    } else if (c.real() == 0.0) {
      if (c.imag() == 1.0) {
        coeff = "i";
      } else {
        coeff = fmt_double(c.imag()) + "*i";
      }
    } else {
      std::string im_part = c.imag() < 0.0 ? " - " + fmt_double(-c.imag())
                                           : " + " + fmt_double(c.imag());
      coeff = "(" + fmt_double(c.real()) + im_part + "*i)";
    }
    if (pow == 0) {
      out += coeff.empty() ? fmt_double(c.real()) : coeff;
      continue;
    }
    const std::string zpart = pow == 1 ? "z" : "z^" + std::to_string(pow);
    if (!need_star) {
      out += zpart;
    } else {
      out += coeff + "*" + zpart;
    }
  }
  return out;
}

}  // namespace semijulia
