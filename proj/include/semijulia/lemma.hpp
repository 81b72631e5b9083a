#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "semijulia/poly.hpp"

// Exact-arithmetic verification of the line dynamics behind the invariant
// circle-family argument: t(r) = j r and s(r) = m r + c acting on
// I = [-inf, log r*), their commutator translation by -r0 + d_n, and the
// density march that fills (-inf, log r* - r0]. All of it in arbitrary-
// precision rationals, so every identity is checked exactly. The bridge
// from an actual map coefficient a to c = log|a| is numeric and lives in
// the comparator, not here; the dynamics depend only on c < 0.

namespace semijulia {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

struct LogDynParams {
  int j;               // multiplier of t, >= 2
  int m;               // multiplier of s, >= 2
  Rational c;          // translation of s, < 0
  Rational rstar_log;  // log r*, right end of I, < 0

  LogDynParams(int j_, int m_, Rational c_, Rational rstar_log_)
      : j(j_), m(m_), c(std::move(c_)), rstar_log(std::move(rstar_log_)) {
    if (j < 2 || m < 2) throw std::invalid_argument("LogDynParams: j, m >= 2 required");
    if (!(c < 0)) throw std::invalid_argument("LogDynParams: c < 0 required");
    if (!(rstar_log < 0)) {
      throw std::invalid_argument("LogDynParams: log r* < 0 required");
    }
  }

  // Fixed point of s: r0 = -c/(m-1) > 0.
  Rational r0() const { return -c / (m - 1); }
};

enum class LineMap { T, S, TInv, SInv };

struct LineLetter {
  LineMap map;
  int count = 1;
};

struct LineWord {
  std::vector<LineLetter> letters;  // applied left to right
};

struct GuardViolation : std::runtime_error {
  std::size_t step;
  GuardViolation(std::size_t step_, const std::string& what)
      : std::runtime_error(what), step(step_) {}
};

namespace lemma_detail {

inline Rational apply_one(const LogDynParams& p, LineMap map, const Rational& r) {
  switch (map) {
    case LineMap::T: return r * p.j;
    case LineMap::S: return r * p.m + p.c;
    case LineMap::TInv: return r / p.j;
    case LineMap::SInv: return (r - p.c) / p.m;
  }
  throw std::logic_error("apply_one: bad map");
}

}  // namespace lemma_detail

// Letter-by-letter exact evaluation.
inline Rational line_apply(const LogDynParams& p, const LineWord& word, Rational r) {
  for (const auto& letter : word.letters) {
    if (letter.count < 0) throw std::invalid_argument("line_apply: negative count");
    for (int i = 0; i < letter.count; ++i) {
      r = lemma_detail::apply_one(p, letter.map, r);
    }
  }
  return r;
}

// As line_apply, but every intermediate value must stay in I = [-inf, log r*).
// A violation identifies the offending step; the density march relies on this
// never firing for valid inputs.
inline Rational line_apply_guarded(const LogDynParams& p, const LineWord& word,
                                   Rational r) {
  if (!(r < p.rstar_log)) {
    throw GuardViolation(0, "guarded evaluation: start outside I");
  }
  std::size_t step = 0;
  for (const auto& letter : word.letters) {
    for (int i = 0; i < letter.count; ++i) {
      r = lemma_detail::apply_one(p, letter.map, r);
      ++step;
      if (!(r < p.rstar_log)) {
        throw GuardViolation(step, "guarded evaluation: step " + std::to_string(step) +
                                       " left I = [-inf, log r*)");
      }
    }
  }
  return r;
}

// Closed forms s^n(r) = r0 + m^n (r - r0) and t^n(r) = j^n r, for n in Z.
inline Rational s_pow(const LogDynParams& p, int n, const Rational& r) {
  const Rational r0 = p.r0();
  const BigInt mp = pow(BigInt(p.m), static_cast<unsigned>(n < 0 ? -n : n));
  return n >= 0 ? r0 + Rational(mp) * (r - r0) : r0 + (r - r0) / Rational(mp);
}

inline Rational t_pow(const LogDynParams& p, int n, const Rational& r) {
  const BigInt jp = pow(BigInt(p.j), static_cast<unsigned>(n < 0 ? -n : n));
  return n >= 0 ? r * Rational(jp) : r / Rational(jp);
}

// d_n = r0 (m^n + j^n - 1) / (m^n j^n); strictly decreasing, in (0, r0].
inline Rational d_n_value(const LogDynParams& p, int n) {
  if (n < 1) throw std::invalid_argument("d_n_value: n >= 1");
  const BigInt mn = pow(BigInt(p.m), static_cast<unsigned>(n));
  const BigInt jn = pow(BigInt(p.j), static_cast<unsigned>(n));
  return p.r0() * Rational(mn + jn - 1, mn * jn);
}

// The 4n-letter words, in application order (innermost first).
inline LineWord commutator_word(int n) {
  return LineWord{{{LineMap::S, n}, {LineMap::T, n}, {LineMap::SInv, n},
                   {LineMap::TInv, n}}};
}

inline LineWord reversed_commutator_word(int n) {
  return LineWord{{{LineMap::T, n}, {LineMap::S, n}, {LineMap::TInv, n},
                   {LineMap::SInv, n}}};
}

// (t^-n s^-n t^n s^n)(r) = r - r0 + d_n, verified against the explicit
// 4n-letter evaluation on every call.
inline Rational commutator_value(const LogDynParams& p, int n, const Rational& r) {
  if (n < 1) throw std::invalid_argument("commutator_value: n >= 1");
  const Rational closed = r - p.r0() + d_n_value(p, n);
  const Rational word = line_apply(p, commutator_word(n), r);
  if (word != closed) {
    throw std::logic_error("commutator_value: closed form disagrees with word");
  }
  return closed;
}

// The inverse composition (s^-n t^-n s^n t^n)(r) = r + r0 - d_n.
inline Rational commutator_inverse_value(const LogDynParams& p, int n,
                                         const Rational& r) {
  if (n < 1) throw std::invalid_argument("commutator_inverse_value: n >= 1");
  const Rational closed = r + p.r0() - d_n_value(p, n);
  const Rational word = line_apply(p, reversed_commutator_word(n), r);
  if (word != closed) {
    throw std::logic_error("commutator_inverse_value: closed form disagrees");
  }
  return closed;
}

struct DensityMarch {
  std::vector<Rational> points;      // sorted, unique; includes the seed
  std::vector<Rational> descending;  // r_n' = r' - r0 + d_n, n = 1..n_max
  Rational limit_point;              // r' - r0, the limit of descending
  Rational min_gap;                  // distance from the seed to its nearest
                                     // other emitted point
};

// Replays the density argument: the commutator words push r' down to
// r_n' = r' - r0 + d_n, the reversed words push each r_n' back up to
// r_n' + r0 - d_m, and the limits r' + d_n invade every right-neighborhood
// of the seed. Every word is evaluated with the guarded evaluator, so the
// march doubles as a check of the proof's domain bookkeeping.
inline DensityMarch density_march(const LogDynParams& p, const Rational& r_prime,
                                  int n_max) {
  if (n_max < 1) throw std::invalid_argument("density_march: n_max >= 1");
  const Rational r0 = p.r0();
  if (!(r_prime < p.rstar_log - r0)) {
    throw std::invalid_argument("density_march: r' < log r* - r0 required");
  }

  DensityMarch out;
  out.limit_point = r_prime - r0;
  std::vector<Rational> pts;
  pts.push_back(r_prime);

  for (int n = 1; n <= n_max; ++n) {
    const Rational rn = line_apply_guarded(p, commutator_word(n), r_prime);
    if (rn != r_prime - r0 + d_n_value(p, n)) {
      throw std::logic_error("density_march: commutator mismatch");
    }
    out.descending.push_back(rn);
    pts.push_back(rn);
    // claim 2 applies since rn <= r' < log r* - r0
    for (int m = 1; m <= n_max; ++m) {
      const Rational up = line_apply_guarded(p, reversed_commutator_word(m), rn);
      if (up != rn + r0 - d_n_value(p, m)) {
        throw std::logic_error("density_march: reversed commutator mismatch");
      }
      pts.push_back(up);
    }
    pts.push_back(rn + r0);  // limit of the upward sequence, in B' by closedness
  }
  pts.push_back(out.limit_point);

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  out.points = std::move(pts);

  bool have = false;
  Rational best;
  for (const auto& q : out.points) {
    if (q == r_prime) continue;
    const Rational gap = q < r_prime ? r_prime - q : q - r_prime;
    if (!have || gap < best) {
      have = true;
      best = gap;
    }
  }
  out.min_gap = have ? best : Rational(0);
  return out;
}

// ---------------------------------------------------------------------------
// Circle expansion and monomial rigidity
// ---------------------------------------------------------------------------

struct CircleLemmaReport {
  int n = 0;                    // minimal n with j^n delta > 2 pi
  double expected_radius = 0;   // radius^(j^n)
  double radius_rel_err = 0;    // worst relative deviation of |L^n(point)|
  double max_angular_gap = 0;   // largest gap between image angles
  double gap_bound = 0;         // 2 pi j^n delta / samples
  bool radius_ok = false;
  bool gap_ok = false;
  bool onto = false;
};

// An arc of angular width delta on C(0, radius) maps onto the full circle
// C(0, radius^(j^n)) under n applications of z -> z^j once j^n delta > 2 pi.
// Verified by sampling the arc and measuring image radii and angular gaps.
inline CircleLemmaReport circle_lemma_check(int j, double radius, double theta,
                                            double delta, int samples) {
  if (j < 2) throw std::invalid_argument("circle_lemma_check: j >= 2");
  if (!(radius > 0 && radius < 1)) {
    throw std::invalid_argument("circle_lemma_check: radius in (0,1)");
  }
  if (!(delta > 0 && delta <= 2 * M_PI)) {
    throw std::invalid_argument("circle_lemma_check: delta in (0, 2 pi]");
  }
  if (samples < 8) throw std::invalid_argument("circle_lemma_check: samples >= 8");

  // Strict inequality with a tiny relative slack so boundary cases such as
  // j^n delta landing exactly on 2 pi do not flip on rounding.
  const double target = 2 * M_PI * (1.0 + 1e-12);
  int n = 1;
  double power = static_cast<double>(j);
  while (power * delta <= target) {
    power *= j;
    ++n;
    if (n > 64) throw std::domain_error("circle_lemma_check: expansion too deep");
  }
  const double jn = power;  // j^n, exact for the sizes involved
  if (jn * std::log(radius) < -600.0) {
    throw std::domain_error("circle_lemma_check: image radius underflows");
  }

  CircleLemmaReport report;
  report.n = n;
  report.expected_radius = std::exp(jn * std::log(radius));

  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(samples));
  double worst_rel = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double frac = samples == 1 ? 0.5 : static_cast<double>(s) / (samples - 1);
    const double omega = theta + delta * (frac - 0.5);
    Complex z = std::polar(radius, omega);
    for (int step = 0; step < n; ++step) {
      Complex acc(1.0, 0.0);
      for (int t = 0; t < j; ++t) acc *= z;
      z = acc;
    }
    worst_rel = std::max(worst_rel, std::abs(std::abs(z) - report.expected_radius) /
                                        report.expected_radius);
    angles.push_back(std::arg(z));
  }
  std::sort(angles.begin(), angles.end());
  double max_gap = 2 * M_PI - (angles.back() - angles.front());
  for (std::size_t i = 1; i < angles.size(); ++i) {
    max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  }

  report.radius_rel_err = worst_rel;
  report.max_angular_gap = max_gap;
  report.gap_bound = 2 * M_PI * jn * delta / samples;
  report.radius_ok = worst_rel <= 1e-12;
  report.gap_ok = max_gap <= report.gap_bound;
  report.onto = report.radius_ok && report.gap_ok;
  return report;
}

struct MonomialRigidityResult {
  bool consistent = false;
  Complex a{0.0, 0.0};                   // coefficient when consistent
  int power = 0;                         // exponent when consistent
  std::optional<double> witness_radius;  // first circle with modulus spread
  double modulus_spread = 0.0;
};

// A map fixing 0 that sends circles centered at the origin into circles must
// be a monomial a z^j. The check measures the modulus spread of L over each
// test circle; any spread beyond 1e-10 of the local scale exhibits a
// violating circle, otherwise the trailing coefficients must vanish.
inline MonomialRigidityResult monomial_rigidity_check(const Polynomial& L,
                                                      const std::vector<double>& radii,
                                                      int samples) {
  if (L.coeff_of_power(0) != Complex(0.0, 0.0)) {
    throw std::invalid_argument("monomial_rigidity_check: L(0) must be 0");
  }
  if (samples < 16) throw std::invalid_argument("monomial_rigidity_check: samples");
  for (double r : radii) {
    if (!(r > 0 && r < 1)) {
      throw std::invalid_argument("monomial_rigidity_check: radii in (0,1)");
    }
  }

  MonomialRigidityResult result;
  for (double r : radii) {
    double lo = HUGE_VAL, hi = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double ang = 2 * M_PI * s / samples;
      const double mag = std::abs(eval(L, std::polar(r, ang)));
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    const double spread = hi - lo;
    if (spread > 1e-10 * std::max(1e-300, hi)) {
      result.consistent = false;
      result.witness_radius = r;
      result.modulus_spread = spread;
      return result;
    }
  }

  // All circles map into circles: L must be a z^j with everything else zero.
  int first_power = -1;
  for (int pw = 1; pw <= L.degree(); ++pw) {
    if (L.coeff_of_power(pw) != Complex(0.0, 0.0)) {
      first_power = pw;
      break;
    }
  }
  for (int pw = 0; pw <= L.degree(); ++pw) {
    if (pw == first_power) continue;
    if (std::abs(L.coeff_of_power(pw)) > 1e-12) {
      result.consistent = false;
      result.witness_radius.reset();
      result.modulus_spread = std::abs(L.coeff_of_power(pw));
      return result;
    }
  }
  result.consistent = true;
  result.a = L.coeff_of_power(first_power);
  result.power = first_power;
  return result;
}

// The Julia set of z -> a z^l is the circle of radius |a|^(-1/(l-1)); it is
// the unit circle exactly when |a| = 1.
inline double monomial_pair_julia_radius(Complex a, int l) {
  if (a == Complex(0.0, 0.0)) {
    throw std::invalid_argument("monomial_pair_julia_radius: a != 0");
  }
  if (l < 2) throw std::invalid_argument("monomial_pair_julia_radius: l >= 2");
  return std::pow(std::abs(a), -1.0 / (l - 1));
}

}  // namespace semijulia
