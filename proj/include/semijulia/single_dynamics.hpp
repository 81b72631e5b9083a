#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/poly.hpp"

// Dynamics of a single polynomial: Green's function with pole at infinity,
// the outer Boettcher coordinate, repelling fixed-point seeds, and
// inverse-iteration Julia clouds.

namespace semijulia {

inline constexpr double kGreenInfinitySentinel = 1e308;

struct GreenEstimate {
  double value = 0.0;   // 0 exactly when the orbit stays bounded
  int iterations = 0;
  bool escaped = false;
};

struct NoRepellingFixedPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Escape-rate limit G(z) = lim log|p^n(z)| / k^n. Once the orbit passes the
// escape radius, successive estimates (log|z_n| + log|a_k|/(k-1)) / k^n
// converge geometrically; iteration stops when they agree to 1e-12 or the
// orbit magnitude passes 1e18, where the remaining correction is below
// double precision.
inline GreenEstimate green_value(const Polynomial& p, const SpherePoint& z,
                                 int max_iter = 512) {
  const int k = p.degree();
  if (k < 2) throw std::invalid_argument("green_value: degree < 2");
  if (z.is_infinity()) return {kGreenInfinitySentinel, 0, true};
  const double radius = escape_radius(p);
  const double lead_term = std::log(std::abs(p.leading())) / (k - 1);

  Complex zz = z.value();
  bool past_radius = false;
  double prev_est = 0.0;
  bool have_prev = false;
  const int hard_cap = max_iter + 128;
  for (int n = 0; n <= hard_cap; ++n) {
    const double az = std::abs(zz);
    if (az > 1e18) {
      const double g = (std::log(az) + lead_term) / std::pow(double(k), n);
      return {std::max(0.0, g), n, true};
    }
    if (az > radius) {
      past_radius = true;
      const double est = (std::log(az) + lead_term) / std::pow(double(k), n);
      if (have_prev && std::abs(est - prev_est) <= 1e-12 * std::max(1.0, std::abs(est))) {
        return {std::max(0.0, est), n, true};
      }
      prev_est = est;
      have_prev = true;
    } else if (n >= max_iter && !past_radius) {
      return {0.0, n, false};
    }
    zz = eval(p, zz);
    if (!std::isfinite(zz.real()) || !std::isfinite(zz.imag())) {
      // overflow in one step from <= 1e18 needs an enormous coefficient, in
      // which case the estimate converged at n = 0 already
      return {have_prev ? std::max(0.0, prev_est) : kGreenInfinitySentinel, n + 1,
              true};
    }
  }
  return {std::max(0.0, prev_est), hard_cap, past_radius};
}

struct BottcherValue {
  Complex value;                 // outer coordinate, |value| > 1
  double functional_residual;    // |phi(p(z)) - phi(z)^k| / |phi(z)^k|
  Complex leading_branch;        // principal (k-1)-th root of the leading coeff
};

// Outer Boettcher coordinate phi with phi(z) ~ a_k^{1/(k-1)} z near infinity
// and phi(p(z)) = phi(z)^k, computed as the convergent product
// z * a^{1/(k-1)} * prod (1 + d_n)^{1/k^{n+1}} along the escape orbit, which
// fixes the branch by continuity. Defined on the escaping part of the basin
// where the product factors stay principal (|d_n| bounded away from 1);
// points past the escape radius always qualify.
inline BottcherValue bottcher_value(const Polynomial& p, const SpherePoint& z) {
  const int k = p.degree();
  if (k < 2) throw std::invalid_argument("bottcher_value: degree < 2");
  if (z.is_infinity()) throw std::domain_error("bottcher_value: finite point required");
  if (!green_value(p, z).escaped) {
    throw std::domain_error("bottcher_value: point not in the escape region");
  }
  const Complex a = p.leading();
  const Complex branch = std::pow(a, 1.0 / (k - 1));

  // tail(z) = p(z) - a z^k, evaluated from the non-leading coefficients
  auto tail = [&](Complex x) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 1; i < p.coeffs().size(); ++i) acc = acc * x + p.coeffs()[i];
    return acc;
  };

  Complex phi = z.value() * branch;
  Complex phi_next = Complex(1.0, 0.0);  // product factors for phi(p(z))
  Complex zz = z.value();
  double kpow = double(k);  // k^{n+1}
  for (int n = 0; n < 650; ++n) {
    Complex azk = a;
    for (int t = 0; t < k; ++t) azk *= zz;
    const Complex delta = azk == Complex(0.0, 0.0) ? Complex(1.0, 0.0)
                                                   : tail(zz) / azk;
    if (!(std::abs(delta) <= 0.75)) {
      throw std::domain_error(
          "bottcher_value: orbit passes too close to the Julia set for the "
          "escape product");
    }
    const Complex factor_log = std::log(Complex(1.0, 0.0) + delta);
    phi *= std::exp(factor_log / kpow);
    if (n >= 1) phi_next *= std::exp(factor_log * (double(k) / kpow));
    if (std::abs(delta) < 1e-19 || std::abs(zz) > 1e18) break;
    zz = eval(p, zz);
    kpow *= double(k);
  }

  const Complex pz = eval(p, z.value());
  const Complex phi_at_pz = pz * branch * phi_next;
  Complex phik = Complex(1.0, 0.0);
  for (int t = 0; t < k; ++t) phik *= phi;
  const double denom = std::max(std::abs(phik), 1e-300);
  const double residual = std::abs(phi_at_pz - phik) / denom;

  if (!(std::abs(phi) > 1.0)) {
    throw std::domain_error("bottcher_value: coordinate not exterior");
  }
  return {phi, residual, branch};
}

namespace dynamics_detail {

// Long-double refinement of a point x with p(x) = x.
inline ComplexL refine_fixed_point(const Polynomial& p, ComplexL x) {
  for (int step = 0; step < 3; ++step) {
    ComplexL f(p.coeffs().front().real(), p.coeffs().front().imag());
    ComplexL df(0.0L, 0.0L);
    for (std::size_t t = 1; t < p.coeffs().size(); ++t) {
      df = df * x + f;
      f = f * x + ComplexL(p.coeffs()[t].real(), p.coeffs()[t].imag());
    }
    f -= x;
    df -= ComplexL(1.0L, 0.0L);
    if (df == ComplexL(0.0L, 0.0L)) break;
    x -= f / df;
  }
  return x;
}

// The repelling fixed point chosen by seed_repelling_point, in long double.
inline ComplexL seed_repelling_point_ld(const Polynomial& p) {
  const int k = p.degree();
  if (k < 2) throw std::invalid_argument("seed_repelling_point: degree < 2");
  std::vector<Complex> fc = p.coeffs();
  fc[fc.size() - 2] -= Complex(1.0, 0.0);  // p(z) - z
  bool all_zero = true;
  for (const auto& c : fc) all_zero = all_zero && c == Complex(0.0, 0.0);
  if (all_zero) throw std::invalid_argument("seed_repelling_point: identity map");
  RootSolver solver{Polynomial(fc)};
  std::vector<Complex> fixed;
  solver.solve(Complex(0.0, 0.0), fixed);

  const Polynomial dp = derivative(p);
  bool found = false;
  Complex best(0.0, 0.0);
  double best_mult = 0.0;
  for (const auto& x : fixed) {
    const double mult = std::abs(eval(dp, x));
    if (mult <= 1.0 + 1e-9) continue;
    if (!found || mult > best_mult ||
        (mult == best_mult &&
         (x.real() < best.real() ||
          (x.real() == best.real() && x.imag() < best.imag())))) {
      found = true;
      best = x;
      best_mult = mult;
    }
  }
  if (!found) {
    throw NoRepellingFixedPointError(
        "no repelling fixed point among roots of p(z) - z; seed from a "
        "repelling 2-cycle computed from p(p(z)) - z instead");
  }
  return refine_fixed_point(p, ComplexL(best.real(), best.imag()));
}

// Inverse-iteration cloud kept in long double end to end; forward letters in
// the semigroup engines amplify stored error exponentially, so the extra
// mantissa is what keeps deep mixed orbits on the invariant set.
inline std::vector<ComplexL> julia_cloud_single_ld(const Polynomial& p, int depth,
                                                   int budget, std::uint64_t seed,
                                                   std::uint64_t salt) {
  if (budget < 1) throw std::invalid_argument("julia_cloud_single: budget < 1");
  if (depth < 0) throw std::invalid_argument("julia_cloud_single: depth < 0");
  const int k = p.degree();
  std::vector<ComplexL> frontier{seed_repelling_point_ld(p)};
  RootSolver solver(p);
  std::vector<ComplexL> roots;
  std::vector<ComplexL> next;
  for (int d = 1; d <= depth; ++d) {
    next.clear();
    next.reserve(frontier.size() * static_cast<std::size_t>(k));
    for (const auto& w : frontier) {
      solver.solve_ld(w, roots);
      next.insert(next.end(), roots.begin(), roots.end());
    }
    cloud_detail::decimate(next, static_cast<std::size_t>(budget), seed, salt,
                           static_cast<std::uint64_t>(d));
    frontier.swap(next);
  }
  return frontier;
}

inline SpherePoint to_sphere_point(ComplexL z) {
  return SpherePoint(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

}  // namespace dynamics_detail

// A finite fixed point with |p'| > 1, preferring the strongest multiplier.
// Such a point lies on the Julia set, which inverse iteration needs.
inline SpherePoint seed_repelling_point(const Polynomial& p) {
  return dynamics_detail::to_sphere_point(dynamics_detail::seed_repelling_point_ld(p));
}

// Iterated full preimages of the repelling seed, uniformly thinned to
// `budget` points per round. Deterministic for fixed seed.
inline SetApprox julia_cloud_single(const Polynomial& p, int depth, int budget,
                                    std::uint64_t seed) {
  const auto frontier = dynamics_detail::julia_cloud_single_ld(
      p, depth, budget, seed, rng_salt::kSingleJulia);
  SetApprox cloud;
  cloud.points.reserve(frontier.size());
  for (const auto& z : frontier) {
    cloud.points.push_back(dynamics_detail::to_sphere_point(z));
  }
  cloud.depth = depth;
  cloud.budget = budget;
  cloud.seed = seed;
  cloud.kind = CloudKind::SingleJulia;
  return cloud;
}

}  // namespace semijulia
