#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "semijulia/lemma.hpp"
#include "semijulia/rng.hpp"
#include "semijulia/sphere.hpp"

// Test-only oracles, independent of the library code paths they check.

namespace oracles {

using semijulia::Complex;
using semijulia::Rational;
using semijulia::SpherePoint;

// Green's function of z^2 - 2 via the conjugacy z = w + 1/w: the map becomes
// w -> w^2 outside the unit disc, so G(z) = log|w| for the root with |w| > 1.
inline double joukowski_green(Complex z) {
  const Complex s = std::sqrt(z * z - 4.0);
  Complex w = (z + s) / 2.0;
  if (std::abs(w) < 1.0) w = (z - s) / 2.0;
  return std::log(std::abs(w));
}

inline Complex joukowski_bottcher(Complex z) {
  const Complex s = std::sqrt(z * z - 4.0);
  Complex w = (z + s) / 2.0;
  if (std::abs(w) < 1.0) w = (z - s) / 2.0;
  return w;
}

// Distance from z to the segment [-2, 2] on the real axis.
inline double dist_to_segment(Complex z) {
  const double x = std::clamp(z.real(), -2.0, 2.0);
  return std::abs(z - Complex(x, 0.0));
}

// Uniform point on the Riemann sphere (uniform w.r.t. surface measure),
// returned as the stereographic complex value.
inline SpherePoint sample_sphere_uniform(semijulia::SplitMix& rng) {
  const double zc = rng.next_in(-1.0, 1.0);
  const double ang = rng.next_in(0.0, 2.0 * M_PI);
  const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
  const double x = rho * std::cos(ang), y = rho * std::sin(ang);
  // invert the embedding (x, y, z) = (2u, 2v, |w|^2-1)/(1+|w|^2)
  if (zc > 1.0 - 1e-15) return SpherePoint::infinity();
  const double denom = 1.0 - zc;
  return SpherePoint(x / denom, y / denom);
}

// Exact affine fold of a line-map letter sequence, written independently of
// the library's evaluator: each entry is (map-id, count) with maps
// 0: r -> j r, 1: r -> m r + c, 2: r -> r / j, 3: r -> (r - c)/m.
inline Rational fold_line_word(int j, int m, const Rational& c,
                               const std::vector<std::pair<int, int>>& word,
                               Rational r) {
  for (const auto& [map, count] : word) {
    for (int i = 0; i < count; ++i) {
      switch (map) {
        case 0: r = r * j; break;
        case 1: r = r * m + c; break;
        case 2: r = r / j; break;
        case 3: r = (r - c) / m; break;
      }
    }
  }
  return r;
}

// Brute-force nearest neighbor (chordal), for cross-checking the hash index.
inline double brute_min_dist(const SpherePoint& q,
                             const std::vector<SpherePoint>& pts) {
  double best = HUGE_VAL;
  for (const auto& p : pts) best = std::min(best, semijulia::chordal_dist(q, p));
  return best;
}

}  // namespace oracles
