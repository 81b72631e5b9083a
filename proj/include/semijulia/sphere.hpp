#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Riemann-sphere geometry: points of C together with the point at infinity,
// the chordal metric, and an equal-area cube-sphere grid used to measure how
// much of the sphere a point cloud covers.

namespace semijulia {

// Finite values with |z| beyond this are identified with infinity; past the
// escape radius the classification of an orbit is already decided.
inline constexpr double kInfinityClamp = 1e150;

class SpherePoint {
 public:
  SpherePoint() = default;

  SpherePoint(double re, double im) : re_(re), im_(im) {
    if (std::isnan(re) || std::isnan(im)) {
      throw std::invalid_argument("SpherePoint: NaN coordinate");
    }
    if (!std::isfinite(re) || !std::isfinite(im) ||
        std::hypot(re, im) > kInfinityClamp) {
      re_ = 0;
      im_ = 0;
      inf_ = true;
    }
  }

  static SpherePoint infinity() {
    SpherePoint p;
    p.inf_ = true;
    return p;
  }

  static SpherePoint from_complex(std::complex<double> z) {
    return SpherePoint(z.real(), z.imag());
  }

  bool is_infinity() const { return inf_; }
  double re() const { return re_; }
  double im() const { return im_; }

  std::complex<double> value() const {
    if (inf_) throw std::domain_error("SpherePoint: value() of infinity");
    return {re_, im_};
  }

  double abs2() const { return inf_ ? HUGE_VAL : re_ * re_ + im_ * im_; }
  double abs() const { return inf_ ? HUGE_VAL : std::hypot(re_, im_); }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  double re_ = 0;
  double im_ = 0;
  bool inf_ = false;
};

// Embedding on the unit sphere; chordal distance is the Euclidean distance
// between embedded points. 0 maps to the south pole, infinity to the north.
inline std::array<double, 3> to_unit_sphere(const SpherePoint& p) {
  if (p.is_infinity()) return {0.0, 0.0, 1.0};
  const double r2 = p.abs2();
  const double d = 1.0 + r2;
  return {2.0 * p.re() / d, 2.0 * p.im() / d, (r2 - 1.0) / d};
}

// d(p,q) = 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)), extended continuously to
// infinity. Range [0, 2]; antipodal points realize 2.
inline double chordal_dist(const SpherePoint& p, const SpherePoint& q) {
  const bool pi = p.is_infinity(), qi = q.is_infinity();
  if (pi && qi) return 0.0;
  if (pi) return 2.0 / std::sqrt(1.0 + q.abs2());
  if (qi) return 2.0 / std::sqrt(1.0 + p.abs2());
  const double num = 2.0 * std::hypot(p.re() - q.re(), p.im() - q.im());
  return num / (std::sqrt(1.0 + p.abs2()) * std::sqrt(1.0 + q.abs2()));
}

// Equal-area cube-sphere grid with 6*n^2 cells, n odd. Each face region is
// the set of directions whose dominant axis is that face's; the per-face
// chart pushes the solid-angle measure to Lebesgue measure on [0,1]^2
// exactly (inverse-CDF in the first gnomonic coordinate, then conditional
// inverse-CDF in the second), so all cells have identical solid angle.
// With n odd, 0 and infinity fall in the interior of the center cells of
// the -z and +z faces: the two polar caps.
class SphereGrid {
 public:
  explicit SphereGrid(int requested_cells) : n_(pick_subdivision(requested_cells)) {
    hits_.assign(static_cast<std::size_t>(6) * n_ * n_, 0);
  }

  int cell_count() const { return 6 * n_ * n_; }
  int face_subdivision() const { return n_; }

  int cell_of(const SpherePoint& p) const {
    const auto v = to_unit_sphere(p);
    const double ax = std::fabs(v[0]), ay = std::fabs(v[1]), az = std::fabs(v[2]);
    int face;
    double m, a, b;
    if (ax >= ay && ax >= az) {
      face = v[0] >= 0 ? 0 : 1;
      m = v[0];
      a = v[1] / m;
      b = v[2] / m;
    } else if (ay >= az) {
      face = v[1] >= 0 ? 2 : 3;
      m = v[1];
      a = v[0] / m;
      b = v[2] / m;
    } else {
      face = v[2] >= 0 ? 4 : 5;
      m = v[2];
      a = v[0] / m;
      b = v[1] / m;
    }
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
    const double u = face_u(a);
    const double w = face_v(a, b);
    const int i = std::min(n_ - 1, std::max(0, static_cast<int>(u * n_)));
    const int j = std::min(n_ - 1, std::max(0, static_cast<int>(w * n_)));
    return (face * n_ + i) * n_ + j;
  }

  void add(const SpherePoint& p) { ++hits_[static_cast<std::size_t>(cell_of(p))]; }
  void add_cell(int cell) { ++hits_[static_cast<std::size_t>(cell)]; }

  std::uint32_t hits(int cell) const { return hits_[static_cast<std::size_t>(cell)]; }

  int cells_hit() const {
    int c = 0;
    for (auto h : hits_) c += h > 0;
    return c;
  }

  double coverage_fraction() const {
    return static_cast<double>(cells_hit()) / cell_count();
  }

  // Associative and commutative: grids filled on independent partitions of a
  // cloud can be combined in any order.
  void merge(const SphereGrid& other) {
    if (other.n_ != n_) throw std::invalid_argument("SphereGrid::merge: size mismatch");
    for (std::size_t i = 0; i < hits_.size(); ++i) hits_[i] += other.hits_[i];
  }

  int north_cap_cell() const {  // cell containing infinity
    return cell_of(SpherePoint::infinity());
  }
  int south_cap_cell() const {  // cell containing 0
    return cell_of(SpherePoint(0.0, 0.0));
  }

 private:
  // Nearest odd n to sqrt(N/6), measured by resulting cell count.
  static int pick_subdivision(int requested_cells) {
    if (requested_cells < 1) throw std::invalid_argument("SphereGrid: cells < 1");
    const double x = std::sqrt(requested_cells / 6.0);
    int lo = static_cast<int>(std::floor(x));
    if (lo % 2 == 0) --lo;
    if (lo < 1) lo = 1;
    int hi = lo + 2;
    const long long dlo = std::llabs(6LL * lo * lo - requested_cells);
    const long long dhi = std::llabs(6LL * hi * hi - requested_cells);
    return dhi <= dlo ? hi : lo;
  }

  // Marginal CDF of the face solid-angle density in the first gnomonic
  // coordinate; maps [-1,1] onto [0,1].
  static double face_u(double a) {
    return 0.5 + (3.0 / M_PI) * std::atan(a / std::sqrt(a * a + 2.0));
  }

  // Conditional CDF of the second coordinate given the first.
  static double face_v(double a, double b) {
    const double c = 1.0 + a * a;
    return 0.5 * (1.0 + b * std::sqrt((c + 1.0) / (c + b * b)));
  }

  int n_;
  std::vector<std::uint32_t> hits_;
};

}  // namespace semijulia
