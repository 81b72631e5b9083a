#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "semijulia/rng.hpp"
#include "semijulia/sphere.hpp"

// Finite point-cloud approximations of Julia-type sets, plus the shared
// decimation and nearest-neighbor utilities that operate on them.

namespace semijulia {

enum class CloudKind { SingleJulia, SemigroupJulia, InvariantE };

inline const char* to_string(CloudKind k) {
  switch (k) {
    case CloudKind::SingleJulia: return "single-julia";
    case CloudKind::SemigroupJulia: return "semigroup-julia";
    case CloudKind::InvariantE: return "invariant-E";
  }
  return "?";
}

// A cloud is reproducible from (generators, depth, budget, seed, kind).
struct SetApprox {
  std::vector<SpherePoint> points;
  int depth = 0;
  int budget = 0;
  std::uint64_t seed = 0;
  CloudKind kind = CloudKind::SingleJulia;
};

namespace cloud_detail {

// Uniform random thinning to `budget` elements, keyed by a counter hash so
// the survivors do not depend on evaluation order. Survivors keep their
// original relative order.
template <typename T>
void decimate(std::vector<T>& v, std::size_t budget, std::uint64_t seed,
              std::uint64_t salt, std::uint64_t depth) {
  if (v.size() <= budget) return;
  struct Entry {
    std::uint64_t key;
    std::uint32_t idx;
  };
  std::vector<Entry> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    order[i] = {mix64(seed, salt, depth, i), static_cast<std::uint32_t>(i)};
  }
  std::nth_element(order.begin(), order.begin() + static_cast<long>(budget),
                   order.end(), [](const Entry& a, const Entry& b) {
                     return a.key < b.key || (a.key == b.key && a.idx < b.idx);
                   });
  std::vector<std::uint32_t> keep(budget);
  for (std::size_t i = 0; i < budget; ++i) keep[i] = order[i].idx;
  std::sort(keep.begin(), keep.end());
  std::vector<T> kept;
  kept.reserve(budget);
  for (auto i : keep) kept.push_back(v[i]);
  v.swap(kept);
}

}  // namespace cloud_detail

// Spatial hash over the unit-sphere embedding; answers "is there a cloud
// point within chordal eps of q". Exact for eps <= 4 * cell.
class NeighborIndex {
 public:
  NeighborIndex(const std::vector<SpherePoint>& pts, double cell) : cell_(cell) {
    if (!(cell > 1e-7)) throw std::invalid_argument("NeighborIndex: cell too small");
    coords_.reserve(pts.size());
    for (const auto& p : pts) coords_.push_back(to_unit_sphere(p));
    buckets_.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      buckets_[key_of(coords_[i])].push_back(static_cast<std::uint32_t>(i));
    }
  }

  std::size_t size() const { return coords_.size(); }

  bool has_neighbor_within(const SpherePoint& q, double eps,
                           long exclude = -1) const {
    const auto c = to_unit_sphere(q);
    const int r = static_cast<int>(std::ceil(eps / cell_));
    if (r > 4) throw std::invalid_argument("NeighborIndex: eps too large for cell");
    const double eps2 = eps * eps;
    const long bx = bucket_coord(c[0]), by = bucket_coord(c[1]), bz = bucket_coord(c[2]);
    for (long dx = -r; dx <= r; ++dx) {
      for (long dy = -r; dy <= r; ++dy) {
        for (long dz = -r; dz <= r; ++dz) {
          const auto it = buckets_.find(pack(bx + dx, by + dy, bz + dz));
          if (it == buckets_.end()) continue;
          for (auto idx : it->second) {
            if (static_cast<long>(idx) == exclude) continue;
            const auto& p = coords_[idx];
            const double d0 = p[0] - c[0], d1 = p[1] - c[1], d2 = p[2] - c[2];
            if (d0 * d0 + d1 * d1 + d2 * d2 <= eps2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  long bucket_coord(double x) const {
    return static_cast<long>(std::floor((x + 2.0) / cell_));
  }

  std::uint64_t key_of(const std::array<double, 3>& c) const {
    return pack(bucket_coord(c[0]), bucket_coord(c[1]), bucket_coord(c[2]));
  }

  static std::uint64_t pack(long x, long y, long z) {
    return (static_cast<std::uint64_t>(x) & 0x1FFFFF) |
           ((static_cast<std::uint64_t>(y) & 0x1FFFFF) << 21) |
           ((static_cast<std::uint64_t>(z) & 0x1FFFFF) << 42);
  }

  double cell_;
  std::vector<std::array<double, 3>> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// Every point of `a` has a point of `index` within chordal eps.
inline bool directed_within(const std::vector<SpherePoint>& a,
                            const NeighborIndex& index, double eps) {
  for (const auto& p : a) {
    if (!index.has_neighbor_within(p, eps)) return false;
  }
  return true;
}

}  // namespace semijulia
