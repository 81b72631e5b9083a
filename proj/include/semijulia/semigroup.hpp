#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/parallel.hpp"
#include "semijulia/poly.hpp"
#include "semijulia/single_dynamics.hpp"

// Word orbits of a finitely generated polynomial semigroup. Backward-only
// word sampling approximates the semigroup Julia set (closure of iterated
// preimages of the generator Julia sets); mixed forward/backward sampling
// approximates the minimal completely invariant set, whose layers are all
// retained. Full breadth-first expansion has 4^n branches, so each cloud
// point follows its own uniformly sampled letter stream instead, with
// cumulative layer retention.

namespace semijulia {

struct SemigroupSpec {
  explicit SemigroupSpec(std::vector<Polynomial> gens) : generators_(std::move(gens)) {
    if (generators_.empty()) {
      throw std::invalid_argument("SemigroupSpec: at least one generator");
    }
    for (const auto& g : generators_) {
      if (g.degree() < 2) {
        throw std::invalid_argument("SemigroupSpec: generator degree < 2");
      }
    }
  }
  const std::vector<Polynomial>& generators() const { return generators_; }
  int count() const { return static_cast<int>(generators_.size()); }

 private:
  std::vector<Polynomial> generators_;
};

enum class Direction { Forward, Backward };

struct Letter {
  int gen_index = 0;
  Direction direction = Direction::Forward;
  friend bool operator==(const Letter&, const Letter&) = default;
};

struct SignedWord {
  std::vector<Letter> letters;
  friend bool operator==(const SignedWord&, const SignedWord&) = default;
};

// Reverses letter order and flips every direction: the word of "inverse"
// set maps h_j^* matching a given composition. An involution.
inline SignedWord reverse_word(const SignedWord& w) {
  SignedWord r;
  r.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    r.letters.push_back({it->gen_index, it->direction == Direction::Forward
                                            ? Direction::Backward
                                            : Direction::Forward});
  }
  return r;
}

// One recurrence step on a public cloud: forward images under eval, or the
// union of full preimages, then uniform decimation back to the budget.
inline SetApprox apply_letter(const SetApprox& cloud, const Polynomial& p,
                              Direction direction) {
  SetApprox out;
  out.depth = cloud.depth + 1;
  out.budget = cloud.budget;
  out.seed = cloud.seed;
  out.kind = cloud.kind;
  if (direction == Direction::Forward) {
    out.points.reserve(cloud.points.size());
    for (const auto& z : cloud.points) out.points.push_back(eval(p, z));
  } else {
    RootSolver solver(p);
    std::vector<Complex> roots;
    out.points.reserve(cloud.points.size() * static_cast<std::size_t>(p.degree()));
    for (const auto& z : cloud.points) {
      if (z.is_infinity()) {
        out.points.insert(out.points.end(), static_cast<std::size_t>(p.degree()),
                          SpherePoint::infinity());
        continue;
      }
      solver.solve(z.value(), roots);
      for (const auto& r : roots) out.points.emplace_back(r.real(), r.imag());
    }
  }
  if (cloud.budget > 0) {
    cloud_detail::decimate(out.points, static_cast<std::size_t>(cloud.budget),
                           cloud.seed, rng_salt::kApplyLetter,
                           static_cast<std::uint64_t>(out.depth));
  }
  return out;
}

inline SetApprox apply_word(const SetApprox& cloud, const SemigroupSpec& spec,
                            const SignedWord& word) {
  SetApprox acc = cloud;
  for (const auto& letter : word.letters) {
    if (letter.gen_index < 0 || letter.gen_index >= spec.count()) {
      throw std::out_of_range("apply_word: generator index");
    }
    acc = apply_letter(acc, spec.generators()[static_cast<std::size_t>(letter.gen_index)],
                       letter.direction);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Orbit engine
// ---------------------------------------------------------------------------

class OrbitEngine {
 public:
  enum class Mode { BackwardOnly, Mixed };

  struct LPoint {
    ComplexL z{0.0L, 0.0L};
    bool inf = false;
  };

  OrbitEngine(const SemigroupSpec& spec, Mode mode, int budget, std::uint64_t seed,
              int threads = default_thread_count())
      : spec_(spec), mode_(mode), budget_(budget), seed_(seed), threads_(threads) {
    if (budget_ < 1) throw std::invalid_argument("OrbitEngine: budget < 1");
    for (const auto& g : spec_.generators()) solver_protos_.emplace_back(g);
  }

  // Layer 0: the union of the generators' own Julia clouds, budget/n each
  // unless a smaller per-generator seed budget is requested.
  void seed_from_generators(int seed_budget = 0) {
    const int ng = spec_.count();
    const int each = seed_budget > 0 ? seed_budget : std::max(1, budget_ / ng);
    layer_.clear();
    for (int gi = 0; gi < ng; ++gi) {
      const Polynomial& g = spec_.generators()[static_cast<std::size_t>(gi)];
      const int fill_depth =
          depth_to_fill(each, g.degree()) + 8;  // converge past the fill point
      const auto pts = dynamics_detail::julia_cloud_single_ld(
          g, fill_depth, each, mix64(seed_, rng_salt::kSeedCloud, gi),
          rng_salt::kSingleJulia);
      for (const auto& z : pts) layer_.push_back({z, false});
    }
    depth_ = 0;
    reservoir_.clear();
    feed_reservoir(layer_, 0);
    frontier_ = layer_;
    trim_frontier(0);
  }

  // One round: every frontier point draws a letter from its own counter
  // stream and is replaced by its image (forward) or its full preimage set
  // (backward); the layer is retained, the frontier decimated to budget.
  void step() {
    const std::uint64_t next_depth = static_cast<std::uint64_t>(depth_) + 1;
    const int ng = spec_.count();
    const int options = mode_ == Mode::BackwardOnly ? ng : 2 * ng;

    const std::size_t n = frontier_.size();
    std::vector<std::uint32_t> offset(n + 1, 0);
    std::vector<std::uint8_t> letter(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t u = mix64(seed_, rng_salt::kLetter, next_depth, i);
      const int pick = static_cast<int>(u % static_cast<std::uint64_t>(options));
      letter[i] = static_cast<std::uint8_t>(pick);
      const int gen = pick % ng;
      const bool backward = mode_ == Mode::BackwardOnly || pick < ng;
      const int children =
          backward ? spec_.generators()[static_cast<std::size_t>(gen)].degree() : 1;
      offset[i + 1] = offset[i] + static_cast<std::uint32_t>(children);
    }
    layer_.assign(offset[n], LPoint{});

    parallel_for(n, threads_, [&](std::size_t lo, std::size_t hi, int) {
      std::vector<RootSolver> solvers = solver_protos_;  // per-worker state
      std::vector<ComplexL> roots;
      for (std::size_t i = lo; i < hi; ++i) {
        const int pick = letter[i];
        const int gen = pick % ng;
        const bool backward = mode_ == Mode::BackwardOnly || pick < ng;
        const Polynomial& g = spec_.generators()[static_cast<std::size_t>(gen)];
        const LPoint& pt = frontier_[i];
        LPoint* out = layer_.data() + offset[i];
        if (pt.inf) {
          const int children = backward ? g.degree() : 1;
          for (int c = 0; c < children; ++c) out[c] = {ComplexL(0.0L, 0.0L), true};
          continue;
        }
        if (backward) {
          solvers[static_cast<std::size_t>(gen)].solve_ld(pt.z, roots);
          for (int c = 0; c < g.degree(); ++c) {
            out[c] = clamp_point(roots[static_cast<std::size_t>(c)]);
          }
        } else {
          out[0] = clamp_point(eval_ld(g, pt.z));
        }
      }
    });

    feed_reservoir(layer_, next_depth);
    frontier_ = layer_;
    trim_frontier(next_depth);
    depth_ = static_cast<int>(next_depth);
  }

  int depth() const { return depth_; }
  std::size_t frontier_size() const { return frontier_.size(); }

  // Most recent layer before decimation (layer 0 = the seeds).
  const std::vector<LPoint>& last_layer() const { return layer_; }

  std::vector<SpherePoint> frontier_points() const { return to_points(frontier_); }
  std::vector<SpherePoint> last_layer_points() const { return to_points(layer_); }

  // Cumulative cell hits; returns how many binned points were at infinity.
  long long bin_last_layer(SphereGrid& grid) const {
    long long inf_count = 0;
    for (const auto& pt : layer_) {
      if (pt.inf) {
        grid.add(SpherePoint::infinity());
        ++inf_count;
      } else {
        grid.add(dynamics_detail::to_sphere_point(pt.z));
      }
    }
    return inf_count;
  }

  // Uniform sample of the union of all layers seen so far (kept by smallest
  // hash key), in canonical key order.
  SetApprox layered_cloud(CloudKind kind) const {
    std::vector<std::pair<std::uint64_t, SpherePoint>> entries = reservoir_;
    compact(entries, static_cast<std::size_t>(budget_));
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SetApprox cloud;
    cloud.points.reserve(entries.size());
    for (const auto& e : entries) cloud.points.push_back(e.second);
    cloud.depth = depth_;
    cloud.budget = budget_;
    cloud.seed = seed_;
    cloud.kind = kind;
    return cloud;
  }

 private:
  static int depth_to_fill(int budget, int degree) {
    int d = 0;
    long long size = 1;
    while (size < budget && d < 64) {
      size *= degree;
      ++d;
    }
    return d;
  }

  static LPoint clamp_point(ComplexL z) {
    const long double a = std::abs(z);
    if (!(a <= static_cast<long double>(kInfinityClamp))) {
      return {ComplexL(0.0L, 0.0L), true};
    }
    return {z, false};
  }

  static std::vector<SpherePoint> to_points(const std::vector<LPoint>& v) {
    std::vector<SpherePoint> out;
    out.reserve(v.size());
    for (const auto& pt : v) {
      out.push_back(pt.inf ? SpherePoint::infinity()
                           : dynamics_detail::to_sphere_point(pt.z));
    }
    return out;
  }

  void feed_reservoir(const std::vector<LPoint>& pts, std::uint64_t depth) {
    reservoir_.reserve(reservoir_.size() + pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::uint64_t key = mix64(seed_, rng_salt::kUnionKey, depth, i);
      reservoir_.emplace_back(key, pts[i].inf
                                       ? SpherePoint::infinity()
                                       : dynamics_detail::to_sphere_point(pts[i].z));
    }
    if (reservoir_.size() > 2 * static_cast<std::size_t>(budget_)) {
      compact(reservoir_, static_cast<std::size_t>(budget_));
    }
  }

  static void compact(std::vector<std::pair<std::uint64_t, SpherePoint>>& v,
                      std::size_t budget) {
    if (v.size() <= budget) return;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(budget), v.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    v.resize(budget);
  }

  void trim_frontier(std::uint64_t depth) {
    cloud_detail::decimate(frontier_, static_cast<std::size_t>(budget_), seed_,
                           rng_salt::kDecimate, depth);
  }

  SemigroupSpec spec_;
  Mode mode_;
  int budget_;
  std::uint64_t seed_;
  int threads_;
  int depth_ = 0;
  std::vector<RootSolver> solver_protos_;
  std::vector<LPoint> frontier_;
  std::vector<LPoint> layer_;
  std::vector<std::pair<std::uint64_t, SpherePoint>> reservoir_;
};

// Approximation of the semigroup Julia set: backward random words applied to
// the generator Julia clouds, all layers retained.
inline SetApprox approx_J_semigroup(const SemigroupSpec& spec, int depth, int budget,
                                    std::uint64_t seed) {
  if (depth < 0) throw std::invalid_argument("approx_J_semigroup: depth < 0");
  OrbitEngine engine(spec, OrbitEngine::Mode::BackwardOnly, budget, seed);
  engine.seed_from_generators();
  for (int d = 0; d < depth; ++d) engine.step();
  return engine.layered_cloud(CloudKind::SemigroupJulia);
}

// Approximation of the minimal completely invariant set: letters drawn from
// both directions of both generators, layers merged then decimated.
inline SetApprox approx_E(const SemigroupSpec& spec, int depth, int budget,
                          std::uint64_t seed) {
  if (depth < 0) throw std::invalid_argument("approx_E: depth < 0");
  OrbitEngine engine(spec, OrbitEngine::Mode::Mixed, budget, seed);
  engine.seed_from_generators();
  for (int d = 0; d < depth; ++d) engine.step();
  return engine.layered_cloud(CloudKind::InvariantE);
}

struct CoveragePoint {
  int depth = 0;
  double fraction = 0.0;
  long long infinite_points = 0;  // cumulative count of binned infinity points
};

// Bins every layer 0..depth of the invariant-set orbit into one grid; cells
// stay hit even when decimation later drops their points, so the curve is
// non-decreasing by construction.
inline std::vector<CoveragePoint> coverage_experiment(const SemigroupSpec& spec,
                                                      int grid_cells, int depth,
                                                      int budget,
                                                      std::uint64_t seed) {
  if (depth < 0) throw std::invalid_argument("coverage_experiment: depth < 0");
  SphereGrid grid(grid_cells);
  OrbitEngine engine(spec, OrbitEngine::Mode::Mixed, budget, seed);
  engine.seed_from_generators();
  std::vector<CoveragePoint> curve;
  long long inf_total = engine.bin_last_layer(grid);
  curve.push_back({0, grid.coverage_fraction(), inf_total});
  for (int d = 1; d <= depth; ++d) {
    engine.step();
    inf_total += engine.bin_last_layer(grid);
    curve.push_back({d, grid.coverage_fraction(), inf_total});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Julia-set equality comparator
// ---------------------------------------------------------------------------

enum class CompareVerdict { Equal, Distinct, Inconclusive };

inline const char* to_string(CompareVerdict v) {
  switch (v) {
    case CompareVerdict::Equal: return "equal";
    case CompareVerdict::Distinct: return "distinct";
    case CompareVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CompareResult {
  CompareVerdict verdict = CompareVerdict::Inconclusive;
  std::optional<SpherePoint> witness;
  double witness_green_own = 0.0;    // Green value under the witness's own map
  double witness_green_other = 0.0;  // Green value under the other map
  bool hausdorff_within_tol = false;
  bool hausdorff_within_3tol = false;
};

inline constexpr std::uint64_t kCompareDefaultSeed = 0x5EED0C0FFEEULL;

// Samples both Julia sets by inverse iteration. A witness is a cloud point
// of one map that stays bounded under that map (Green value ~ 0) but has
// Green value above tol under the other: it lies in the Julia set of one
// map and the unbounded Fatou component of the other. Equal needs small
// bidirectional Hausdorff distance and no witness; a witness on clouds that
// nevertheless look identical within 3*tol is contradictory evidence, so
// the verdict is inconclusive rather than a guess.
//
// Cloud seeds are derived from the coefficient hash, so identical maps get
// identical clouds. For genuinely equal Julia sets the sample Hausdorff
// distance scales like (diameter/samples) * log(samples); at tol = 1e-3
// that asks for samples around 2e5.
inline CompareResult julia_compare(const Polynomial& f, const Polynomial& g,
                                   int samples, double tol,
                                   std::uint64_t seed = kCompareDefaultSeed) {
  if (f.degree() < 2 || g.degree() < 2) {
    throw std::invalid_argument("julia_compare: degree < 2");
  }
  if (samples < 2) throw std::invalid_argument("julia_compare: samples < 2");
  if (!(tol > 0)) throw std::invalid_argument("julia_compare: tol <= 0");

  auto cloud_of = [&](const Polynomial& p, std::uint64_t s) {
    int fill = 0;
    long long size = 1;
    while (size < samples && fill < 64) {
      size *= p.degree();
      ++fill;
    }
    return julia_cloud_single(p, fill + 8, samples, s);
  };
  const SetApprox cloud_f = cloud_of(f, mix64(seed, poly_hash(f)));
  const SetApprox cloud_g = cloud_of(g, mix64(seed, poly_hash(g)));

  const double cell = 0.75 * tol;  // 3*tol queries stay within the index range
  NeighborIndex index_f(cloud_f.points, cell);
  NeighborIndex index_g(cloud_g.points, cell);
  const bool h_tol = directed_within(cloud_f.points, index_g, tol) &&
                     directed_within(cloud_g.points, index_f, tol);
  const bool h_3tol =
      h_tol || (directed_within(cloud_f.points, index_g, 3 * tol) &&
                directed_within(cloud_g.points, index_f, 3 * tol));

  CompareResult result;
  result.hausdorff_within_tol = h_tol;
  result.hausdorff_within_3tol = h_3tol;

  bool have_witness = false;
  auto scan = [&](const SetApprox& own_cloud, const Polynomial& own,
                  const Polynomial& other) {
    for (const auto& z : own_cloud.points) {
      const GreenEstimate own_g = green_value(own, z);
      const GreenEstimate other_g = green_value(other, z);
      if (own_g.value <= tol && other_g.value > tol) {
        if (!have_witness || other_g.value > result.witness_green_other) {
          have_witness = true;
          result.witness = z;
          result.witness_green_own = own_g.value;
          result.witness_green_other = other_g.value;
        }
      }
    }
  };
  scan(cloud_f, f, g);
  scan(cloud_g, g, f);

  if (!have_witness) {
    result.verdict = h_tol ? CompareVerdict::Equal : CompareVerdict::Inconclusive;
    if (!h_tol) result.witness.reset();
  } else {
    result.verdict = h_3tol ? CompareVerdict::Inconclusive : CompareVerdict::Distinct;
  }
  return result;
}

}  // namespace semijulia
