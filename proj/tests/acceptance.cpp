// Acceptance suite: one check per headline requirement, each printed as a
// single PASS/FAIL line. Returns the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "semijulia/semijulia.hpp"

using namespace semijulia;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SplitMix master_rng(20240817);

// --- 1: the annulus example -------------------------------------------------

Outcome criterion_annulus() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const SemigroupSpec spec({parse_poly("z^2"), parse_poly("z^2/3")});
  const auto cloud = approx_J_semigroup(spec, 16, 100000, 42);

  double lo = HUGE_VAL, hi = 0.0;
  for (const auto& p : cloud.points) {
    if (p.is_infinity()) {
      out.require(false, "infinite point in J(G) cloud");
      continue;
    }
    lo = std::min(lo, p.abs());
    hi = std::max(hi, p.abs());
  }
  out.require(lo >= 1.0 - 1e-6, "point below |z| = 1 - 1e-6");
  out.require(hi <= 3.0 + 1e-6, "point above |z| = 3 + 1e-6");

  // radial coverage: 50 equally spaced log-radius targets matched to 0.02
  const double loghi = std::log(3.0);
  int matched = 0;
  for (int t = 0; t < 50; ++t) {
    const double target = loghi * t / 49.0;
    bool hit = false;
    for (const auto& p : cloud.points) {
      if (std::abs(std::log(p.abs()) - target) <= 0.02) {
        hit = true;
        break;
      }
    }
    matched += hit;
  }
  out.require(matched == 50, "log-radius targets matched: " +
                                 std::to_string(matched) + "/50");

  const double elapsed = seconds_since(start);
  out.require(elapsed <= 30.0, "runtime " + std::to_string(elapsed) + " s > 30 s");
  out.detail += (out.detail.empty() ? "" : "; ") + std::string("|z| in [") +
                std::to_string(lo) + ", " + std::to_string(hi) + "], " +
                std::to_string(elapsed) + " s";
  return out;
}

// --- 2: the equal-Julia example ---------------------------------------------

Outcome criterion_equal_julia_regime() {
  Outcome out;
  const SemigroupSpec spec({parse_poly("z^2"), parse_poly("z^4")});
  const int budget = 10000;
  double worst_dev = 0.0;
  for (const auto mode :
       {OrbitEngine::Mode::BackwardOnly, OrbitEngine::Mode::Mixed}) {
    OrbitEngine engine(spec, mode, budget, 42);
    SphereGrid grid(2048);
    engine.seed_from_generators();
    for (int depth = 0; depth <= 24; ++depth) {
      if (depth > 0) engine.step();
      for (const auto& p : engine.last_layer_points()) {
        if (p.is_infinity()) {
          out.require(false, "infinite point at depth " + std::to_string(depth));
          continue;
        }
        worst_dev = std::max(worst_dev, std::abs(p.abs() - 1.0));
      }
      engine.bin_last_layer(grid);
      if (grid.coverage_fraction() > 0.10) {
        out.require(false, "coverage " + std::to_string(grid.coverage_fraction()) +
                               " > 0.10 at depth " + std::to_string(depth));
        break;
      }
    }
  }
  out.require(worst_dev <= 1e-8,
              "radial deviation " + std::to_string(worst_dev) + " > 1e-8");
  char buf[64];
  std::snprintf(buf, sizeof buf, "max ||z|-1| = %.3g", worst_dev);
  out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  return out;
}

// --- 3: full-sphere coverage ------------------------------------------------

Outcome criterion_coverage() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const SemigroupSpec spec({parse_poly("z^2"), parse_poly("z^2/3")});
  const auto curve = coverage_experiment(spec, 2048, 24, 1000000, 42);

  double prev = 0.0;
  for (const auto& pt : curve) {
    out.require(pt.fraction >= prev, "coverage decreased at depth " +
                                         std::to_string(pt.depth));
    prev = pt.fraction;
  }
  int reach_depth = -1;
  for (const auto& pt : curve) {
    if (pt.fraction >= 0.95) {
      reach_depth = pt.depth;
      break;
    }
  }
  out.require(reach_depth >= 0 && reach_depth <= 24,
              "never reached coverage 0.95 (final " +
                  std::to_string(curve.back().fraction) + ")");
  out.require(curve[12].infinite_points > 0, "no infinity-class points by depth 12");

  const double elapsed = seconds_since(start);
  out.require(elapsed <= 60.0, "runtime " + std::to_string(elapsed) + " s > 60 s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "final %.4f, 0.95 at depth %d, %.1f s",
                curve.back().fraction, reach_depth, elapsed);
  out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  return out;
}

// --- 4: Green / Boettcher oracles -------------------------------------------

Outcome criterion_green_bottcher() {
  Outcome out;
  const Polynomial sq = parse_poly("z^2");
  const Polynomial cheb = parse_poly("z^2 - 2");
  const Polynomial third = parse_poly("z^2/3");

  for (double r : {1.5, 2.0, 10.0}) {
    const auto g = green_value(sq, SpherePoint(r, 0.0));
    out.require(std::abs(g.value - std::log(r)) <= 1e-9,
                "G_{z^2} off at |z| = " + std::to_string(r));
  }
  const double expected = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const auto g3 = green_value(cheb, SpherePoint(3.0, 0.0));
  out.require(std::abs(g3.value - expected) <= 1e-8, "G_{z^2-2}(3) off");

  for (const auto& p : {sq, cheb, third}) {
    const int k = p.degree();
    const double radius = escape_radius(p);
    for (int trial = 0; trial < 100; ++trial) {
      const Complex z = std::polar(master_rng.next_in(1.2 * radius, 6.0 * radius),
                                   master_rng.next_in(0.0, 2 * M_PI));
      const SpherePoint zp = SpherePoint::from_complex(z);
      const SpherePoint pz = eval(p, zp);
      const auto gz = green_value(p, zp);
      const auto gpz = green_value(p, pz);
      out.require(std::abs(gpz.value - k * gz.value) <=
                      1e-8 * std::max(1.0, std::abs(gpz.value)),
                  "Green functional equation");
      const auto phi = bottcher_value(p, zp);
      const auto phi_pz = bottcher_value(p, pz);
      Complex phik(1.0, 0.0);
      for (int t = 0; t < k; ++t) phik *= phi.value;
      out.require(std::abs(phi_pz.value - phik) <= 1e-8 * std::abs(phik),
                  "Boettcher functional equation");
      if (!out.pass) break;
    }
    if (!out.pass) break;
  }
  return out;
}

// --- 5: exact commutator suite ----------------------------------------------

Outcome criterion_commutator_suite() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  SplitMix rng(424242);
  for (int trial = 0; trial < 200 && out.pass; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(8));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    // c rational in [-10, -1/7]
    const long cd = 1 + static_cast<long>(rng.next_below(7));
    const long cn = -1 - static_cast<long>(rng.next_below(static_cast<std::uint64_t>(10 * cd - 1)));
    const LogDynParams params(j, m, Rational(cn, cd),
                              Rational(-1 - static_cast<long>(rng.next_below(4)),
                                       1 + static_cast<long>(rng.next_below(6))));
    const int n = 1 + static_cast<int>(rng.next_below(8));

    // r rational in [-100, log r* - r0)
    const Rational upper = params.rstar_log - params.r0();
    const long rd = 1 + static_cast<long>(rng.next_below(17));
    Rational r = upper - Rational(1 + static_cast<long>(rng.next_below(90 * rd)), rd);
    if (r < -100) r = upper - 1;

    const Rational expected = r - params.r0() + d_n_value(params, n);
    const Rational word = line_apply(params, commutator_word(n), r);
    out.require(word == expected, "commutator word mismatch");
    out.require(commutator_value(params, n, r) == expected, "closed form mismatch");

    Rational prev = params.r0();
    for (int i = 1; i <= n; ++i) {
      const Rational di = d_n_value(params, i);
      out.require(di > 0 && di <= prev, "d_n not decreasing in (0, r0]");
      prev = di;
    }

    try {
      const auto march = density_march(params, r, n);
      out.require(march.min_gap <= d_n_value(params, n), "march gap > d_n_max");
    } catch (const GuardViolation& e) {
      out.require(false, std::string("guard fired: ") + e.what());
    }
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed <= 5.0, "runtime " + std::to_string(elapsed) + " s > 5 s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "200 tuples, %.2f s", elapsed);
  out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  return out;
}

// --- 6: comparator ------------------------------------------------------------

Outcome criterion_comparator() {
  Outcome out;
  const auto equal =
      julia_compare(parse_poly("z^2"), parse_poly("z^4"), 200000, 1e-3, 42);
  out.require(equal.verdict == CompareVerdict::Equal, "(z^2, z^4) not equal");

  const auto same =
      julia_compare(parse_poly("z^2 - 2"), parse_poly("z^2 - 2"), 50000, 1e-3, 42);
  out.require(same.verdict == CompareVerdict::Equal, "(p, p) not equal");

  const auto distinct =
      julia_compare(parse_poly("z^2"), parse_poly("z^2/3"), 50000, 1e-3, 42);
  out.require(distinct.verdict == CompareVerdict::Distinct,
              "(z^2, z^2/3) not distinct");
  if (distinct.witness) {
    out.require(std::abs(distinct.witness->abs() - 3.0) <= 1e-6,
                "witness modulus off 3");
    out.require(std::abs(distinct.witness_green_other - std::log(3.0)) <= 1e-3,
                "witness Green value off log 3");
  } else {
    out.require(false, "no witness returned");
  }
  return out;
}

// --- 7: preimage robustness ---------------------------------------------------

Outcome criterion_preimages() {
  Outcome out;
  SplitMix rng(777);
  auto disc_coeff = [&rng]() {
    for (;;) {
      const double re = rng.next_in(-1.0, 1.0), im = rng.next_in(-1.0, 1.0);
      if (re * re + im * im <= 1.0) return Complex(re, im);
    }
  };
  double worst_residual_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int deg = 1 + static_cast<int>(rng.next_below(8));
    std::vector<Complex> c(static_cast<std::size_t>(deg) + 1);
    for (auto& v : c) v = disc_coeff();
    while (std::abs(c[0]) < 0.4) c[0] = disc_coeff();  // leading stays non-degenerate
    const Polynomial p(std::move(c));
    const SpherePoint w(rng.next_in(-2.0, 2.0), rng.next_in(-2.0, 2.0));
    const auto pre = preimages(p, w);
    out.require(static_cast<int>(pre.points.size()) == p.degree(),
                "preimage multiset size");
    const double scale = std::max({1.0, w.abs(), coefficient_scale(p)});
    worst_residual_ratio = std::max(worst_residual_ratio, pre.residual / scale);
    if (pre.residual > 1e-10 * scale) {
      out.require(false, "residual " + std::to_string(pre.residual) + " at trial " +
                             std::to_string(trial));
      break;
    }
  }

  int checked = 0;
  for (int trial = 0; checked < 10000; ++trial) {
    const int deg = 2 + static_cast<int>(rng.next_below(5));
    std::vector<Complex> c(static_cast<std::size_t>(deg) + 1);
    for (auto& v : c) v = disc_coeff();
    while (std::abs(c[0]) < 0.4) c[0] = disc_coeff();
    const Polynomial p(std::move(c));
    RootSolver solver(p);
    std::vector<Complex> roots;
    for (int s = 0; s < 25 && checked < 10000; ++s, ++checked) {
      const Complex z(rng.next_in(-1.5, 1.5), rng.next_in(-1.5, 1.5));
      const Complex w = eval(p, z);
      solver.solve(w, roots);
      double best = HUGE_VAL;
      for (const auto& root : roots) {
        best = std::min(best, chordal_dist(SpherePoint::from_complex(root),
                                           SpherePoint::from_complex(z)));
      }
      if (best > 1e-8) {
        out.require(false, "round-trip distance " + std::to_string(best));
        break;
      }
    }
    if (!out.pass) break;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst residual/scale %.2e", worst_residual_ratio);
  out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  return out;
}

// --- 8: circle lemma ----------------------------------------------------------

Outcome criterion_circle_lemma() {
  Outcome out;
  const auto a = circle_lemma_check(2, 0.5, 0.0, M_PI / 2, 1024);
  out.require(a.n == 3, "minimal n for (j=2, delta=pi/2) is " + std::to_string(a.n));
  const auto b = circle_lemma_check(3, 0.5, 0.0, 2 * M_PI / 3, 1024);
  out.require(b.n == 2, "minimal n for (j=3, delta=2pi/3) is " + std::to_string(b.n));

  SplitMix rng(31415);
  for (int trial = 0; trial < 50; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(3));
    const double radius = rng.next_in(0.45, 0.95);
    const double theta = rng.next_in(0.0, 2 * M_PI);
    const double delta = rng.next_in(0.3, 2 * M_PI);
    const auto rep = circle_lemma_check(j, radius, theta, delta, 512);
    if (rep.radius_rel_err > 1e-12) {
      out.require(false, "radius relative error " + std::to_string(rep.radius_rel_err));
      break;
    }
  }
  return out;
}

struct Criterion {
  const char* name;
  Outcome (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"example2-annulus", criterion_annulus},
      {"example1-equal-julia", criterion_equal_julia_regime},
      {"full-sphere-coverage", criterion_coverage},
      {"green-bottcher-oracles", criterion_green_bottcher},
      {"exact-commutator-suite", criterion_commutator_suite},
      {"julia-comparator", criterion_comparator},
      {"preimage-robustness", criterion_preimages},
      {"circle-lemma", criterion_circle_lemma},
  };

  int failures = 0;
  int index = 0;
  for (const auto& criterion : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criterion.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    std::printf("[%d] %-24s %s  (%.1f s)%s%s\n", index, criterion.name,
                out.pass ? "PASS" : "FAIL", elapsed, out.detail.empty() ? "" : "  ",
                out.detail.c_str());
    std::fflush(stdout);
    failures += !out.pass;
  }
  std::printf("%d/%d acceptance criteria passed\n",
              static_cast<int>(std::size(criteria)) - failures,
              static_cast<int>(std::size(criteria)));
  return failures;
}
