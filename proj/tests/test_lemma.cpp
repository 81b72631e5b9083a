#include <catch2/catch_amalgamated.hpp>

#include "semijulia/lemma.hpp"

#include <cmath>

#include "oracles.hpp"
#include "semijulia/rng.hpp"

using namespace semijulia;

namespace {

LogDynParams params(int j, int m, long cn, long cd, long rn = -1, long rd = 1) {
  return LogDynParams(j, m, Rational(cn, cd), Rational(rn, rd));
}

Rational random_rational(SplitMix& rng, long lo_num, long hi_num, long max_den) {
  const long den = 1 + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(max_den)));
  const long span = hi_num - lo_num;
  const long num = lo_num + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(span)));
  return Rational(num, den);
}

}  // namespace

TEST_CASE("line map letters") {
  const auto p = params(2, 2, -1, 1);
  CHECK(line_apply(p, {{{LineMap::T, 1}}}, Rational(-3)) == Rational(-6));
  const auto ps = params(2, 2, -1, 1);
  CHECK(line_apply(ps, {{{LineMap::S, 1}}}, Rational(-5)) == Rational(-11));
  // s^-1 after s is the identity, exactly
  SplitMix rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Rational r = random_rational(rng, -500, 500, 97);
    CHECK(line_apply(p, {{{LineMap::S, 1}, {LineMap::SInv, 1}}}, r) == r);
    CHECK(line_apply(p, {{{LineMap::T, 1}, {LineMap::TInv, 1}}}, r) == r);
  }
}

TEST_CASE("closed forms equal iterated application") {
  SplitMix rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(8));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    const Rational c = random_rational(rng, -70, -1, 13);
    const LogDynParams p(j, m, c, Rational(-1, 7));
    const Rational r = random_rational(rng, -300, 300, 31);
    for (int n = 0; n <= 20; n += 5) {
      CHECK(s_pow(p, n, r) == line_apply(p, {{{LineMap::S, n}}}, r));
      CHECK(t_pow(p, n, r) == line_apply(p, {{{LineMap::T, n}}}, r));
      CHECK(s_pow(p, -n, r) == line_apply(p, {{{LineMap::SInv, n}}}, r));
      CHECK(t_pow(p, -n, r) == line_apply(p, {{{LineMap::TInv, n}}}, r));
    }
  }
}

TEST_CASE("d_n values against the exact composition oracle") {
  // j=2, m=3, r0=1 (c = -2): d_1 = (3 + 2 - 1)/6 = 2/3
  const LogDynParams p23(2, 3, Rational(-2), Rational(-1, 8));
  CHECK(d_n_value(p23, 1) == Rational(2, 3));

  // j=m=2, r0=1 (c = -1): d_1 = 3/4, oracle composition at r=-5 gives -21/4
  const LogDynParams p22(2, 2, Rational(-1), Rational(-1, 8));
  CHECK(d_n_value(p22, 1) == Rational(3, 4));
  const Rational oracle = oracles::fold_line_word(
      2, 2, Rational(-1), {{1, 1}, {0, 1}, {3, 1}, {2, 1}}, Rational(-5));
  CHECK(oracle == Rational(-21, 4));
  CHECK(commutator_value(p22, 1, Rational(-5)) == oracle);

  // d_30 for j=m=2, r0=1 is (2^31 - 1)/2^60 < 1e-8
  const BigInt num = (BigInt(1) << 31) - 1;
  const BigInt den = BigInt(1) << 60;
  CHECK(d_n_value(p22, 30) == Rational(num, den));
  CHECK(d_n_value(p22, 30) < Rational(1, 100000000));
}

TEST_CASE("d_n is strictly decreasing within (0, r0]") {
  SplitMix rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(8));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    const Rational c = random_rational(rng, -40, -1, 9);
    const LogDynParams p(j, m, c, Rational(-1, 9));
    Rational prev = p.r0();
    CHECK(d_n_value(p, 1) <= p.r0());
    for (int n = 1; n <= 30; ++n) {
      const Rational dn = d_n_value(p, n);
      CHECK(dn > 0);
      CHECK(dn <= prev);
      if (n > 1) CHECK(dn < prev);
      prev = dn;
    }
  }
}

TEST_CASE("commutator identity on random tuples") {
  SplitMix rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(8));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    const Rational c = random_rational(rng, -70, -1, 7);
    const LogDynParams p(j, m, c, Rational(-1, 7));
    const int n = 1 + static_cast<int>(rng.next_below(8));
    const Rational r = random_rational(rng, -100, -1, 23) - p.r0();

    // independent oracle: hand-rolled affine fold of the explicit word
    const Rational oracle = oracles::fold_line_word(
        j, m, c, {{1, n}, {0, n}, {3, n}, {2, n}}, r);
    CHECK(commutator_value(p, n, r) == oracle);
    CHECK(oracle == r - p.r0() + d_n_value(p, n));

    // reversed composition is the exact inverse
    const Rational back = commutator_inverse_value(p, n, commutator_value(p, n, r));
    CHECK(back == r);
    CHECK(commutator_inverse_value(p, n, r) == r + p.r0() - d_n_value(p, n));
  }
}

TEST_CASE("example: j=2 m=3 c=-2 n=1 at r=0 gives -1/3") {
  const LogDynParams p(2, 3, Rational(-2), Rational(-1, 100));
  CHECK(p.r0() == Rational(1));
  CHECK(commutator_value(p, 1, Rational(0)) == Rational(-1, 3));
}

TEST_CASE("density march example with min gap d_10") {
  const LogDynParams p(2, 2, Rational(-1), Rational(-1));
  const auto march = density_march(p, Rational(-10), 10);
  const Rational d10(2047, 1048576);
  CHECK(march.min_gap <= d10);
  CHECK(march.limit_point == Rational(-11));
  // descending sequence r_n' strictly decreasing toward r' - r0
  REQUIRE(march.descending.size() == 10);
  for (std::size_t i = 0; i < march.descending.size(); ++i) {
    CHECK(march.descending[i] == Rational(-11) + d_n_value(p, static_cast<int>(i) + 1));
    if (i > 0) CHECK(march.descending[i] < march.descending[i - 1]);
  }
  // the limit point is present in the emitted set
  CHECK(std::find(march.points.begin(), march.points.end(), Rational(-11)) !=
        march.points.end());
}

TEST_CASE("density march first generation") {
  const LogDynParams p(2, 2, Rational(-1), Rational(-1));
  const auto march = density_march(p, Rational(-10), 1);
  // exactly {r'-r0, r'-r0+d1, r', r'+d1}
  const Rational d1 = d_n_value(p, 1);
  const std::vector<Rational> expected{Rational(-11), Rational(-11) + d1,
                                       Rational(-10), Rational(-10) + d1};
  CHECK(march.points == expected);
}

TEST_CASE("density march guard never fires on valid inputs") {
  SplitMix rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(8));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    const Rational c = random_rational(rng, -40, -1, 7);
    const LogDynParams p(j, m, c, random_rational(rng, -20, -1, 5));
    const Rational rp = p.rstar_log - p.r0() - (Rational(1) + random_rational(rng, 1, 50, 9));
    const int n_max = 1 + static_cast<int>(rng.next_below(6));
    const auto march = density_march(p, rp, n_max);
    CHECK(march.min_gap <= d_n_value(p, n_max));
    CHECK(march.points.front() == march.limit_point);
  }
}

TEST_CASE("guarded evaluation rejects excursions out of I") {
  const LogDynParams p(2, 2, Rational(-1), Rational(-1));
  // t^-1 pulls -3/2 to -3/4 > log r* = -1
  CHECK_THROWS_AS(line_apply_guarded(p, {{{LineMap::TInv, 1}}}, Rational(-3, 2)),
                  GuardViolation);
  CHECK_THROWS_AS(line_apply_guarded(p, {{{LineMap::T, 1}}}, Rational(0)),
                  GuardViolation);  // start outside I
  CHECK(line_apply_guarded(p, {{{LineMap::T, 1}}}, Rational(-2)) == Rational(-4));
  // precondition of the march itself
  CHECK_THROWS_AS(density_march(p, Rational(-3, 2), 3), std::invalid_argument);
}

TEST_CASE("circle lemma minimal expansion exponent") {
  const auto a = circle_lemma_check(2, 0.5, 0.3, M_PI / 2, 2048);
  CHECK(a.n == 3);  // 2^2 * pi/2 = 2 pi is not enough, 2^3 * pi/2 is
  CHECK(a.onto);
  const auto b = circle_lemma_check(3, 0.7, -0.2, 2 * M_PI / 3, 2048);
  CHECK(b.n == 2);
  CHECK(b.onto);
  const auto c = circle_lemma_check(2, 0.5, 0.0, 2 * M_PI, 2048);
  CHECK(c.n == 1);
  CHECK(c.onto);
}

TEST_CASE("circle lemma image radius within 1e-12 relative") {
  SplitMix rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const int j = 2 + static_cast<int>(rng.next_below(3));
    const double radius = rng.next_in(0.45, 0.95);
    const double theta = rng.next_in(0.0, 2 * M_PI);
    const double delta = rng.next_in(0.3, 2 * M_PI);
    const auto report = circle_lemma_check(j, radius, theta, delta, 512);
    CHECK(report.radius_rel_err <= 1e-12);
    CHECK(report.max_angular_gap <= report.gap_bound);
    const double expected = std::pow(radius, std::pow(double(j), report.n));
    CHECK(std::abs(report.expected_radius - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("monomial rigidity") {
  const auto ok = monomial_rigidity_check(parse_poly("0.5*z^2"), {0.2, 0.5, 0.8}, 512);
  CHECK(ok.consistent);
  CHECK(ok.a == Complex(0.5, 0.0));
  CHECK(ok.power == 2);

  const auto im = monomial_rigidity_check(parse_poly("i*z^3"), {0.3, 0.6}, 512);
  CHECK(im.consistent);
  CHECK(im.a == Complex(0.0, 1.0));
  CHECK(im.power == 3);

  // |L| = 0.25 |1 + 0.1 z| on |z| = 0.5: spread 0.25 * (1.05 - 0.95) = 0.025
  const auto bad =
      monomial_rigidity_check(parse_poly("z^2 + 0.1*z^3"), {0.5}, 512);
  CHECK(!bad.consistent);
  REQUIRE(bad.witness_radius.has_value());
  CHECK(*bad.witness_radius == 0.5);
  CHECK(std::abs(bad.modulus_spread - 0.025) <= 1e-3);

  CHECK_THROWS_AS(monomial_rigidity_check(parse_poly("z^2 + 1"), {0.5}, 512),
                  std::invalid_argument);
  CHECK_THROWS_AS(monomial_rigidity_check(parse_poly("z^2"), {1.5}, 512),
                  std::invalid_argument);
}

TEST_CASE("monomial pair julia radius") {
  CHECK(monomial_pair_julia_radius(Complex(0.0, 1.0), 5) == 1.0);
  CHECK(std::abs(monomial_pair_julia_radius(Complex(1.0 / 3.0, 0.0), 2) - 3.0) <=
        1e-12);
  CHECK(std::abs(monomial_pair_julia_radius(Complex(4.0, 0.0), 3) - 0.5) <= 1e-12);
  CHECK_THROWS_AS(monomial_pair_julia_radius(Complex(0.0, 0.0), 2),
                  std::invalid_argument);
}

TEST_CASE("rational serialization") {
  CHECK(rational_str(Rational(-21, 4)) == "-21/4");
  CHECK(rational_str(Rational(5)) == "5/1");
  CHECK(rational_str(Rational(2, 6)) == "1/3");
}
