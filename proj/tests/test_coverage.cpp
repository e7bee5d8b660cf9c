#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rotacover/coverage.hpp"

using namespace rotacover;

namespace {

const Basis kZ2{{1, 0}, {0, 1}};

// Exact verdict from a dense θ sample; only ever errs towards "not covered".
bool sampled_covered(Vec2 x, const Arc& arc, const Basis& b, double eps, int samples) {
  return oracle::sampled_arc_dist(b, x, arc.start, arc.length, samples) < eps;
}

}  // namespace

TEST_CASE("dist_to_lattice examples") {
  const Lattice z2 = Lattice::integer();
  CHECK(dist_to_lattice(z2, {0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)));
  CHECK(dist_to_lattice(z2, {1, 0}) == 0.0);
  const Lattice skew({{2, 0}, {1, 2}});
  CHECK(dist_to_lattice(skew, {1, 1}) == doctest::Approx(oracle::brute_dist({{2, 0}, {1, 2}}, {1, 1})));
  CHECK(dist_to_lattice(skew, {1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("dist_to_lattice agrees with brute force") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Basis b = oracle::random_basis(rng);
    const Lattice lat(b);
    const Vec2 x{u(rng), u(rng)};
    CHECK(dist_to_lattice(lat, x) == doctest::Approx(oracle::brute_dist(lat.reduced_basis(), x, 8)));
  }
}

TEST_CASE("covers_point examples") {
  const Lattice z2 = Lattice::integer();
  CHECK(covers_point({1, 0}, AngleSet{make_finite({0})}, z2, 0.1) == Verdict::covered);
  CHECK(covers_point({0.5, 0.5}, AngleSet{make_finite({0})}, z2, 0.5) == Verdict::uncovered);
  CHECK(oracle::brute_dist(kZ2, rotate({0.5, 0.5}, -kPi / 4)) == doctest::Approx(1.0 - std::sqrt(0.5)));
  CHECK(covers_point({0.5, 0.5}, AngleSet{make_finite({kPi / 4})}, z2, 0.3) == Verdict::covered);
  CHECK(covers_point({10, 0}, AngleSet{Arc::make(0, kTwoPi)}, z2, 0.1) == Verdict::covered);
  CHECK_THROWS_AS(covers_point({1, 0}, AngleSet{make_finite({0})}, z2, 0.0), PreconditionError);
}

TEST_CASE("points within the margin of the boundary are ambiguous") {
  const Lattice z2 = Lattice::integer();
  CHECK(covers_point({1.3, 0}, AngleSet{make_finite({0})}, z2, 0.3) == Verdict::ambiguous);
  CHECK(covers_point({1.3 + 1e-6, 0}, AngleSet{make_finite({0})}, z2, 0.3) == Verdict::uncovered);
  CHECK(covers_point({1.3 - 1e-6, 0}, AngleSet{make_finite({0})}, z2, 0.3) == Verdict::covered);
}

TEST_CASE("rotation equivariance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice z2 = Lattice::integer();
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec2 x = from_polar(40.0 * u(rng), kTwoPi * u(rng));
    const double phi = kTwoPi * u(rng);
    const double eps = 0.05 + 0.3 * u(rng);
    AngleSet set = trial % 2 == 0 ? AngleSet{make_finite({kTwoPi * u(rng), kTwoPi * u(rng), kTwoPi * u(rng)})}
                                  : AngleSet{Arc::make(kTwoPi * u(rng), 0.5 * u(rng) + 1e-3)};
    const Verdict a = covers_point(x, set, z2, eps);
    const Verdict b = covers_point(rotate(x, phi), shifted(set, phi), z2, eps);
    if (a == Verdict::ambiguous || b == Verdict::ambiguous) continue;
    ++compared;
    CHECK(a == b);
  }
  CHECK(compared > 990);
}

TEST_CASE("monotonicity in the angle set and in epsilon") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice lat({{1, 0}, {0.3, 1.1}});
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 x = from_polar(30.0 * u(rng), kTwoPi * u(rng));
    const double start = kTwoPi * u(rng);
    const double len = 0.2 * u(rng) + 1e-3;
    const Arc small = Arc::make(start + 0.25 * len, 0.5 * len);
    const Arc big = Arc::make(start, len);
    if (covers_point(x, AngleSet{small}, lat, 0.2) == Verdict::covered) {
      CHECK(covers_point(x, AngleSet{big}, lat, 0.2) == Verdict::covered);
    }
    const FiniteAngles f1 = make_finite({start});
    const FiniteAngles f2 = make_finite({start, start + len});
    if (covers_point(x, AngleSet{f1}, lat, 0.2) == Verdict::covered) {
      CHECK(covers_point(x, AngleSet{f2}, lat, 0.2) == Verdict::covered);
      CHECK(covers_point(x, AngleSet{f1}, lat, 0.25) == Verdict::covered);
    }
  }
}

TEST_CASE("adding a sequence limit never uncovers a point") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice z2 = Lattice::integer();
  AngleSequence seq;
  seq.limit = 0.4;
  for (int k = 1; k <= 12; ++k) seq.angles.push_back(0.4 + std::pow(0.5, k));
  AngleSupport without{seq.angles, {}};
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 x = from_polar(20.0 * u(rng), kTwoPi * u(rng));
    if (covers_point(x, without, z2, 0.2) == Verdict::covered) {
      CHECK(covers_point(x, AngleSet{seq}, z2, 0.2) == Verdict::covered);
    }
  }
}

TEST_CASE("arc semantics agree with dense angle sampling") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice z2 = Lattice::integer();
  const Arc arc = Arc::make(0.0, 0.5);
  int contradictions = 0;
  int ambiguous = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 x = from_polar(5.0 + 25.0 * u(rng), kTwoPi * u(rng));
    const Verdict v = covers_point(x, AngleSet{arc}, z2, 0.25);
    const bool sampled = sampled_covered(x, arc, kZ2, 0.25, 10000);
    if (v == Verdict::ambiguous) ++ambiguous;
    if (v == Verdict::uncovered && sampled) ++contradictions;
    // Dense sampling resolves ε-balls of radius ≫ 30·(0.5/10⁴), so a covered
    // verdict with a comfortable margin must be seen by the sample too.
    if (v == Verdict::covered) {
      const double d = min_rotated_distance(x, support_of(AngleSet{arc}), z2, 1.0).distance;
      if (d < 0.25 - 1e-3) CHECK(sampled);
    }
  }
  CHECK(contradictions == 0);
  CHECK(ambiguous == 0);
}

TEST_CASE("minimizing angle of an arc is a genuine witness") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice lat({{1.2, 0.1}, {0.4, 0.9}});
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 x = from_polar(3.0 + 30.0 * u(rng), kTwoPi * u(rng));
    const Arc arc = Arc::make(kTwoPi * u(rng), 0.4 * u(rng) + 1e-3);
    const RotatedDistance r = min_rotated_distance(x, support_of(AngleSet{arc}), lat, 2.0);
    if (r.distance >= 2.0) continue;
    CHECK(distance_to_arc(r.angle, arc) <= 1e-12);
    CHECK(dist_to_lattice(lat, rotate(x, -r.angle)) == doctest::Approx(r.distance).epsilon(1e-9));
    CHECK(r.distance <= oracle::sampled_arc_dist(lat.reduced_basis(), x, arc.start, arc.length, 2000) + 1e-12);
  }
}

TEST_CASE("verify_region: full rotation covers an annulus") {
  const Lattice z2 = Lattice::integer();
  const AngleSet full{Arc::make(0, kTwoPi)};
  const PolarBox region{10, 11, 0, kTwoPi};
  const CoverageReport r = verify_region(full, z2, 0.2, region, 10);
  CHECK(r.fully_covered());
  CHECK(r.total_area() == doctest::Approx(region.area()));

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 x = from_polar(10.0 + u(rng), kTwoPi * u(rng));
    // A full rotation reaches every lattice point of norm within ε of |x|.
    bool hit = false;
    for (long i = -12; i <= 12 && !hit; ++i)
      for (long j = -12; j <= 12 && !hit; ++j) hit = std::abs(std::hypot(i, j) - norm(x)) < 0.2;
    CHECK(hit);
  }
}

TEST_CASE("verify_region: deep-hole translate is uncovered") {
  const Lattice z2 = Lattice::integer();
  const AngleSet zero{make_finite({0})};
  const Vec2 c{100.5, 0.5};
  const PolarBox region{norm(c) - 0.05, norm(c) + 0.05, polar_angle(c) - 5e-4, polar_angle(c) + 5e-4};
  const CoverageReport r = verify_region(zero, z2, 0.3, region, 6);
  CHECK(r.uncovered_area > 0.0);
  CHECK(!r.fully_covered());
}

TEST_CASE("verify_region agrees with a sampling oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice lat({{1, 0}, {0.5, 0.9}});
  const Arc arc = Arc::make(0.3, 0.05);
  const AngleSet set{arc};
  const PolarBox region{20, 22, 0.2, 0.6};
  const CoverageReport r = verify_region(set, lat, 0.15, region, 8);
  REQUIRE(!r.cells.empty());
  CHECK(r.total_area() == doctest::Approx(region.area()).epsilon(1e-9));
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double rad = 20.0 + 2.0 * u(rng);
    const double ang = 0.2 + 0.4 * u(rng);
    const CoverageCell* cell = nullptr;
    for (const CoverageCell& c : r.cells) {
      if (rad > c.box.r_lo && rad < c.box.r_hi && ang >= c.box.phi_lo && ang <= c.box.phi_hi) {
        cell = &c;
        break;
      }
    }
    if (cell == nullptr || cell->verdict == Verdict::ambiguous) continue;
    const Vec2 x = from_polar(rad, ang);
    const double d = oracle::sampled_arc_dist(lat.reduced_basis(), x, arc.start, arc.length, 64);
    const double exact = min_rotated_distance(x, support_of(set), lat, 1.0).distance;
    ++checked;
    if (cell->verdict == Verdict::covered) CHECK(exact < 0.15);
    if (cell->verdict == Verdict::uncovered) CHECK(d >= 0.15);
  }
  CHECK(checked > 5000);
}

TEST_CASE("verify_region preconditions") {
  const Lattice z2 = Lattice::integer();
  const AngleSet set{make_finite({0})};
  CHECK_THROWS_AS(verify_region(set, z2, 0.3, {1, 2, 0, 1}, 0), PreconditionError);
  CHECK_THROWS_AS(verify_region(set, z2, 0.3, {2, 1, 0, 1}, 3), PreconditionError);
}

TEST_CASE("find_hole_beyond examples") {
  const Lattice z2 = Lattice::integer();
  const Hole h = find_hole_beyond(make_finite({0}), z2, 0.3, 100, 0.35);
  CHECK(norm(h.center) >= 100.0);
  CHECK(dist_to_lattice(z2, h.center) >= 0.3 + 0.35);
  CHECK(norm(h.center - Vec2{100.5, 0.5}) < 1e-6);

  const Hole h2 = find_hole_beyond(make_finite({0, kPi / 2}), z2, 0.3, 100, 0.35);
  CHECK(norm(h2.center) >= 100.0);
  for (double t : {0.0, kPi / 2}) CHECK(oracle::brute_dist(kZ2, rotate(h2.center, -t)) >= 0.65);

  const FiniteAngles two = make_finite({0, 1.0});
  const Hole h3 = find_hole_beyond(two, z2, 0.3, 50, 0.05);
  CHECK(norm(h3.center) >= 50.0);
  for (double t : two.angles) {
    CHECK(oracle::brute_dist(kZ2, rotate(h3.center, -t)) - 0.3 - 0.05 >= h3.clearance - 1e-12);
  }
  CHECK(h3.clearance > 0.0);
}

TEST_CASE("find_hole_beyond errors") {
  const Lattice z2 = Lattice::integer();
  CHECK_THROWS_WITH_AS(find_hole_beyond(make_finite({0}), z2, 0.5, 10, 0.1),
                       doctest::Contains("theorem precondition violated"), PreconditionError);
  HoleSearchOptions tiny;
  tiny.max_rounds = 1;
  // ρ this large cannot fit: the deep hole of Z² is only √2/2 away from Λ.
  CHECK_THROWS_WITH_AS(find_hole_beyond(make_finite({0}), z2, 0.3, 10, 0.5, tiny),
                       doctest::Contains("no hole found within budget"), BudgetExceeded);
}

TEST_CASE("empirical_t0 examples") {
  const Lattice z2 = Lattice::integer();
  const auto t0 = empirical_t0(AngleSet{Arc::make(0, kTwoPi)}, z2, 0.3, 1.0, 50.0);
  REQUIRE(t0.has_value());
  CHECK(*t0 <= 2.0);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 x = from_polar(*t0 + (51.0 - *t0) * u(rng), kTwoPi * u(rng));
    CHECK(oracle::sampled_arc_dist(kZ2, x, 0.0, kTwoPi, 4096) < 0.3);
  }
  CHECK_THROWS_WITH_AS(empirical_t0(AngleSet{make_finite({0})}, z2, 0.3, 1.0, 50.0),
                       doctest::Contains("requires arc-type"), PreconditionError);
}
