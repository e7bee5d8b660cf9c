#include <cmath>
#include <random>

#include "doctest.h"
#include "rotacover/cantor.hpp"
#include "rotacover/errors.hpp"

using namespace rotacover;

namespace {

const Arc kRoot{0.0, 6.0};

const CantorReport& small_run() {
  static const CantorReport rep = run_construction(kRoot, 4);
  return rep;
}

StageMeasure stage_from(const StageRecord& rec) {
  StageMeasure s;
  s.root = kRoot;
  s.arcs = rec.arcs;
  s.n = rec.n;
  s.R = rec.R;
  return s;
}

// Peak over mean of the standard bump profile.
double bump_peak_ratio() { return 2.0 * std::exp(-1.0) / standard_bump_integral(); }

// Largest |μ̂| at random points of the annulus, by direct quadrature.
double random_sup(const std::vector<SmoothBump>& arcs, double lo, double hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(lo, hi), w(0, kTwoPi);
  const CircleMeasure m = BumpMeasure{arcs};
  double best = 0.0;
  for (int i = 0; i < count; ++i) best = std::max(best, std::abs(measure_ft(m, from_polar(r(rng), w(rng)))));
  return best;
}

}  // namespace

TEST_CASE("initial stage") {
  const StageMeasure s = init_measure(Arc{0, 1});
  CHECK(s.arcs.size() == 1);
  CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(measure_ft(BumpMeasure{s.arcs}, {0, 0}) - 1.0) < 1e-12);
  CHECK(s.n == 1);
  CHECK_NOTHROW(validate(s));
  CHECK_THROWS_AS(init_measure(Arc{0, kTwoPi}), PreconditionError);
}

TEST_CASE("stage validation") {
  StageMeasure s = init_measure(Arc{0, 1});
  s.arcs.front().mass = 0.9;
  CHECK_THROWS_AS(validate(s), InvariantFailure);
  s = init_measure(Arc{0, 1});
  s.arcs = {SmoothBump{Arc{0, 0.2}, 0.5, 0}, SmoothBump{Arc{0.1, 0.3}, 0.5, 0}};
  CHECK_THROWS_AS(validate(s), InvariantFailure);  // out of order
  s.arcs = {SmoothBump{Arc{0.1, 0.3}, 0.5, 0}, SmoothBump{Arc{0, 0.2}, 0.5, 0}};
  CHECK_THROWS_AS(validate(s), InvariantFailure);  // overlapping
  s.arcs = {SmoothBump{Arc{0.9, 0.3}, 1.0, 0}};
  CHECK_THROWS_AS(validate(s), InvariantFailure);  // outside the root
}

TEST_CASE("first threshold") {
  StageMeasure s = init_measure(kRoot);
  const RnEvidence ev = choose_Rn(s);
  CHECK(ev.R >= 1.0);
  CHECK(std::isfinite(ev.R));
  REQUIRE(ev.octave_sups.size() == 3);
  for (double v : ev.octave_sups) CHECK(v <= 1.0);
  CHECK(ev.tail_slope <= 0.0);
}

TEST_CASE("thresholds hold at independent points") {
  for (const StageRecord& rec : small_run().stages) {
    const double sup = random_sup(rec.arcs, rec.R, 8 * rec.R, 300, 17 + rec.n);
    // Sampled grids under-estimate; random points may land a little higher.
    CHECK(sup <= 1.05 / rec.n);
  }
}

TEST_CASE("threshold respects the frequency budget") {
  StageMeasure s = init_measure(Arc{0, 1});
  s.n = 3;  // 1/3 forces R beyond a tiny budget
  CantorOptions o;
  o.r_budget = 16;
  CHECK_THROWS_AS(choose_Rn(s, o), BudgetExceeded);
}

TEST_CASE("refinement step") {
  const auto& st = small_run().stages;
  for (std::size_t i = 0; i + 1 < st.size(); ++i) {
    const StageMeasure cur = stage_from(st[i]);
    const RefineResult r = refine_step(cur);
    CHECK(r.N == st[i].N);
    CHECK(r.next.arcs.size() == cur.arcs.size() - 1 + r.N);
    CHECK(r.next.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.diff_sup <= r.diff_bound);
    CHECK(r.diff_bound == doctest::Approx(std::ldexp(1.0, -cur.n) / (2.0 * cur.n)));
    // Untouched arcs stay; new ones are shorter than the old minimum.
    for (std::size_t k = 1; k < cur.arcs.size(); ++k) CHECK(r.next.arcs[k - 1].arc.start == cur.arcs[k].arc.start);
    for (std::size_t k = cur.arcs.size() - 1; k < r.next.arcs.size(); ++k)
      CHECK(r.next.arcs[k].arc.length < cur.arcs.back().arc.length);
    // The new pieces carry the old first arc's mass piece by piece.
    const double piece = cur.arcs.front().arc.length / r.N;
    for (int k = 0; k + 1 < r.N; ++k) {
      const SmoothBump& b = r.next.arcs[cur.arcs.size() - 1 + k];
      CHECK(b.mass == doctest::Approx(bump_mass_on(cur.arcs.front(), cur.arcs.front().arc.start + k * piece, piece))
                          .epsilon(1e-12));
    }
    // Dyadic bound rechecked at random points by direct quadrature.
    std::mt19937_64 rng(i);
    std::uniform_real_distribution<double> rad(0, cur.R), ang(0, kTwoPi);
    const CircleMeasure a = BumpMeasure{cur.arcs}, b = BumpMeasure{r.next.arcs};
    for (int k = 0; k < 200; ++k) {
      const Vec2 xi = from_polar(rad(rng), ang(rng));
      CHECK(std::abs(measure_ft(a, xi) - measure_ft(b, xi)) <= std::ldexp(1.0, -cur.n) / cur.n);
    }
  }
}

TEST_CASE("refinement needs a threshold") {
  const StageMeasure s = init_measure(kRoot);
  CHECK_THROWS_AS(refine_step(s), PreconditionError);
}

TEST_CASE("construction history") {
  const auto& st = small_run().stages;
  REQUIRE(st.size() == 4);
  double prev_R = 0.0;
  for (const StageRecord& rec : st) {
    CHECK(rec.R >= rec.n);
    CHECK(rec.R >= prev_R);
    prev_R = rec.R;
    CHECK(rec.envelope == doctest::Approx(2.0 / rec.n + rec.top_mass));
    double mass = 0.0;
    for (const SmoothBump& b : rec.arcs) mass += b.mass;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.arcs.size() == rec.arc_count);
  }
  CHECK(st.back().N == 0);
  for (std::size_t i = 3; i < st.size(); ++i) CHECK(st[i].envelope <= st[i - 1].envelope);
  CHECK(support_halves(small_run()));
  // After m_n steps the first arc holds at most (peak/mean)/N of μ_n(I₁).
  for (std::size_t i = 0; i < st.size(); ++i) {
    const std::size_t j = i + st[i].arc_count;
    if (j >= st.size()) continue;
    int n_min = 1 << 30;
    for (std::size_t k = i; k < j; ++k) n_min = std::min(n_min, st[k].N);
    CHECK(st[j].top_mass <= bump_peak_ratio() / n_min * st[i].top_mass + 1e-12);
  }
}

TEST_CASE("single stage") {
  const CantorReport rep = run_construction(Arc{0, 1}, 1);
  REQUIRE(rep.stages.size() == 1);
  CHECK(rep.stages[0].envelope == doctest::Approx(3.0));
  CHECK(envelope_check(rep).pass);
  CHECK_THROWS_AS(run_construction(Arc{0, 1}, 0), PreconditionError);
}

TEST_CASE("envelope check") {
  const EnvelopeResult ok = envelope_check(small_run());
  CHECK(ok.pass);
  CHECK(ok.violations.empty());
  CHECK(ok.worst_excess <= kEnvelopeTolerance);
  CHECK(ok.samples > 0);

  CHECK(envelope_check(CantorReport{}).pass);

  const CantorReport bad = corrupt_stage(small_run(), 3);
  const EnvelopeResult fail = envelope_check(bad);
  CHECK_FALSE(fail.pass);
  REQUIRE_FALSE(fail.violations.empty());
  CHECK(fail.violations.front().k == 4);
  CHECK_THROWS_AS(corrupt_stage(small_run(), 9), PreconditionError);
}

TEST_CASE("support halving detects a stalled run") {
  CantorReport rep = small_run();
  rep.stages[1].support_length = rep.stages[0].support_length;
  CHECK_FALSE(support_halves(rep));
}
