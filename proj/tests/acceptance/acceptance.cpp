// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Arguments, if any, select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "rotacover/cantor.hpp"
#include "rotacover/constructions.hpp"
#include "rotacover/coverage.hpp"
#include "rotacover/fourier.hpp"
#include "rotacover/parallel.hpp"

using namespace rotacover;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages; passes when there are none.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 5) msg_ += (msg_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, msg_ + (failures_ > 5 ? " (+" + std::to_string(failures_ - 5) + " more)" : "")};
  }

 private:
  int failures_ = 0;
  std::string msg_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Distance from x to Z² by rounding each coordinate.
double z2_dist(Vec2 x) { return std::hypot(x.x - std::round(x.x), x.y - std::round(x.y)); }

double finite_clearance(const std::vector<double>& angles, const Hole& h, double eps) {
  double best = 1e300;
  for (double t : angles) best = std::min(best, z2_dist(rotate(h.center, -t)));
  return best - eps - h.radius;
}

// Lower bound for min over the arc of dist(R_{−θ}c, Z²): dense samples minus
// the Lipschitz slack |c|·spacing/2.
double arc_clearance_lower(const Hole& h, const Arc& arc, double eps, int samples = 2000) {
  double best = 1e300;
  for (int k = 0; k < samples; ++k) best = std::min(best, z2_dist(rotate(h.center, -(arc.start + arc.length * k / (samples - 1)))));
  return best - norm(h.center) * 0.5 * arc.length / (samples - 1) - eps - h.radius;
}

bool inside(const Arc& inner, const Arc& outer) {
  const double off = normalize_angle(inner.start - outer.start);
  return off + inner.length <= outer.length + 1e-12;
}

// --- 1 -----------------------------------------------------------------------

Outcome finite_sets_have_holes() {
  const Lattice z2 = Lattice::integer();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Tally t;
  double worst_time = 0.0, worst_clear = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(size(rng));
    for (double& v : a) v = angle(rng);
    HoleSearchOptions o;
    o.min_clearance = 0.02;
    const auto start = Clock::now();
    const Hole h = find_hole_beyond(make_finite(a), z2, 0.3, 50.0, 0.05, o);
    const double dt = seconds_since(start);
    worst_time = std::max(worst_time, dt);
    const double cl = finite_clearance(a, h, 0.3);
    worst_clear = std::min(worst_clear, cl);
    const std::string tag = "set " + std::to_string(trial);
    t.expect(norm(h.center) >= 50.0, tag + ": hole inside radius 50");
    t.expect(h.clearance >= 0.02, tag + ": reported clearance below 0.02");
    t.expect(cl >= 0.02 - 1e-12, tag + ": recheck clearance " + fmt("%.3g", cl));
    t.expect(std::abs(cl - h.clearance) <= 1e-9, tag + ": reported clearance differs from recheck");
    t.expect(dt <= 10.0, tag + ": search took " + fmt("%.1f s", dt));
  }
  return t.done("20 sets, min clearance " + fmt("%.4f", worst_clear) + ", slowest " + fmt("%.2f s", worst_time));
}

// --- 2 -----------------------------------------------------------------------

Outcome smeared_arc_covers() {
  const Lattice z2 = Lattice::integer();
  const AngleSet arc = Arc{0.0, 0.3};
  const auto start = Clock::now();
  const std::optional<double> t0 = empirical_t0(arc, z2, 0.25, 1.0, 500.0);
  if (!t0) return {false, "no finite t0 below 500"};
  Tally t;
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const double lo = *t0 + k;
    const CoverageReport r = verify_region(arc, z2, 0.25, PolarBox{lo, lo + 1.0, 0.0, kTwoPi}, 12);
    const std::string tag = "shell " + std::to_string(k);
    t.expect(r.uncovered_area == 0.0, tag + ": uncovered cells");
    t.expect(r.ambiguous_fraction() < 1e-3, tag + ": ambiguous fraction " + fmt("%.2e", r.ambiguous_fraction()));
    worst = std::max(worst, r.ambiguous_fraction());
  }
  const double dt = seconds_since(start);
  t.expect(dt <= 600.0, "took " + fmt("%.0f s", dt));
  return t.done("t0 = " + fmt("%.3f", *t0) + ", 30 shells, worst ambiguous fraction " + fmt("%.2e", worst) + ", " +
                fmt("%.1f s", dt));
}

// --- 3 -----------------------------------------------------------------------

Outcome good_sequence() {
  const Lattice z2 = Lattice::integer();
  const Arc interval{0.0, 1.0};
  const auto start = Clock::now();
  const GoodSequenceResult r = build_good_sequence(z2, 0.3, interval, 10.0, 10);
  const CheckResult check = check_good_sequence(r, z2);
  const double dt = seconds_since(start);
  Tally t;
  t.expect(check.ok, "re-verification: " + check.failure);
  // Ten scheduled shells; extension shells bridge radii between them.
  const auto scheduled = std::count_if(r.shells.begin(), r.shells.end(), [](const ShellRecord& s) { return !s.extension; });
  t.expect(scheduled == 10, "expected 10 scheduled shells, got " + std::to_string(scheduled));
  t.expect(std::abs(r.limit - 0.9) <= 1e-12, "limit is not end(I) − |I|/10");
  for (double a : r.angles) t.expect(a >= interval.start && a <= interval.start + interval.length, "angle outside I");
  for (std::size_t i = 1; i < r.angles.size(); ++i)
    t.expect(std::abs(r.angles[i] - r.limit) <= std::abs(r.angles[i - 1] - r.limit), "distance to limit increases");
  for (const ShellRecord& s : r.shells) {
    t.expect(inside(Arc{r.limit, 0.0}, s.arc), "shell arc misses the limit");
    for (double a : s.angles) t.expect(std::abs(a - r.limit) <= s.arc.length, "angle far from the limit");
  }
  const double first = r.shells.front().arc.length, last = r.shells.back().arc.length;
  t.expect(last <= 0.3 * first, "shell arcs do not shrink toward the limit");
  t.expect(dt <= 600.0, "took " + fmt("%.0f s", dt));
  return t.done(std::to_string(r.angles.size()) + " angles over " + std::to_string(r.shells.size()) + " shells, last arc " + fmt("%.4f", last) + ", " +
                fmt("%.1f s", dt));
}

// --- 4 -----------------------------------------------------------------------

void check_holes(Tally& t, const std::vector<Hole>& holes, const std::string& what) {
  for (std::size_t j = 0; j < holes.size(); ++j) {
    t.expect(norm(holes[j].center) >= static_cast<double>(j + 1), what + ": hole " + std::to_string(j) + " too close");
    for (std::size_t i = 0; i < j; ++i)
      t.expect(norm(holes[i].center - holes[j].center) > holes[i].radius + holes[j].radius,
               what + ": holes overlap");
  }
}

Outcome bad_constructions() {
  const Lattice z2 = Lattice::integer();
  Tally t;
  const BadSequenceResult seq = build_bad_sequence(z2, 0.3, 10);
  const CheckResult cs = check_bad_sequence(seq, z2, 0.3);
  t.expect(cs.ok, "sequence recheck: " + cs.failure);
  t.expect(seq.angles.size() == 10 && seq.holes.size() == 10, "sequence needs 10 angles and 10 holes");
  check_holes(t, seq.holes, "sequence");
  double worst_seq = 1e300;
  for (const Hole& h : seq.holes) worst_seq = std::min(worst_seq, finite_clearance(seq.angles, h, 0.3));
  t.expect(worst_seq > 0.0, "sequence hole hit by some angle");

  const PerfectSetResult ps = build_bad_perfect_set(z2, 0.3, 4);
  const CheckResult cp = check_perfect_set(ps, z2, 0.3);
  t.expect(cp.ok, "perfect set recheck: " + cp.failure);
  t.expect(ps.levels.size() == 5 && ps.levels.back().size() == 16, "depth 4 needs 16 leaf arcs");
  for (std::size_t n = 1; n < ps.levels.size(); ++n) {
    const auto& level = ps.levels[n];
    for (std::size_t i = 0; i < level.size(); ++i) {
      bool nested = false;
      for (const Arc& p : ps.levels[n - 1]) nested = nested || inside(level[i], p);
      t.expect(nested, "arc not inside a parent");
      for (std::size_t j = 0; j < i; ++j) t.expect(arcs_disjoint(level[i], level[j]), "arcs of a level overlap");
    }
  }
  t.expect(ps.holes.size() == 4, "perfect set needs one hole per level");
  check_holes(t, ps.holes, "perfect set");
  double worst_ps = 1e300;
  for (const Hole& h : ps.holes)
    for (const Arc& a : ps.levels.back()) worst_ps = std::min(worst_ps, arc_clearance_lower(h, a, 0.3));
  t.expect(worst_ps > 0.0, "perfect-set hole hit by a leaf arc");
  return t.done("10 holes (min clearance " + fmt("%.4f", worst_seq) + "), 16 leaf arcs (min clearance " +
                fmt("%.4f", worst_ps) + ")");
}

// --- 5 -----------------------------------------------------------------------

Outcome delta_scaling() {
  const Lattice z2 = Lattice::integer(), z2x2 = Lattice::diagonal(2.0, 2.0);
  Tally t;
  const double halving = delta_threshold(z2, 5e-4) / delta_threshold(z2, 1e-3);
  t.expect(halving >= 0.2375 && halving <= 0.2625, "δ(ε/2)/δ(ε) = " + fmt("%.4f", halving));
  std::string dens;
  for (double eps : {1e-3, 0.1}) {
    const double ratio = delta_threshold(z2x2, eps) / delta_threshold(z2, eps);
    t.expect(std::abs(ratio - 0.25) <= 0.05 * 0.25, "density ratio " + fmt("%.4f", ratio) + " at ε = " + fmt("%g", eps));
    dens += (dens.empty() ? "" : ", ") + fmt("%.4f", ratio);
  }
  return t.done("δ(ε/2)/δ(ε) = " + fmt("%.4f", halving) + ", δ(2Z²)/δ(Z²) = " + dens);
}

// --- 6 -----------------------------------------------------------------------

Outcome fourier_criterion() {
  const Lattice z2 = Lattice::integer();
  Tally t;
  const CircleMeasure arc = RestrictionMeasure{{Arc{0.0, 0.5}}};
  // Pick the smallest ε on a 0.05 grid whose δ exceeds the outermost probe sup.
  const auto [lo, hi] = default_probe_annuli().back();
  const double top = ft_sup_on_annulus(arc, lo, hi);
  double eps = 0.05;
  while (delta_threshold(z2, eps) <= top && eps < 10.0) eps += 0.05;
  const CriterionReport good = check_goodness_criterion(arc, z2, eps);
  t.expect(good.verdict == CriterionVerdict::passes, std::string("arc verdict ") + to_string(good.verdict));
  t.expect(good.delta > good.sups.back(), "δ not above the last sup");

  const CircleMeasure atoms = AtomicMeasure{{{0.0, 0.5}, {1.0, 0.5}}};
  const CriterionReport bad = check_goodness_criterion(atoms, z2, eps);
  t.expect(bad.verdict == CriterionVerdict::fails, std::string("two-atom verdict ") + to_string(bad.verdict));
  double low = 1.0;
  for (double s : bad.sups) low = std::min(low, s);
  t.expect(low > 0.9, "two-atom sup dropped to " + fmt("%.3f", low));
  t.expect(bad.annuli.back().second >= 1000.0, "probes stop below r = 1000");
  return t.done("arc passes at ε = " + fmt("%.2f", eps) + " (δ = " + fmt("%.4f", good.delta) + ", outer sup " +
                fmt("%.4f", top) + "); two atoms fail, min sup " + fmt("%.4f", low));
}

// --- 7 -----------------------------------------------------------------------

Outcome cantor() {
  const auto start = Clock::now();
  const CantorReport rep = run_construction(Arc{0.0, 6.0}, 6);
  const double build = seconds_since(start);
  Tally t;
  t.expect(rep.stages.size() == 6, "expected 6 stages");
  for (const StageRecord& s : rep.stages) {
    double mass = 0.0;
    for (const SmoothBump& b : s.arcs) mass += b.mass;
    t.expect(std::abs(mass - 1.0) <= 1e-12, "stage " + std::to_string(s.n) + " mass " + fmt("%.15f", mass));
  }
  t.expect(support_halves(rep), "support does not halve per cycle");
  const EnvelopeResult env = envelope_check(rep, SampleGrid{0, 0.2, 0.5});
  t.expect(env.pass, "envelope check failed, worst excess " + fmt("%.3g", env.worst_excess));
  const EnvelopeResult neg = envelope_check(corrupt_stage(rep, rep.stages.size() - 1));
  t.expect(!neg.pass, "corrupted stage passed the envelope check");
  std::string rs;
  for (const StageRecord& s : rep.stages) rs += (rs.empty() ? "" : ",") + fmt("%g", s.R);
  return t.done("R_n = " + rs + ", worst excess " + fmt("%.3g", env.worst_excess) + ", negative control excess " +
                fmt("%.3g", neg.worst_excess) + ", " + fmt("%.0f s", seconds_since(start)) + " (build " +
                fmt("%.0f s", build) + ")");
}

// --- 8 -----------------------------------------------------------------------

// max over rationals p/q (q ≤ 2K) of min_k dist(k p/q, Z), in exact integers.
std::pair<long, long> worst_rational(const std::vector<int>& factors) {
  long K = 0;
  for (int k : factors) K = std::max<long>(K, k);
  std::pair<long, long> best{0, 1};
  for (long q = 1; q <= 2 * K; ++q)
    for (long p = 0; p <= q; ++p) {
      long m = q;
      for (int k : factors) {
        const long r = (static_cast<long>(k) * p) % q;
        m = std::min({m, r, q - r});
      }
      if (m * best.second > best.first * q) best = {m, q};
    }
  return best;
}

Outcome dilates() {
  Tally t;
  std::string summary;
  for (double eps : {0.3, 0.1, 0.05}) {
    const auto start = Clock::now();
    const DilateCover d = dilate_cover(eps);
    const double dt = seconds_since(start);
    const long K = static_cast<long>(std::ceil(1.0 / eps - 1e-12));
    const auto [num, den] = worst_rational(d.factors);
    const std::string tag = "ε = " + fmt("%g", eps);
    t.expect(static_cast<long>(d.factors.size()) <= K, tag + ": too many factors");
    t.expect(static_cast<double>(num) / den < eps, tag + ": point at distance " + fmt("%g", double(num) / den));
    t.expect(std::abs(d.max_min_distance - static_cast<double>(num) / den) <= 1e-12, tag + ": worst distance differs");
    t.expect(dt <= 1.0, tag + ": took " + fmt("%.2f s", dt));
    summary += (summary.empty() ? "" : ", ") + std::to_string(d.factors.size()) + " factors at " + fmt("%g", eps);
  }
  return t.done(summary);
}

// --- 9 -----------------------------------------------------------------------

Outcome oracle_equivalence() {
  const Lattice z2 = Lattice::integer();
  const double eps = 0.3;
  const int samples = 10000;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Arc> arcs;
  for (int i = 0; i < 8; ++i) arcs.push_back(Arc::make(kTwoPi * u(rng), 0.02 + 0.6 * u(rng)));
  int contradictions = 0, ambiguous = 0;
  const int points = 10000;
  for (int i = 0; i < points; ++i) {
    const Arc& arc = arcs[i % arcs.size()];
    const Vec2 x = from_polar(20.0 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const Verdict v = covers_point(x, AngleSet{arc}, z2, eps);
    double d = 1e300;
    for (int k = 0; k < samples; ++k) d = std::min(d, z2_dist(rotate(x, -(arc.start + arc.length * k / (samples - 1)))));
    const double slack = norm(x) * 0.5 * arc.length / (samples - 1);
    if (v == Verdict::uncovered && d < eps) ++contradictions;
    if (v == Verdict::covered && d - slack >= eps) ++contradictions;
    if (v == Verdict::ambiguous) ++ambiguous;
  }
  Tally t;
  t.expect(contradictions == 0, std::to_string(contradictions) + " contradictions");
  t.expect(ambiguous < points / 1000, std::to_string(ambiguous) + " ambiguous verdicts");
  return t.done(std::to_string(points) + " points, 0 contradictions, " + std::to_string(ambiguous) + " ambiguous");
}

// --- 10 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "rotacover_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto config = [&](const std::string& name, const std::string& text) {
    std::ofstream(root / name) << text;
    return (root / name).string();
  };
  const std::string arc = config("arc.ini",
                                 "[experiment]\neps = 0.3\n[angles]\nkind = arc\nvalues = 0 1\n"
                                 "[region]\nr_lo = 8\nr_hi = 9\n[good]\nshells = 3\nterms = 2\nshells_per_term = 1\n"
                                 "[holes]\ncount = 5\ndepth = 3\n");
  const std::string rnd = config("random.ini", "[angles]\nkind = random\ncount = 5\n[holes]\ncount = 3\n");
  const std::string fourier = config("fourier.ini", "[experiment]\neps = 0.4\n[angles]\nkind = arc\nvalues = 0 0.5\n");
  const std::string cantor = config("cantor.ini", "[angles]\nkind = arc\nvalues = 0 6\n[cantor]\nstages = 4\n");
  const std::string render =
      config("render.ini", "[render]\ninput = " + (root / "a" / "cover-check" / "coverage.json").string() + "\n");

  const std::vector<std::pair<std::string, std::string>> runs = {
      {"cover-check", arc},      {"find-holes", rnd},       {"build-good", arc},      {"build-very-good", arc},
      {"build-bad", arc},        {"build-perfect", arc},    {"fourier-check", fourier}, {"cantor-build", cantor},
      {"dilate-cover", arc},     {"render", render}};
  Tally t;
  std::size_t files = 0;
  for (const auto& [cmd, conf] : runs) {
    for (const char* side : {"a", "b"}) {
      const std::string out = (root / side / cmd).string();
      // The second run uses two worker threads; outputs must not depend on it.
      const std::vector<std::string> args = {"rotacover", "--config", conf, "--out", out, "--seed", "11",
                                             "--threads", side[0] == 'a' ? "1" : "2", cmd};
      std::vector<const char*> argv;
      for (const std::string& a : args) argv.push_back(a.c_str());
      std::ostringstream sout, serr;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), sout, serr);
      t.expect(code == 0, cmd + " exited " + std::to_string(code) + ": " + serr.str());
    }
    for (const auto& entry : fs::directory_iterator(root / "a" / cmd)) {
      const fs::path other = root / "b" / cmd / entry.path().filename();
      t.expect(fs::exists(other) && slurp(entry.path()) == slurp(other),
               cmd + ": " + entry.path().filename().string() + " differs");
      ++files;
    }
  }
  set_thread_count(0);
  return t.done(std::to_string(runs.size()) + " subcommands, " + std::to_string(files) + " artifacts identical");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"finite angle sets leave certified holes beyond r = 50", finite_sets_have_holes},
      {"an arc covers every shell above its empirical t0", smeared_arc_covers},
      {"good sequence passes re-verification", good_sequence},
      {"bad sequence and bad perfect set keep their holes", bad_constructions},
      {"delta scales like density times eps squared", delta_scaling},
      {"Fourier criterion separates an arc from two atoms", fourier_criterion},
      {"Cantor-type construction meets its envelope", cantor},
      {"integer dilates cover the circle", dilates},
      {"covers_point agrees with a sampled oracle", oracle_equivalence},
      {"CLI artifacts are byte identical across runs", cli_determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first << " ["
              << o.detail << "] " << fmt("%.1f s", seconds_since(start)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
