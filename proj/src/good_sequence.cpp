#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rotacover/constructions.hpp"

namespace rotacover {

namespace {

double distance_to(double angle, double limit) { return std::abs(std::remainder(angle - limit, kTwoPi)); }

void sort_towards(std::vector<double>& angles, double limit) {
  for (double& a : angles) a = normalize_angle(a);
  std::sort(angles.begin(), angles.end(), [limit](double a, double b) {
    const double da = distance_to(a, limit);
    const double db = distance_to(b, limit);
    if (da != db) return da > db;
    return a < b;
  });
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
}

ShellRecord cover_shell(const Arc& arc, const Lattice& lattice, double eps, double r, bool extension,
                        const ShellCoverOptions& options) {
  ShellRecord rec;
  rec.r_lo = r;
  rec.r_hi = r + 1.0;
  rec.eps = eps;
  rec.arc = arc;
  rec.extension = extension;
  rec.angles = finite_cover_of_shell(arc, lattice, eps, r, r + 1.0, options).angles;
  VerifyOptions vo = options.verify;
  vo.keep_cells = false;
  const CoverageReport rep = verify_region(AngleSupport{rec.angles, {}}, lattice, eps,
                                           {r, r + 1.0, 0.0, kTwoPi}, options.max_depth, vo);
  rec.cell_count = rep.cell_count;
  rec.covered_area = rep.covered_area;
  rec.uncovered_area = rep.uncovered_area;
  rec.ambiguous_area = rep.ambiguous_area;
  return rec;
}

}  // namespace

GoodSequenceResult build_good_sequence(const Lattice& lattice, double eps, const Arc& interval,
                                       double r_start, int n_shells, const GoodSequenceOptions& options) {
  validate(AngleSet{interval});
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(r_start >= 0.0) || n_shells < 0) throw PreconditionError("need r_start >= 0 and n_shells >= 0");
  if (!(options.shrink > 0.0 && options.shrink < 1.0)) throw PreconditionError("shrink must lie in (0, 1)");

  GoodSequenceResult res;
  res.interval = interval;
  res.limit = normalize_angle(interval.end() - interval.length / 10.0);
  res.r_start = r_start;
  const auto sub_arc = [&](int n) {
    const double len = interval.length * std::pow(options.shrink, n);
    return Arc{normalize_angle(res.limit - 0.9 * len), len};
  };

  double r = r_start;
  int adjustments = 0;
  for (int n = 0; n < n_shells; ++n) {
    for (;;) {
      try {
        res.shells.push_back(cover_shell(sub_arc(n), lattice, eps, r, false, options.cover));
        r += 1.0;
        break;
      } catch (const ArcInsufficient&) {
        if (++adjustments > options.max_adjustments) {
          throw BudgetExceeded("good sequence schedule exceeded its adjustment budget");
        }
      }
      std::ostringstream note;
      if (n == 0) {
        r += 1.0;
        res.r_start = r;
        note << "shell 0 restarted at r = " << r;
      } else {
        // Wider sub-arcs cover further in; the first that works fills the gap.
        int m = n - 1;
        for (;; --m) {
          try {
            res.shells.push_back(cover_shell(sub_arc(m), lattice, eps, r, true, options.cover));
            break;
          } catch (const ArcInsufficient&) {
            if (m == 0) throw;
          }
        }
        note << "shell " << n << ": extension [" << r << ", " << r + 1.0 << "] covered with I_" << m;
        r += 1.0;
      }
      res.adjustments.push_back(note.str());
    }
  }
  for (const ShellRecord& s : res.shells) res.angles.insert(res.angles.end(), s.angles.begin(), s.angles.end());
  sort_towards(res.angles, res.limit);
  return res;
}

std::vector<VeryGoodTerm> default_very_good_schedule(int terms) {
  std::vector<VeryGoodTerm> out;
  for (int n = 1; n <= terms; ++n) out.push_back({1.0 / n, 1.0 / n});
  return out;
}

GoodSequenceResult build_very_good_sequence(const Lattice& lattice, const std::vector<VeryGoodTerm>& schedule,
                                            double r_start, int shells_per_term,
                                            const GoodSequenceOptions& options) {
  GoodSequenceResult res;
  res.limit = 0.0;
  res.r_start = r_start;
  if (schedule.empty()) return res;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const VeryGoodTerm& t = schedule[i];
    if (!(t.a > 0.0 && t.a <= kPi) || !(t.eps > 0.0)) throw PreconditionError("schedule needs 0 < a <= pi and eps > 0");
    if (i > 0 && !(t.a < schedule[i - 1].a)) throw PreconditionError("schedule a_n must decrease");
  }
  res.interval = Arc{0.0, schedule.front().a};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const VeryGoodTerm& t = schedule[i];
    const Arc inner{t.a / 100.0, 0.99 * t.a - t.a / 100.0};
    GoodSequenceResult part = build_good_sequence(lattice, t.eps, inner, r_start, shells_per_term, options);
    for (ShellRecord& s : part.shells) {
      s.term = i;
      res.shells.push_back(std::move(s));
    }
    for (const std::string& a : part.adjustments) res.adjustments.push_back("term " + std::to_string(i) + ": " + a);
    res.angles.insert(res.angles.end(), part.angles.begin(), part.angles.end());
  }
  sort_towards(res.angles, res.limit);
  return res;
}

CheckResult check_good_sequence(const GoodSequenceResult& result, const Lattice& lattice, int max_depth) {
  const auto fail = [](std::string why) { return CheckResult{false, std::move(why)}; };
  std::map<std::size_t, std::vector<const ShellRecord*>> terms;
  for (const ShellRecord& s : result.shells) terms[s.term].push_back(&s);
  for (auto& [term, shells] : terms) {
    std::sort(shells.begin(), shells.end(), [](auto* a, auto* b) { return a->r_lo < b->r_lo; });
    for (std::size_t i = 1; i < shells.size(); ++i) {
      if (std::abs(shells[i]->r_lo - shells[i - 1]->r_hi) > 1e-9) {
        return fail("shells of term " + std::to_string(term) + " are not contiguous");
      }
    }
  }

  for (const ShellRecord& s : result.shells) {
    if (s.angles.empty()) return fail("shell without angles");
    if (!result.interval.contains(s.arc, 1e-12)) return fail("sub-arc escapes the interval");
    for (double a : s.angles)
      if (distance_to_arc(a, s.arc) > 1e-12) return fail("shell angle outside its sub-arc");
    VerifyOptions vo;
    vo.initial_cell = 0.7 * s.eps;
    vo.keep_cells = false;
    vo.stop_on_failure = true;
    const CoverageReport rep = verify_region(AngleSet{make_finite(s.angles)}, lattice, s.eps,
                                             {s.r_lo, s.r_hi, 0.0, kTwoPi}, max_depth, vo);
    if (!rep.fully_covered()) {
      std::ostringstream m;
      m << "shell [" << s.r_lo << ", " << s.r_hi << "] not certified on re-verification";
      return fail(m.str());
    }
  }

  double prev = std::numeric_limits<double>::infinity();
  for (double a : result.angles) {
    if (distance_to_arc(a, result.interval) > 1e-12) return fail("angle outside the interval");
    const double d = distance_to(a, result.limit);
    if (d > prev) return fail("distance to the limit increases");
    prev = d;
  }
  return {};
}

}  // namespace rotacover
