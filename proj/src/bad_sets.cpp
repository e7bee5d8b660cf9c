#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rotacover/constructions.hpp"

namespace rotacover {

namespace {

// Largest rotation that keeps every hole at least half its clearance away.
double safe_rotation(const std::vector<Hole>& holes, const std::vector<double>& clearances, double eps) {
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < holes.size(); ++j) {
    delta = std::min(delta, clearances[j] / (2.0 * (norm(holes[j].center) + holes[j].radius + eps)));
  }
  return delta;
}

Hole next_hole(const FiniteAngles& angles, const Lattice& lattice, double eps, double min_radius,
               const std::vector<Hole>& existing, const BadConstructionOptions& options) {
  HoleSearchOptions search = options.search;
  search.avoid.insert(search.avoid.end(), existing.begin(), existing.end());
  Hole h = find_hole_beyond(angles, lattice, eps, min_radius, options.rho, search);
  double gap = std::numeric_limits<double>::infinity();
  for (const Hole& g : existing) gap = std::min(gap, norm(h.center - g.center) - g.radius);
  h.radius = std::min(options.rho, 0.5 * gap);
  h.clearance = hole_clearance(h.center, h.radius, AngleSupport{angles.angles, {}}, lattice, eps);
  return h;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantFailure(what);
}

}  // namespace

BadSequenceResult build_bad_sequence(const Lattice& lattice, double eps, int count,
                                     const BadConstructionOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(eps < 0.5 * lattice.shortest_len())) {
    throw PreconditionError("theorem precondition violated: eps >= s(Lambda)/2");
  }
  if (count < 0) throw PreconditionError("count must be nonnegative");
  BadSequenceResult res;
  std::vector<double> current;
  for (int n = 0; n < count; ++n) {
    if (n == 0) {
      res.angles.push_back(0.0);
    } else {
      const double delta = safe_rotation(res.holes, current, eps);
      res.angles.push_back(res.angles.back() + delta);
      const AngleSupport prefix{res.angles, {}};
      for (std::size_t j = 0; j < res.holes.size(); ++j) {
        const double c = hole_clearance(res.holes[j].center, res.holes[j].radius, prefix, lattice, eps);
        require(c >= 0.5 * current[j] - 1e-12, "clearance fell below half after a new angle");
        current[j] = c;
      }
    }
    const Hole h = next_hole(make_finite(res.angles), lattice, eps, n + 1.0, res.holes, options);
    require(h.clearance > 0.0, "new hole is hit by the rotated set");
    res.holes.push_back(h);
    current.push_back(h.clearance);
    res.clearances.push_back(current);
  }
  return res;
}

PerfectSetResult build_bad_perfect_set(const Lattice& lattice, double eps, int depth, const Arc& root,
                                       const BadConstructionOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(eps < 0.5 * lattice.shortest_len())) {
    throw PreconditionError("theorem precondition violated: eps >= s(Lambda)/2");
  }
  if (depth < 0) throw PreconditionError("depth must be nonnegative");
  validate(AngleSet{root});
  if (root.length >= kTwoPi) throw PreconditionError("root arc must be proper");

  PerfectSetResult res;
  res.levels.push_back({root});
  for (int n = 0; n < depth; ++n) {
    const std::vector<Arc>& parents = res.levels.back();
    std::vector<double> points;
    for (const Arc& a : parents) {
      points.push_back(normalize_angle(a.start + 0.25 * a.length));
      points.push_back(normalize_angle(a.start + 0.75 * a.length));
    }
    const Hole h = next_hole(make_finite(points), lattice, eps, n + 1.0, res.holes, options);
    require(h.clearance > 0.0, "new hole is hit by the rotated set");
    res.holes.push_back(h);

    const AngleSupport at_points{points, {}};
    std::vector<double> d;
    for (const Hole& g : res.holes) d.push_back(hole_clearance(g.center, g.radius, at_points, lattice, eps));
    const double w = std::min(safe_rotation(res.holes, d, eps), parents.front().length / 8.0);

    std::vector<Arc> children;
    for (double p : points) children.push_back(Arc{normalize_angle(p - w), 2.0 * w});
    res.levels.push_back(children);

    const AngleSupport over_arcs{{}, children};
    std::vector<double> certified;
    for (std::size_t j = 0; j < res.holes.size(); ++j) {
      const double c = hole_clearance(res.holes[j].center, res.holes[j].radius, over_arcs, lattice, eps);
      require(c >= 0.5 * d[j] - 1e-12, "arc clearance fell below half of the point clearance");
      certified.push_back(c);
    }
    res.clearances.push_back(certified);
  }
  validate(AngleSet{res.tree()});
  return res;
}

namespace {

CheckResult check_holes(const std::vector<Hole>& holes, double min_radius_step) {
  for (std::size_t j = 0; j < holes.size(); ++j) {
    if (!(holes[j].radius > 0.0)) return {false, "hole with nonpositive radius"};
    if (norm(holes[j].center) < min_radius_step * static_cast<double>(j + 1)) {
      return {false, "hole " + std::to_string(j + 1) + " is too close to the origin"};
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (norm(holes[j].center - holes[k].center) <= holes[j].radius + holes[k].radius) {
        return {false, "holes overlap"};
      }
    }
  }
  return {};
}

}  // namespace

CheckResult check_bad_sequence(const BadSequenceResult& result, const Lattice& lattice, double eps) {
  if (result.angles.size() != result.holes.size()) return {false, "angle and hole counts differ"};
  for (std::size_t i = 1; i < result.angles.size(); ++i) {
    if (!(result.angles[i] > result.angles[i - 1])) return {false, "angles are not distinct and increasing"};
  }
  if (CheckResult c = check_holes(result.holes, 1.0); !c.ok) return c;
  for (std::size_t n = 0; n < result.angles.size(); ++n) {
    const AngleSupport prefix{std::vector<double>(result.angles.begin(), result.angles.begin() + n + 1), {}};
    for (std::size_t j = 0; j <= n; ++j) {
      const double c = hole_clearance(result.holes[j].center, result.holes[j].radius, prefix, lattice, eps);
      if (!(c > 0.0)) return {false, "hole " + std::to_string(j + 1) + " is hit"};
      if (std::abs(c - result.clearances[n][j]) > 1e-9) return {false, "stated clearance does not recheck"};
    }
  }
  return {};
}

CheckResult check_perfect_set(const PerfectSetResult& result, const Lattice& lattice, double eps) {
  try {
    validate(AngleSet{result.tree()});
  } catch (const PreconditionError& e) {
    return {false, e.what()};
  }
  if (result.holes.size() + 1 != result.levels.size()) return {false, "one hole per level expected"};
  if (CheckResult c = check_holes(result.holes, 1.0); !c.ok) return c;
  for (std::size_t n = 1; n < result.levels.size(); ++n) {
    const AngleSupport arcs{{}, result.levels[n]};
    for (std::size_t j = 0; j < n; ++j) {
      const double c = hole_clearance(result.holes[j].center, result.holes[j].radius, arcs, lattice, eps);
      if (!(c > 0.0)) return {false, "hole " + std::to_string(j + 1) + " is hit at level " + std::to_string(n)};
      if (std::abs(c - result.clearances[n - 1][j]) > 1e-9) return {false, "stated clearance does not recheck"};
    }
  }
  return {};
}

}  // namespace rotacover
