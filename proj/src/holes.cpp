#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotacover/coverage.hpp"
#include "rotacover/errors.hpp"
#include "rotacover/parallel.hpp"

namespace rotacover {

double hole_clearance(Vec2 center, double radius, const AngleSupport& support, const Lattice& lattice,
                      double eps) {
  // Anything farther than this cannot change the sign of the answer.
  const double cutoff = eps + radius + lattice.shortest_len();
  const double d = min_rotated_distance(center, support, lattice, cutoff).distance;
  return d - eps - radius;
}

namespace {

// Coordinate ascent on a shrinking 8-neighbour stencil.
template <class F>
std::pair<Vec2, double> local_maximize(F&& g, Vec2 start, double step, double min_step) {
  Vec2 x = start;
  double best = g(x);
  static const Vec2 dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                              {M_SQRT1_2, M_SQRT1_2}, {-M_SQRT1_2, M_SQRT1_2},
                              {M_SQRT1_2, -M_SQRT1_2}, {-M_SQRT1_2, -M_SQRT1_2}};
  for (int iter = 0; iter < 2000 && step >= min_step; ++iter) {
    Vec2 next = x;
    double next_val = best;
    for (Vec2 d : dirs) {
      const Vec2 y = x + step * d;
      const double v = g(y);
      if (v > next_val) {
        next_val = v;
        next = y;
      }
    }
    if (next_val > best) {
      x = next;
      best = next_val;
    } else {
      step *= 0.5;
    }
  }
  return {x, best};
}

}  // namespace

Vec2 deep_hole(const Lattice& lattice) {
  const Basis& b = lattice.reduced_basis();
  const Vec2 start = 0.5 * (b.first + b.second);
  auto g = [&](Vec2 x) { return dist_to_lattice(lattice, x); };
  return local_maximize(g, start, 0.125 * lattice.shortest_len(), 1e-12 * lattice.shortest_len()).first;
}

Hole find_hole_beyond(const FiniteAngles& angles, const Lattice& lattice, double eps, double min_radius,
                      double rho_target, const HoleSearchOptions& options) {
  validate(AngleSet{angles});
  const double s = lattice.shortest_len();
  if (!(eps > 0.0) || !(rho_target > 0.0)) throw PreconditionError("eps and rho must be positive");
  if (!(eps < 0.5 * s)) throw PreconditionError("theorem precondition violated: eps >= s(Lambda)/2");
  const std::vector<double>& thetas = angles.angles;

  auto g = [&](Vec2 x) {
    double m = std::numeric_limits<double>::infinity();
    for (double t : thetas) m = std::min(m, dist_to_lattice(lattice, rotate(x, -t)));
    return m;
  };
  const double need = eps + rho_target + std::max(options.min_clearance, kEta);
  const auto avoids_others = [&](Vec2 c) {
    for (const Hole& h : options.avoid) {
      if (norm(c - h.center) < h.radius + 2.0 * rho_target) return false;
    }
    return true;
  };

  // Offsets around a near-period T: the deep hole seen from each rotated copy,
  // and points of the empty annulus |v| = s/2 around the shared origin.
  std::vector<Vec2> offsets;
  const Vec2 hole = deep_hole(lattice);
  for (double t : thetas) offsets.push_back(rotate(hole, t));
  for (int k = 0; k < 8; ++k) offsets.push_back(from_polar(0.5 * s, kTwoPi * k / 8.0 + 0.1));

  double best_g = 0.0;
  double r_lo = std::max(min_radius, 1.0);
  for (int round = 0; round < options.max_rounds; ++round) {
    const double r_hi = r_lo * options.growth;
    struct Candidate {
      double score;
      Vec2 t;
    };
    std::vector<Candidate> cands;
    // The box is open in r, so nudge the inner edge to include |λ| = R.
    for_each_point_in_polar_box(lattice, {r_lo * (1.0 - 1e-12), r_hi, 0.0, kTwoPi}, [&](Vec2 lambda) {
      const Vec2 t = rotate(lambda, thetas.front());
      double score = 0.0;
      for (std::size_t j = 1; j < thetas.size(); ++j) {
        score = std::max(score, dist_to_lattice(lattice, rotate(t, -thetas[j])));
      }
      cands.push_back({score, t});
      return true;
    }, options.enumeration_cap);
    const std::size_t keep = std::min(options.keep, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.score != b.score) return a.score < b.score;
                        const double na = norm2(a.t);
                        const double nb = norm2(b.t);
                        if (na != nb) return na < nb;
                        return polar_angle(a.t) < polar_angle(b.t);
                      });

    struct Found {
      bool ok = false;
      Vec2 x;
      double g = 0.0;
    };
    std::vector<Found> found(keep);
    parallel_for(keep, [&](std::size_t i) {
      Found f;
      for (Vec2 off : offsets) {
        auto [x, v] = local_maximize(g, cands[i].t + off, 0.25 * s, 1e-9 * s);
        if (v >= need && norm(x) >= min_radius && avoids_others(x)) {
          f = {true, x, v};
          break;
        }
        if (v > f.g) {
          f.g = v;
          f.x = x;
        }
      }
      found[i] = f;
    });
    for (const Found& f : found) {
      best_g = std::max(best_g, f.g);
      if (!f.ok) continue;
      Hole h{f.x, rho_target, 0.0};
      h.clearance = hole_clearance(h.center, h.radius, AngleSupport{thetas, {}}, lattice, eps);
      if (h.clearance >= std::max(options.min_clearance, kEta)) return h;
    }
    r_lo = r_hi;
  }
  std::ostringstream msg;
  msg << "no hole found within budget (best g = " << best_g << ", needed " << need << ")";
  throw BudgetExceeded(msg.str());
}

}  // namespace rotacover
