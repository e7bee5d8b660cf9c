#include "rotacover/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "rotacover/errors.hpp"
#include "rotacover/parallel.hpp"

namespace rotacover {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::covered: return "covered";
    case Verdict::uncovered: return "uncovered";
    case Verdict::ambiguous: return "ambiguous";
  }
  return "?";
}

Vec2 closest_lattice_point(const Lattice& lattice, Vec2 x) {
  const Vec2 t = lattice.reduced_coordinates(x);
  const double r1 = std::round(t.x);
  const double r2 = std::round(t.y);
  Vec2 best{};
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const Vec2 p = lattice.reduced_point(r1 + i, r2 + j);
      const double d2 = norm2(x - p);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = p;
      }
    }
  }
  return best;
}

double dist_to_lattice(const Lattice& lattice, Vec2 x) {
  return norm(x - closest_lattice_point(lattice, x));
}

RotatedDistance min_rotated_distance(Vec2 x, const AngleSupport& support, const Lattice& lattice,
                                     double cutoff, double stop_below, std::size_t cap) {
  RotatedDistance best{cutoff, 0.0};
  for (double theta : support.points) {
    const double d = dist_to_lattice(lattice, rotate(x, -theta));
    if (d < best.distance) best = {d, theta};
    if (best.distance < stop_below) return best;
  }
  if (support.arcs.empty() || !(cutoff > 0.0)) return best;

  const double rho = norm(x);
  const double alpha = polar_angle(x);
  // The origin is fixed by every rotation.
  if (rho < best.distance) best = {rho, support.arcs.front().start};
  if (best.distance < stop_below) return best;

  for (const Arc& arc : support.arcs) {
    // R_θλ can only come within `cutoff` of x when its angle is within asin(cutoff/ρ) of α.
    const double spread = cutoff >= rho ? kPi : std::asin(cutoff / rho) + 1e-12;
    const double width = arc.length + 2.0 * spread;
    PolarBox box{std::max(0.0, rho - cutoff), rho + cutoff, 0.0, kTwoPi};
    if (width < kTwoPi) {
      box.phi_lo = normalize_angle(alpha - arc.end() - spread);
      box.phi_hi = box.phi_lo + width;
    }
    bool stop = false;
    for_each_point_in_polar_box(lattice, box, [&](Vec2 lambda) {
      const double n = norm(lambda);
      const double target = normalize_angle(alpha - polar_angle(lambda));
      const double off = distance_to_arc(target, arc);
      const double s = std::sin(0.5 * off);
      const double d = std::sqrt((rho - n) * (rho - n) + 4.0 * rho * n * s * s);
      if (d < best.distance) {
        double angle = target;
        if (off > 0.0) {
          const double past = normalize_angle(target - arc.start) - arc.length;
          angle = past < kTwoPi - arc.length - past ? normalize_angle(arc.end()) : arc.start;
        }
        best = {d, angle};
        if (d < stop_below) {
          stop = true;
          return false;
        }
      }
      return true;
    }, cap);
    if (stop) break;
  }
  return best;
}

Verdict covers_point(Vec2 x, const AngleSupport& support, const Lattice& lattice, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const double d = min_rotated_distance(x, support, lattice, eps + 2.0 * kEta, eps - kEta).distance;
  if (d < eps - kEta) return Verdict::covered;
  if (d >= eps + kEta) return Verdict::uncovered;
  return Verdict::ambiguous;
}

Verdict covers_point(Vec2 x, const AngleSet& angles, const Lattice& lattice, double eps) {
  return covers_point(x, support_of(angles), lattice, eps);
}

double cell_radius(const PolarBox& cell) {
  const double dr = 0.5 * (cell.r_hi - cell.r_lo);
  const double dphi = std::min(0.5 * cell.angular_width(), kPi);
  return std::hypot(dr, cell.r_hi * dphi);
}

namespace {

struct CellResult {
  std::vector<CoverageCell> leaves;
  std::size_t count = 0;
  double covered = 0.0;
  double uncovered = 0.0;
  double ambiguous = 0.0;
  bool failed = false;
};

Verdict classify(const PolarBox& cell, const AngleSupport& support, const Lattice& lattice, double eps,
                 std::size_t cap) {
  const double h = cell_radius(cell);
  const Vec2 c = from_polar(0.5 * (cell.r_lo + cell.r_hi), cell.phi_lo + 0.5 * cell.angular_width());
  const double cover_below = eps - h - kEta;
  const double d = min_rotated_distance(c, support, lattice, eps + h + 2.0 * kEta, cover_below, cap).distance;
  if (d < cover_below) return Verdict::covered;
  if (d >= eps + h + kEta) return Verdict::uncovered;
  return Verdict::ambiguous;
}

void refine(const PolarBox& root, const AngleSupport& support, const Lattice& lattice, double eps,
            int max_depth, const VerifyOptions& options, const std::atomic<bool>& abort,
            CellResult& out) {
  struct Item {
    PolarBox box;
    int depth;
    bool radial_next;
  };
  const bool radial_first = (root.r_hi - root.r_lo) >= root.r_hi * root.angular_width();
  std::vector<Item> stack{{root, 0, radial_first}};
  while (!stack.empty()) {
    if (options.stop_on_failure && (out.failed || abort.load(std::memory_order_relaxed))) {
      out.failed = true;
      return;
    }
    Item item = stack.back();
    stack.pop_back();
    Verdict v = classify(item.box, support, lattice, eps, options.enumeration_cap);
    if (v == Verdict::ambiguous && item.depth < max_depth) {
      PolarBox a = item.box;
      PolarBox b = item.box;
      if (item.radial_next) {
        const double mid = 0.5 * (item.box.r_lo + item.box.r_hi);
        a.r_hi = mid;
        b.r_lo = mid;
      } else {
        const double mid = item.box.phi_lo + 0.5 * item.box.angular_width();
        a.phi_hi = mid;
        b.phi_lo = mid;
      }
      // Pushed in reverse so the leaves come out in increasing order.
      stack.push_back({b, item.depth + 1, !item.radial_next});
      stack.push_back({a, item.depth + 1, !item.radial_next});
      continue;
    }
    const double area = item.box.area();
    ++out.count;
    switch (v) {
      case Verdict::covered: out.covered += area; break;
      case Verdict::uncovered: out.uncovered += area; out.failed = true; break;
      case Verdict::ambiguous: out.ambiguous += area; out.failed = true; break;
    }
    if (options.keep_cells) out.leaves.push_back({item.box, v, item.depth});
  }
}

}  // namespace

CoverageReport verify_region(const AngleSupport& support, const Lattice& lattice, double eps,
                             const PolarBox& region, int max_depth, const VerifyOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!region.valid()) throw PreconditionError("invalid region");
  if (max_depth < 1) throw PreconditionError("max_depth must be at least 1");

  const double side = options.initial_cell > 0.0 ? options.initial_cell : eps;
  const double width = region.angular_width();
  const auto n_r = static_cast<std::size_t>(std::max(1.0, std::ceil((region.r_hi - region.r_lo) / side)));
  const auto n_phi = static_cast<std::size_t>(
      std::max({1.0, std::ceil(region.r_hi * width / side), std::ceil(width / (0.5 * kPi))}));
  const double dr = (region.r_hi - region.r_lo) / static_cast<double>(n_r);
  const double dphi = width / static_cast<double>(n_phi);

  std::vector<CellResult> results(n_r * n_phi);
  std::atomic<bool> abort{false};
  parallel_for(results.size(), [&](std::size_t k) {
    if (options.stop_on_failure && abort.load(std::memory_order_relaxed)) return;
    const std::size_t i = k / n_phi;
    const std::size_t j = k % n_phi;
    PolarBox cell{region.r_lo + dr * static_cast<double>(i),
                  i + 1 == n_r ? region.r_hi : region.r_lo + dr * static_cast<double>(i + 1),
                  region.phi_lo + dphi * static_cast<double>(j),
                  j + 1 == n_phi ? region.phi_hi : region.phi_lo + dphi * static_cast<double>(j + 1)};
    refine(cell, support, lattice, eps, max_depth, options, abort, results[k]);
    if (results[k].failed) abort = true;
  });

  CoverageReport report;
  report.region = region;
  report.eps = eps;
  report.max_depth = max_depth;
  bool failed = false;
  for (CellResult& r : results) {
    report.cell_count += r.count;
    report.covered_area += r.covered;
    report.uncovered_area += r.uncovered;
    report.ambiguous_area += r.ambiguous;
    failed = failed || r.failed;
    if (options.keep_cells) {
      report.cells.insert(report.cells.end(), r.leaves.begin(), r.leaves.end());
    }
  }
  if (options.stop_on_failure && failed && report.uncovered_area == 0.0 && report.ambiguous_area == 0.0) {
    // Aborted runs must never read as fully covered.
    report.ambiguous_area = std::max(region.area() - report.covered_area, std::numeric_limits<double>::min());
  }
  return report;
}

CoverageReport verify_region(const AngleSet& angles, const Lattice& lattice, double eps,
                             const PolarBox& region, int max_depth, const VerifyOptions& options) {
  validate(angles);
  return verify_region(support_of(angles), lattice, eps, region, max_depth, options);
}

std::optional<double> empirical_t0(const AngleSet& angles, const Lattice& lattice, double eps,
                                   double shell_width, double t_max, const T0Options& options) {
  if (!is_arc_type(angles)) throw PreconditionError("empirical_t0 requires arc-type angle set");
  if (!(shell_width > 0.0) || !std::isfinite(t_max) || t_max < 0.0) {
    throw PreconditionError("empirical_t0 needs positive shell width and finite t_max");
  }
  validate(angles);
  const AngleSupport support = support_of(angles);
  VerifyOptions verify = options.verify;
  verify.keep_cells = false;
  verify.stop_on_failure = true;

  std::optional<double> t0;
  for (long k = 0;; ++k) {
    const double lo = t_max - static_cast<double>(k) * shell_width;
    if (lo < 0.0) break;
    const PolarBox shell{lo, lo + shell_width, 0.0, kTwoPi};
    const CoverageReport r = verify_region(support, lattice, eps, shell, options.max_depth, verify);
    if (!r.fully_covered()) break;
    t0 = lo;
  }
  return t0;
}

}  // namespace rotacover
