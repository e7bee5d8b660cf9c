#include "rotacover/lattice.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace rotacover {
namespace {

void require_nonsingular(const Basis& b) {
  const double det = cross(b.first, b.second);
  const double scale = norm(b.first) * norm(b.second);
  if (!std::isfinite(det) || !std::isfinite(scale) || scale == 0.0 ||
      std::abs(det) <= 1e-14 * scale) {
    throw PreconditionError("degenerate lattice");
  }
}

}  // namespace

Basis reduce_basis(const Basis& basis) {
  require_nonsingular(basis);
  Vec2 a = basis.first;
  Vec2 b = basis.second;
  if (norm2(a) > norm2(b)) std::swap(a, b);
  for (int iter = 0; iter < 10'000; ++iter) {
    const double m = std::round(dot(a, b) / norm2(a));
    if (m == 0.0) break;
    b = b - m * a;
    if (norm2(b) < norm2(a)) std::swap(a, b);
  }
  return {a, b};
}

Lattice::Lattice(const Basis& basis) : basis_(basis), reduced_(reduce_basis(basis)) {
  det_ = cross(reduced_.first, reduced_.second);
  det_abs_ = std::abs(det_);
  mu_ = dot(reduced_.second, reduced_.first) / norm2(reduced_.first);
  second_star_norm_ = det_abs_ / norm(reduced_.first);
}

Vec2 shortest_vector(const Lattice& lattice) {
  const double s = lattice.shortest_len();
  Vec2 best{};
  double best_n2 = std::numeric_limits<double>::infinity();
  for_each_point_in_disk(lattice, {0.0, 0.0}, s * (1.0 + 1e-9), [&](Vec2 p) {
    const double n2 = norm2(p);
    if (n2 == 0.0) return true;
    const double tol = 1e-12 * std::max(n2, best_n2 == std::numeric_limits<double>::infinity() ? n2 : best_n2);
    if (n2 < best_n2 - tol ||
        (std::abs(n2 - best_n2) <= tol && std::tie(p.x, p.y) < std::tie(best.x, best.y))) {
      best = p;
      best_n2 = std::min(best_n2, n2);
    }
    return true;
  });
  return best;
}

Lattice dual_lattice(const Lattice& lattice) {
  const Basis& b = lattice.basis();
  const double det = cross(b.first, b.second);
  // Columns of A^{-T}: rows of A^{-1} transposed.
  const Vec2 d1{b.second.y / det, -b.second.x / det};
  const Vec2 d2{-b.first.y / det, b.first.x / det};
  return Lattice({d1, d2});
}

bool in_polar_box(Vec2 p, const PolarBox& box) {
  const double r = norm(p);
  if (!(r > box.r_lo && r < box.r_hi)) return false;
  const double width = box.angular_width();
  if (width >= kTwoPi) return true;
  return normalize_angle(polar_angle(p) - box.phi_lo) <= width;
}

void sort_by_angle_then_norm(std::vector<Vec2>& points) {
  std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
    const double aa = polar_angle(a);
    const double ab = polar_angle(b);
    if (aa != ab) return aa < ab;
    const double na = norm2(a);
    const double nb = norm2(b);
    if (na != nb) return na < nb;
    return std::tie(a.x, a.y) < std::tie(b.x, b.y);
  });
}

std::vector<Vec2> points_in_disk(const Lattice& lattice, Vec2 center, double radius, std::size_t cap) {
  std::vector<Vec2> out;
  for_each_point_in_disk(lattice, center, radius, [&](Vec2 p) {
    out.push_back(p);
    return true;
  }, cap);
  sort_by_angle_then_norm(out);
  return out;
}

std::vector<Vec2> points_in_polar_box(const Lattice& lattice, const PolarBox& box, std::size_t cap) {
  std::vector<Vec2> out;
  for_each_point_in_polar_box(lattice, box, [&](Vec2 p) {
    out.push_back(p);
    return true;
  }, cap);
  sort_by_angle_then_norm(out);
  return out;
}

namespace detail {

void check_budget(std::size_t visited, std::size_t cap) {
  if (visited > cap) {
    throw BudgetExceeded("enumeration budget exceeded (cap " + std::to_string(cap) + " points)");
  }
}

}  // namespace detail
}  // namespace rotacover
