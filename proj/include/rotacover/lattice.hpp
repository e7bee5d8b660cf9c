#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rotacover/errors.hpp"
#include "rotacover/geometry.hpp"

namespace rotacover {

// Basis of a planar lattice; the lattice is {c1*first + c2*second : c ∈ Z²}.
struct Basis {
  Vec2 first;
  Vec2 second;
  friend bool operator==(const Basis&, const Basis&) = default;
};

inline constexpr std::size_t kDefaultEnumerationCap = 100'000'000;

// Lagrange–Gauss reduction. The result has |first| ≤ |second| and
// |<first, second>| ≤ |first|²/2. Throws PreconditionError("degenerate lattice").
Basis reduce_basis(const Basis& basis);

class Lattice {
 public:
  explicit Lattice(const Basis& basis);

  static Lattice integer() { return Lattice({{1.0, 0.0}, {0.0, 1.0}}); }
  static Lattice diagonal(double a, double b) { return Lattice({{a, 0.0}, {0.0, b}}); }

  const Basis& basis() const { return basis_; }
  const Basis& reduced_basis() const { return reduced_; }
  double det_abs() const { return det_abs_; }
  double density() const { return 1.0 / det_abs_; }
  double shortest_len() const { return norm(reduced_.first); }

  // Real coordinates of p with respect to the reduced basis.
  Vec2 reduced_coordinates(Vec2 p) const {
    return {cross(p, reduced_.second) / det_, cross(reduced_.first, p) / det_};
  }
  Vec2 reduced_point(double c1, double c2) const {
    return c1 * reduced_.first + c2 * reduced_.second;
  }

  // Gram–Schmidt data of the reduced basis, used by row enumeration.
  double gs_mu() const { return mu_; }
  double gs_second_norm() const { return second_star_norm_; }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

 private:
  Basis basis_;
  Basis reduced_;
  double det_;  // signed det of reduced basis
  double det_abs_;
  double mu_;
  double second_star_norm_;
};

// Shortest nonzero vector; ties are broken by lexicographic (x, y) order.
Vec2 shortest_vector(const Lattice& lattice);

// Lattice with basis A^{-T}.
Lattice dual_lattice(const Lattice& lattice);

// Region {(r, φ) : r_lo < r < r_hi, φ ∈ [phi_lo, phi_hi] mod 2π}.
struct PolarBox {
  double r_lo = 0.0;
  double r_hi = 1.0;
  double phi_lo = 0.0;
  double phi_hi = kTwoPi;

  double angular_width() const { return phi_hi - phi_lo; }
  bool valid() const {
    return r_lo >= 0.0 && r_lo < r_hi && angular_width() > 0.0 && angular_width() <= kTwoPi + 1e-12;
  }
  double area() const { return 0.5 * (r_hi * r_hi - r_lo * r_lo) * angular_width(); }
  friend bool operator==(const PolarBox&, const PolarBox&) = default;
};

bool in_polar_box(Vec2 p, const PolarBox& box);

// Visits every lattice point p with |p − center| ≤ radius, row by row in the
// reduced basis. The visitor returns false to stop early. Throws BudgetExceeded
// once more than `cap` points have been visited.
template <class Visitor>
void for_each_point_in_disk(const Lattice& lattice, Vec2 center, double radius, Visitor&& visit,
                            std::size_t cap = kDefaultEnumerationCap);

// Visits every lattice point inside `box` (same contract as above).
template <class Visitor>
void for_each_point_in_polar_box(const Lattice& lattice, const PolarBox& box, Visitor&& visit,
                                 std::size_t cap = kDefaultEnumerationCap);

// Sorted by polar angle, then norm.
std::vector<Vec2> points_in_disk(const Lattice& lattice, Vec2 center, double radius,
                                 std::size_t cap = kDefaultEnumerationCap);
std::vector<Vec2> points_in_polar_box(const Lattice& lattice, const PolarBox& box,
                                      std::size_t cap = kDefaultEnumerationCap);

void sort_by_angle_then_norm(std::vector<Vec2>& points);

namespace detail {

inline constexpr double kRowSlack = 1e-7;

// c1 values of row c2 that can lie in the closed disk (center, radius).
inline bool disk_row_range(const Lattice& lat, Vec2 t, double radius, std::int64_t c2, double& lo,
                           double& hi) {
  const double first_len = norm(lat.reduced_basis().first);
  const double dz = static_cast<double>(c2) - t.y;
  const double rest = radius * radius - std::pow(lat.gs_second_norm() * dz, 2);
  if (rest < -kRowSlack * (1.0 + radius * radius)) return false;
  const double half = std::sqrt(std::max(rest, 0.0)) / first_len;
  const double mid = t.x - lat.gs_mu() * dz;
  lo = mid - half;
  hi = mid + half;
  return true;
}

void check_budget(std::size_t visited, std::size_t cap);

}  // namespace detail

template <class Visitor>
void for_each_point_in_disk(const Lattice& lattice, Vec2 center, double radius, Visitor&& visit,
                            std::size_t cap) {
  if (!(radius >= 0.0)) throw PreconditionError("radius must be nonnegative");
  const Vec2 t = lattice.reduced_coordinates(center);
  const double span = radius / lattice.gs_second_norm();
  const auto c2_lo = static_cast<std::int64_t>(std::ceil(t.y - span - detail::kRowSlack));
  const auto c2_hi = static_cast<std::int64_t>(std::floor(t.y + span + detail::kRowSlack));
  const double r2 = radius * radius;
  std::size_t visited = 0;
  for (std::int64_t c2 = c2_lo; c2 <= c2_hi; ++c2) {
    double lo = 0.0;
    double hi = 0.0;
    if (!detail::disk_row_range(lattice, t, radius, c2, lo, hi)) continue;
    const auto c1_lo = static_cast<std::int64_t>(std::ceil(lo - detail::kRowSlack * (1.0 + std::abs(lo))));
    const auto c1_hi = static_cast<std::int64_t>(std::floor(hi + detail::kRowSlack * (1.0 + std::abs(hi))));
    for (std::int64_t c1 = c1_lo; c1 <= c1_hi; ++c1) {
      const Vec2 p = lattice.reduced_point(static_cast<double>(c1), static_cast<double>(c2));
      if (norm2(p - center) > r2) continue;
      detail::check_budget(++visited, cap);
      if (!visit(p)) return;
    }
  }
}

template <class Visitor>
void for_each_point_in_polar_box(const Lattice& lattice, const PolarBox& box, Visitor&& visit,
                                 std::size_t cap) {
  if (!box.valid()) throw PreconditionError("invalid polar box");
  const Basis& rb = lattice.reduced_basis();
  const double width = box.angular_width();
  const bool clip_sector = width <= kPi;
  const Vec2 u0 = from_polar(1.0, box.phi_lo);
  const Vec2 u1 = from_polar(1.0, box.phi_hi);

  // Range of the c2 functional over the box: corners plus the outer-arc extremes.
  const Vec2 origin_t{0.0, 0.0};
  double c2_min = 0.0;
  double c2_max = 0.0;
  {
    const double det = cross(rb.first, rb.second);
    const Vec2 normal{-rb.first.y / det, rb.first.x / det};  // c2(p) = <p, normal>
    const double nlen = norm(normal);
    if (width >= kTwoPi - 1e-12) {
      c2_min = -box.r_hi * nlen;
      c2_max = box.r_hi * nlen;
    } else {
      c2_min = std::numeric_limits<double>::infinity();
      c2_max = -c2_min;
      for (double r : {box.r_lo, box.r_hi}) {
        for (Vec2 u : {u0, u1}) {
          const double v = r * dot(u, normal);
          c2_min = std::min(c2_min, v);
          c2_max = std::max(c2_max, v);
        }
      }
      const double a = polar_angle(normal);
      const auto inside = [&](double phi) {
        return normalize_angle(phi - box.phi_lo) <= width;
      };
      if (inside(a)) c2_max = std::max(c2_max, box.r_hi * nlen);
      if (inside(a + kPi)) c2_min = std::min(c2_min, -box.r_hi * nlen);
    }
  }
  const auto c2_lo = static_cast<std::int64_t>(std::ceil(c2_min - detail::kRowSlack * (1.0 + std::abs(c2_min))));
  const auto c2_hi = static_cast<std::int64_t>(std::floor(c2_max + detail::kRowSlack * (1.0 + std::abs(c2_max))));

  // Sector half-planes along a row are linear in c1: a*c1 + b >= 0.
  const double s0_a = cross(u0, rb.first);
  const double s0_b = cross(u0, rb.second);
  const double s1_a = cross(rb.first, u1);
  const double s1_b = cross(rb.second, u1);

  std::size_t visited = 0;
  for (std::int64_t c2 = c2_lo; c2 <= c2_hi; ++c2) {
    double lo = 0.0;
    double hi = 0.0;
    if (!detail::disk_row_range(lattice, origin_t, box.r_hi, c2, lo, hi)) continue;
    if (clip_sector) {
      const double c2d = static_cast<double>(c2);
      const auto clip = [&](double a, double b) {
        const double scale = std::abs(b * c2d) + std::abs(a) * (std::abs(lo) + std::abs(hi)) + 1.0;
        const double slack = detail::kRowSlack * scale;
        if (std::abs(a) < 1e-300) {
          if (b * c2d < -slack) hi = lo - 1.0;
          return;
        }
        const double root = -b * c2d / a;
        const double tol = slack / std::abs(a);
        if (a > 0.0) lo = std::max(lo, root - tol);
        else hi = std::min(hi, root + tol);
      };
      clip(s0_a, s0_b);
      clip(s1_a, s1_b);
      if (hi < lo) continue;
    }
    double in_lo = 0.0;
    double in_hi = -1.0;
    bool has_inner = box.r_lo > 0.0 && detail::disk_row_range(lattice, origin_t, box.r_lo, c2, in_lo, in_hi);
    const double inner_tol = detail::kRowSlack * (1.0 + std::abs(in_lo) + std::abs(in_hi));
    const auto c1_lo = static_cast<std::int64_t>(std::ceil(lo - detail::kRowSlack * (1.0 + std::abs(lo))));
    const auto c1_hi = static_cast<std::int64_t>(std::floor(hi + detail::kRowSlack * (1.0 + std::abs(hi))));
    for (std::int64_t c1 = c1_lo; c1 <= c1_hi; ++c1) {
      if (has_inner) {
        const double c = static_cast<double>(c1);
        if (c > in_lo + inner_tol && c < in_hi - inner_tol) {
          // Skip the run of points strictly inside the inner disk.
          c1 = static_cast<std::int64_t>(std::ceil(in_hi - inner_tol)) - 1;
          has_inner = false;
          continue;
        }
      }
      const Vec2 p = lattice.reduced_point(static_cast<double>(c1), static_cast<double>(c2));
      if (!in_polar_box(p, box)) continue;
      detail::check_budget(++visited, cap);
      if (!visit(p)) return;
    }
  }
}

}  // namespace rotacover
