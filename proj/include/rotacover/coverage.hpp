#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "rotacover/angles.hpp"
#include "rotacover/lattice.hpp"

namespace rotacover {

enum class Verdict { covered, uncovered, ambiguous };

const char* to_string(Verdict v);

// min over λ ∈ Λ of |x − λ|, by rounding in reduced coordinates and checking
// the integer offsets in [−2, 2]².
double dist_to_lattice(const Lattice& lattice, Vec2 x);
Vec2 closest_lattice_point(const Lattice& lattice, Vec2 x);

// Smallest |R_{−θ}x − λ| over θ in the support and λ ∈ Λ, together with a
// minimizing angle. Distances ≥ cutoff are reported as `cutoff` with an
// unspecified angle. The search stops as soon as a distance < stop_below is seen.
struct RotatedDistance {
  double distance = std::numeric_limits<double>::infinity();
  double angle = 0.0;
};

RotatedDistance min_rotated_distance(Vec2 x, const AngleSupport& support, const Lattice& lattice,
                                     double cutoff,
                                     double stop_below = -std::numeric_limits<double>::infinity(),
                                     std::size_t cap = kDefaultEnumerationCap);

// Whether x ∈ R_Θ E, with E = Λ + B_ε(0). Within kEta of the boundary the
// answer is `ambiguous`.
Verdict covers_point(Vec2 x, const AngleSet& angles, const Lattice& lattice, double eps);
Verdict covers_point(Vec2 x, const AngleSupport& support, const Lattice& lattice, double eps);

struct CoverageCell {
  PolarBox box;
  Verdict verdict = Verdict::ambiguous;
  int depth = 0;
};

struct CoverageReport {
  PolarBox region;
  double eps = 0.0;
  int max_depth = 0;
  std::vector<CoverageCell> cells;  // empty when cells were not kept
  std::size_t cell_count = 0;
  double covered_area = 0.0;
  double uncovered_area = 0.0;
  double ambiguous_area = 0.0;

  double total_area() const { return covered_area + uncovered_area + ambiguous_area; }
  double ambiguous_fraction() const {
    const double total = total_area();
    return total > 0.0 ? ambiguous_area / total : 0.0;
  }
  bool fully_covered() const { return uncovered_area == 0.0 && ambiguous_area == 0.0; }
};

struct VerifyOptions {
  // Side of the initial polar grid cells; 0 means ε.
  double initial_cell = 0.0;
  bool keep_cells = true;
  // Abandon the run at the first cell that cannot be certified covered.
  bool stop_on_failure = false;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

// Adaptive polar subdivision of `region`. A cell is covered when a single
// (θ, λ) witness covers all of it, uncovered when every rotation keeps it at
// least kEta outside E, and ambiguous when max_depth is reached first.
CoverageReport verify_region(const AngleSet& angles, const Lattice& lattice, double eps,
                             const PolarBox& region, int max_depth,
                             const VerifyOptions& options = {});
CoverageReport verify_region(const AngleSupport& support, const Lattice& lattice, double eps,
                             const PolarBox& region, int max_depth,
                             const VerifyOptions& options = {});

// Distance from the center of a polar cell to any of its points is at most this.
double cell_radius(const PolarBox& cell);

struct T0Options {
  int max_depth = 12;
  VerifyOptions verify;
};

// Smallest t ≤ t_max such that every shell [t', t' + shell_width], t' = t_max,
// t_max − w, …, ≥ t is certified covered. Desk-scale evidence only.
std::optional<double> empirical_t0(const AngleSet& angles, const Lattice& lattice, double eps,
                                   double shell_width, double t_max, const T0Options& options = {});

// --- holes -----------------------------------------------------------------

// Closed disk missed by R_Θ Ē: for every θ, dist(R_{−θ}center, Λ) ≥ ε + radius + clearance.
struct Hole {
  Vec2 center;
  double radius = 0.0;
  double clearance = 0.0;
  friend bool operator==(const Hole&, const Hole&) = default;
};

// Exact clearance of the disk against the rotations in `support` (per-angle
// for isolated angles, closed-form over arcs). Negative means the disk is hit.
double hole_clearance(Vec2 center, double radius, const AngleSupport& support,
                      const Lattice& lattice, double eps);

struct HoleSearchOptions {
  double growth = 2.0;
  std::size_t keep = 32;
  int max_rounds = 6;
  double min_clearance = kEta;
  std::vector<Hole> avoid;  // accepted holes keep a gap of 2ρ to these
  std::size_t enumeration_cap = 4'000'000;
};

// A point locally maximizing the distance to Λ, reached from the center of the
// fundamental domain.
Vec2 deep_hole(const Lattice& lattice);

Hole find_hole_beyond(const FiniteAngles& angles, const Lattice& lattice, double eps, double min_radius,
                      double rho_target, const HoleSearchOptions& options = {});

}  // namespace rotacover
