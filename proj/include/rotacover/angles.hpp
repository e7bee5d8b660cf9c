#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rotacover/geometry.hpp"

namespace rotacover {

// Closed arc of S¹ stored as (start, length), start ∈ [0, 2π), length ∈ (0, 2π].
struct Arc {
  double start = 0.0;
  double length = kTwoPi;

  static Arc make(double start, double length);
  double end() const { return start + length; }
  double midpoint() const { return normalize_angle(start + 0.5 * length); }
  bool contains(double angle) const {
    return length >= kTwoPi || normalize_angle(angle - start) <= length;
  }
  // Closed arc contained in this one (up to `tol`).
  bool contains(const Arc& inner, double tol = 1e-12) const;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Circular distance from `angle` to the closed arc (0 inside).
double distance_to_arc(double angle, const Arc& arc);

bool arcs_disjoint(const Arc& a, const Arc& b);

struct FiniteAngles {
  std::vector<double> angles;  // nonempty, normalized, sorted
};

struct ArcUnion {
  std::vector<Arc> arcs;
};

// A convergent sequence stored by a finite prefix plus its limit.
struct AngleSequence {
  std::vector<double> angles;
  double limit = 0.0;
};

// Nested binary arc families; level n has 2ⁿ arcs.
struct PerfectTree {
  std::vector<std::vector<Arc>> levels;
};

using AngleSet = std::variant<FiniteAngles, Arc, ArcUnion, AngleSequence, PerfectTree>;

FiniteAngles make_finite(std::vector<double> angles);

// Throws PreconditionError describing the first violated invariant.
void validate(const AngleSet& set);

std::string kind_name(const AngleSet& set);
bool is_arc_type(const AngleSet& set);

// Rotates every angle of the set by `phi`.
AngleSet shifted(const AngleSet& set, double phi);

// Finite data a set is evaluated on: isolated angles plus closed arcs.
// Sequences contribute their stored prefix and limit; perfect trees their
// deepest stored level (all verdicts are "on truncation").
struct AngleSupport {
  std::vector<double> points;
  std::vector<Arc> arcs;
};

AngleSupport support_of(const AngleSet& set);

}  // namespace rotacover
