#include "rotacover/angles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotacover/errors.hpp"

namespace rotacover {

Arc Arc::make(double start, double length) {
  if (!std::isfinite(start) || !std::isfinite(length) || !(length > 0.0)) {
    throw PreconditionError("arc length must be positive");
  }
  return {normalize_angle(start), std::min(length, kTwoPi)};
}

bool Arc::contains(const Arc& inner, double tol) const {
  if (length >= kTwoPi) return true;
  if (inner.length > length + tol) return false;
  const double offset = normalize_angle(inner.start - start + tol);
  return offset + inner.length <= length + 2.0 * tol;
}

double distance_to_arc(double angle, const Arc& arc) {
  if (arc.length >= kTwoPi) return 0.0;
  const double d = normalize_angle(angle - arc.start);
  if (d <= arc.length) return 0.0;
  return std::min(d - arc.length, kTwoPi - d);
}

bool arcs_disjoint(const Arc& a, const Arc& b) {
  if (a.length + b.length >= kTwoPi) return false;
  const double d = normalize_angle(b.start - a.start);
  return d > a.length && d + b.length < kTwoPi;
}

FiniteAngles make_finite(std::vector<double> angles) {
  if (angles.empty()) throw PreconditionError("finite angle set must be nonempty");
  for (double& a : angles) {
    if (!std::isfinite(a)) throw PreconditionError("angle must be finite");
    a = normalize_angle(a);
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return {std::move(angles)};
}

namespace {

void validate_arc(const Arc& a) {
  if (!(a.length > 0.0) || a.length > kTwoPi || !(a.start >= 0.0 && a.start < kTwoPi)) {
    throw PreconditionError("arc must have start in [0, 2pi) and length in (0, 2pi]");
  }
}

}  // namespace

void validate(const AngleSet& set) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteAngles>) {
          if (s.angles.empty()) throw PreconditionError("finite angle set must be nonempty");
          if (!std::is_sorted(s.angles.begin(), s.angles.end())) {
            throw PreconditionError("finite angle set must be sorted");
          }
        } else if constexpr (std::is_same_v<T, Arc>) {
          validate_arc(s);
        } else if constexpr (std::is_same_v<T, ArcUnion>) {
          if (s.arcs.empty()) throw PreconditionError("arc union must be nonempty");
          for (const Arc& a : s.arcs) validate_arc(a);
        } else if constexpr (std::is_same_v<T, AngleSequence>) {
          double prev = std::numeric_limits<double>::infinity();
          for (double a : s.angles) {
            const double d = std::abs(std::remainder(a - s.limit, kTwoPi));
            if (d > prev + 1e-15) {
              throw PreconditionError("sequence distance to its limit must be nonincreasing");
            }
            prev = d;
          }
        } else {
          if (s.levels.empty()) throw PreconditionError("perfect tree needs a root level");
          for (std::size_t n = 0; n < s.levels.size(); ++n) {
            if (s.levels[n].size() != (std::size_t{1} << n)) {
              throw PreconditionError("perfect tree level n must hold 2^n arcs");
            }
            for (const Arc& a : s.levels[n]) validate_arc(a);
            if (n == 0) continue;
            const auto& level = s.levels[n];
            for (std::size_t i = 0; i < level.size(); ++i) {
              if (!s.levels[n - 1][i / 2].contains(level[i], 1e-12)) {
                throw PreconditionError("perfect tree arc escapes its parent");
              }
              for (std::size_t j = i + 1; j < level.size(); ++j) {
                if (!arcs_disjoint(level[i], level[j])) {
                  throw PreconditionError("perfect tree arcs at one level must be disjoint");
                }
              }
            }
          }
        }
      },
      set);
}

std::string kind_name(const AngleSet& set) {
  static const char* names[] = {"finite", "arc", "arcs", "sequence", "perfect_tree"};
  return names[set.index()];
}

bool is_arc_type(const AngleSet& set) {
  return std::holds_alternative<Arc>(set) || std::holds_alternative<ArcUnion>(set);
}

AngleSet shifted(const AngleSet& set, double phi) {
  return std::visit(
      [phi](const auto& s) -> AngleSet {
        using T = std::decay_t<decltype(s)>;
        const auto shift_arc = [phi](Arc a) { return Arc{normalize_angle(a.start + phi), a.length}; };
        if constexpr (std::is_same_v<T, FiniteAngles>) {
          std::vector<double> v = s.angles;
          for (double& a : v) a += phi;
          return make_finite(std::move(v));
        } else if constexpr (std::is_same_v<T, Arc>) {
          return shift_arc(s);
        } else if constexpr (std::is_same_v<T, ArcUnion>) {
          ArcUnion out = s;
          for (Arc& a : out.arcs) a = shift_arc(a);
          return out;
        } else if constexpr (std::is_same_v<T, AngleSequence>) {
          AngleSequence out = s;
          for (double& a : out.angles) a += phi;
          out.limit += phi;
          return out;
        } else {
          PerfectTree out = s;
          for (auto& level : out.levels)
            for (Arc& a : level) a = shift_arc(a);
          return out;
        }
      },
      set);
}

AngleSupport support_of(const AngleSet& set) {
  AngleSupport out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteAngles>) {
          out.points = s.angles;
        } else if constexpr (std::is_same_v<T, Arc>) {
          out.arcs.push_back(s);
        } else if constexpr (std::is_same_v<T, ArcUnion>) {
          out.arcs = s.arcs;
        } else if constexpr (std::is_same_v<T, AngleSequence>) {
          out.points = s.angles;
          out.points.push_back(s.limit);
        } else {
          out.arcs = s.levels.back();
        }
      },
      set);
  for (double& a : out.points) a = normalize_angle(a);
  return out;
}

}  // namespace rotacover
