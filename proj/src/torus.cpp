#include <algorithm>
#include <cmath>
#include <map>

#include "rotacover/constructions.hpp"

namespace rotacover {

double strand_gap(double slope, std::size_t count) {
  if (count == 0) return 1.0;
  std::vector<double> y(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double v = slope * static_cast<double>(k);
    y[k] = v - std::floor(v);
  }
  std::sort(y.begin(), y.end());
  double gap = 1.0 - y.back() + y.front();
  for (std::size_t k = 1; k < count; ++k) gap = std::max(gap, y[k] - y[k - 1]);
  return gap;
}

double torus_segment_density(double slope, double delta, std::size_t max_strands) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw PreconditionError("delta must be positive");
  if (!std::isfinite(slope)) throw PreconditionError("slope must be finite");
  // The torus has diameter √2/2, so one point is within δ of everything.
  if (delta > M_SQRT1_2) return 0.0;

  // Walk along the flatter axis. A segment of K whole units crosses every
  // transversal line K times, at heights frac(s·k + c); a point of the torus
  // is then within half the largest gap of the segment in that direction.
  const bool steep = std::abs(slope) > 1.0;
  const double s = steep ? 1.0 / slope : slope;
  const auto ok = [&](std::size_t k) { return strand_gap(s, k) < 2.0 * delta; };

  std::size_t hi = 1;
  while (!ok(hi)) {
    if (hi >= max_strands) throw BudgetExceeded("slope too well-approximable for budget");
    hi = std::min(hi * 2, max_strands);
  }
  std::size_t lo = hi / 2;  // fails (or is zero)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  const double units = static_cast<double>(hi);
  return steep ? units / std::abs(slope) : units;
}

std::vector<double> default_slope_angles(double theta0) {
  if (!(theta0 > 0.0)) throw PreconditionError("theta0 must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / (0.5 * theta0)));
  const double spacing = kTwoPi / static_cast<double>(n);
  // Tangents (m + √2 − 1)/D move each target by at most ~θ0/8.
  const double D = std::ceil(8.0 / std::min(theta0, kPi));
  const double frac = M_SQRT2 - 1.0;
  std::vector<double> out;
  for (std::size_t j = 0; j < n; ++j) {
    const double beta = (static_cast<double>(j) + 0.5) * spacing;
    double alpha;
    if (std::abs(std::cos(beta)) >= std::abs(std::sin(beta))) {
      const double t = (std::round(D * std::tan(beta)) + frac) / D;
      alpha = std::atan(t) + (std::cos(beta) < 0.0 ? kPi : 0.0);
    } else {
      const double c = (std::round(D / std::tan(beta)) + frac) / D;
      alpha = std::atan2(1.0, c) + (std::sin(beta) < 0.0 ? kPi : 0.0);
    }
    out.push_back(normalize_angle(alpha));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ElementaryT0 elementary_t0(double eps, double theta0, const std::vector<double>& alphas) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(theta0 > 0.0)) throw PreconditionError("theta0 must be positive");
  if (alphas.empty()) throw PreconditionError("need at least one direction");
  std::vector<double> sorted;
  for (double a : alphas) sorted.push_back(normalize_angle(a));
  std::sort(sorted.begin(), sorted.end());
  double gap = kTwoPi - sorted.back() + sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::max(gap, sorted[i] - sorted[i - 1]);
  if (!(gap < theta0)) throw PreconditionError("directions leave an open arc of length theta0 empty");

  ElementaryT0 out;
  std::map<double, double> cache;
  double H = 0.0;
  for (double a : alphas) {
    if (std::abs(std::sin(a)) < 1e-12 || std::abs(std::cos(a)) < 1e-12) {
      throw PreconditionError("direction has a rational tangent");
    }
    const double slope = -std::cos(a) / std::sin(a);
    auto it = cache.find(slope);
    if (it == cache.end()) it = cache.emplace(slope, torus_segment_density(slope, 0.25 * eps)).first;
    out.h.push_back(it->second);
    H = std::max(H, it->second * std::sqrt(1.0 + slope * slope));
  }
  out.strip_length = H;

  // Strip from p = (t + ε/2, α): tangential extent L = H + ε/4 (end cap),
  // normal extent ±ε/4. Its farthest point has radius
  // √((t + 3ε/4)² + L²) < t + ε  ⟺  t > 2L²/ε − 7ε/8, and its angle
  // deviates from α by at most atan(L/(t + ε/4)), which must stay below
  // θ0/2 (α sits in the middle half of the annulus-arc).
  const double L = H + 0.25 * eps;
  double t0 = std::max(0.0, 2.0 * L * L / eps - 0.875 * eps);
  if (theta0 < kPi) t0 = std::max(t0, L / std::tan(0.5 * theta0) - 0.25 * eps);
  out.t0 = t0;
  return out;
}

}  // namespace rotacover
