#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotacover/constructions.hpp"

namespace rotacover {

FiniteAngles finite_cover_of_shell(const Arc& arc, const Lattice& lattice, double eps, double r_lo,
                                   double r_hi, const ShellCoverOptions& options) {
  validate(AngleSet{arc});
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const PolarBox shell{r_lo, r_hi, 0.0, kTwoPi};
  if (!shell.valid()) throw PreconditionError("invalid shell");

  const AngleSupport whole{{}, {arc}};
  VerifyOptions quick = options.verify;
  quick.keep_cells = false;
  quick.stop_on_failure = true;
  if (!verify_region(whole, lattice, eps, shell, options.max_depth, quick).fully_covered()) {
    throw ArcInsufficient("arc insufficient for shell");
  }

  VerifyOptions full = options.verify;
  full.keep_cells = true;
  full.stop_on_failure = false;
  std::vector<double> chosen;
  double residual = 0.0;
  for (int round = 0; round < options.max_rounds; ++round) {
    const CoverageReport report = verify_region(AngleSupport{chosen, {}}, lattice, eps, shell,
                                                options.max_depth, full);
    if (report.fully_covered()) return make_finite(chosen);
    residual = report.uncovered_area + report.ambiguous_area;

    std::vector<const CoverageCell*> open;
    for (const CoverageCell& c : report.cells)
      if (c.verdict != Verdict::covered) open.push_back(&c);
    std::stable_sort(open.begin(), open.end(), [](const CoverageCell* a, const CoverageCell* b) {
      return a->box.area() > b->box.area();
    });

    // Largest cells first; a cell whose center this round already covers waits
    // for the next verification.
    std::vector<double> fresh;
    for (const CoverageCell* cell : open) {
      const Vec2 c = from_polar(0.5 * (cell->box.r_lo + cell->box.r_hi),
                                cell->box.phi_lo + 0.5 * cell->box.angular_width());
      bool seen = false;
      for (double t : fresh) {
        if (dist_to_lattice(lattice, rotate(c, -t)) < eps - cell_radius(cell->box) - kEta) {
          seen = true;
          break;
        }
      }
      if (seen) continue;
      const RotatedDistance w = min_rotated_distance(c, whole, lattice, eps + kEta, -1.0,
                                                     options.verify.enumeration_cap);
      if (w.distance >= eps) continue;
      fresh.push_back(w.angle);
    }
    const std::size_t before = chosen.size();
    for (double t : fresh) {
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    if (chosen.size() == before) break;
  }
  std::ostringstream msg;
  msg << "greedy stall: residual uncovered area " << residual;
  throw InvariantFailure(msg.str());
}

}  // namespace rotacover
