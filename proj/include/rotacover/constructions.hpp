#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rotacover/coverage.hpp"
#include "rotacover/errors.hpp"

namespace rotacover {

// --- finite covers and good sequences ---------------------------------------

struct ShellCoverOptions {
  int max_depth = 10;
  // Greedy rounds before giving up with the residual uncovered area.
  int max_rounds = 100;
  VerifyOptions verify;
};

// The whole arc does not certify the shell; a larger radius may help.
class ArcInsufficient : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Finite F ⊆ arc whose rotations of E cover the shell r_lo ≤ |x| ≤ r_hi.
// Throws ArcInsufficient("arc insufficient for shell") when the whole arc
// does not certify the shell, and InvariantFailure when the greedy stalls.
FiniteAngles finite_cover_of_shell(const Arc& arc, const Lattice& lattice, double eps, double r_lo,
                                   double r_hi, const ShellCoverOptions& options = {});

struct ShellRecord {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double eps = 0.0;
  Arc arc;                     // sub-arc the angles were drawn from
  std::vector<double> angles;  // F for this shell
  std::size_t term = 0;        // schedule index for very-good sequences
  bool extension = false;      // covered with the previous, wider sub-arc
  std::size_t cell_count = 0;
  double covered_area = 0.0;
  double uncovered_area = 0.0;
  double ambiguous_area = 0.0;
};

struct GoodSequenceResult {
  std::vector<double> angles;  // sorted by decreasing distance to `limit`
  double limit = 0.0;
  Arc interval;
  double r_start = 0.0;  // effective first radius after any restarts
  std::vector<ShellRecord> shells;
  std::vector<std::string> adjustments;

  AngleSequence as_sequence() const { return {angles, limit}; }
};

struct GoodSequenceOptions {
  double shrink = 0.85;  // |I_{n+1}| / |I_n|
  int max_adjustments = 200;
  ShellCoverOptions cover;
};

// θ' = end(I) − |I|/10; I_n = arc of length |I|·shrinkⁿ placed so θ' splits
// it 9:1. Shells are [r_n, r_n + 1].
GoodSequenceResult build_good_sequence(const Lattice& lattice, double eps, const Arc& interval,
                                       double r_start, int n_shells,
                                       const GoodSequenceOptions& options = {});

struct VeryGoodTerm {
  double a = 0.0;    // angles of this term lie in (0, a)
  double eps = 0.0;  // fattening for this term
};

// Default schedule a_n = 1/n, ε_n = 1/n for n = 1..terms.
std::vector<VeryGoodTerm> default_very_good_schedule(int terms);

GoodSequenceResult build_very_good_sequence(const Lattice& lattice, const std::vector<VeryGoodTerm>& schedule,
                                            double r_start, int shells_per_term,
                                            const GoodSequenceOptions& options = {});

struct CheckResult {
  bool ok = true;
  std::string failure;
};

// Re-verifies every shell from scratch on a different initial grid, checks
// that the shells of each term are contiguous, that all angles lie in their
// interval and that their distance to the limit is nonincreasing.
CheckResult check_good_sequence(const GoodSequenceResult& result, const Lattice& lattice,
                                int max_depth = 12);

// --- bad sequences and bad perfect sets --------------------------------------

struct BadConstructionOptions {
  double rho = 0.05;
  HoleSearchOptions search = [] {
    HoleSearchOptions o;
    o.min_clearance = 0.02;
    return o;
  }();
};

struct BadSequenceResult {
  std::vector<double> angles;
  std::vector<Hole> holes;
  // clearances[n][j]: hole j against the first n + 1 angles (j ≤ n).
  std::vector<std::vector<double>> clearances;
};

BadSequenceResult build_bad_sequence(const Lattice& lattice, double eps, int count,
                                     const BadConstructionOptions& options = {});

struct PerfectSetResult {
  std::vector<std::vector<Arc>> levels;
  std::vector<Hole> holes;
  // clearances[n][j]: hole j against the arcs of level n + 1.
  std::vector<std::vector<double>> clearances;

  PerfectTree tree() const { return {levels}; }
};

PerfectSetResult build_bad_perfect_set(const Lattice& lattice, double eps, int depth,
                                       const Arc& root = Arc{0.0, 0.2},
                                       const BadConstructionOptions& options = {});

// Recomputes every clearance exactly and checks radii, disjointness and nesting.
CheckResult check_bad_sequence(const BadSequenceResult& result, const Lattice& lattice, double eps);
CheckResult check_perfect_set(const PerfectSetResult& result, const Lattice& lattice, double eps);

// --- torus segments and the elementary t₀ ------------------------------------

// Largest cyclic gap between consecutive points of {frac(slope·k) : 0 ≤ k < count}.
double strand_gap(double slope, std::size_t count);

// Length h (as x-extent) such that the δ-neighbourhood of the segment
// {(x, slope·x) mod 1 : 0 ≤ x ≤ h} covers the torus. Certified by the strand
// gap along the steeper axis; h is a whole number of strands, so it is the
// least certified value on that grid rather than the exact infimum.
double torus_segment_density(double slope, double delta, std::size_t max_strands = std::size_t{1} << 22);

// Directions spaced by θ0/2 whose tangents are quadratic irrationals.
std::vector<double> default_slope_angles(double theta0);

struct ElementaryT0 {
  double t0 = 0.0;
  double strip_length = 0.0;  // Euclidean H
  std::vector<double> h;      // per direction, as x-extent
};

// t₀ such that every annulus-arc {t < r < t + ε, γ ≤ φ ≤ γ + 2θ0}, t > t₀,
// contains a point of Z². `alphas` must leave no open gap of length θ0.
ElementaryT0 elementary_t0(double eps, double theta0, const std::vector<double>& alphas);

// --- dilates of the line -----------------------------------------------------

struct DilateCover {
  std::vector<int> factors;         // 1..K, K = ⌈1/ε⌉
  int minimal_prefix = 0;           // smallest K' with 1..K' already enough
  double max_min_distance = 0.0;    // max over x of min_k dist(kx, Z) for 1..K
  std::size_t breakpoints = 0;      // rationals checked
};

DilateCover dilate_cover(double eps);

// Exact max over x ∈ [0, 1] of min_{k ≤ K} dist(kx, Z), as a fraction.
std::pair<long, long> dilate_max_min_distance(int K);

}  // namespace rotacover
