#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rotacover/angles.hpp"
#include "rotacover/lattice.hpp"

namespace rotacover {

// --- measures on the circle --------------------------------------------------

struct PointMass {
  double angle = 0.0;
  double weight = 0.0;
};

struct AtomicMeasure {
  std::vector<PointMass> atoms;
};

// Smooth bump carrying `mass` on `arc`, supported strictly inside it. With
// ramp == 0 the profile is exp(−1/(1−t²)) over the whole arc; with ramp > 0 it
// is flat in the middle with C^∞ steps of width `ramp` at both ends.
struct SmoothBump {
  Arc arc;
  double mass = 0.0;
  double ramp = 0.0;
};

struct BumpMeasure {
  std::vector<SmoothBump> bumps;
};

// Normalized arc length on a union of disjoint arcs.
struct RestrictionMeasure {
  std::vector<Arc> arcs;
};

using CircleMeasure = std::variant<AtomicMeasure, BumpMeasure, RestrictionMeasure>;

// ∫₋₁¹ exp(−1/(1−t²)) dt.
double standard_bump_integral();

// Density of the bump with respect to dθ at `angle`.
double bump_density(const SmoothBump& bump, double angle);

// Mass the bump puts on the sub-arc [start, start + length].
double bump_mass_on(const SmoothBump& bump, double start, double length);

double total_mass(const CircleMeasure& sigma);

// Nonnegative weights, supports inside their arcs, total mass 1 within 1e−12.
void validate(const CircleMeasure& sigma);

std::string kind_name(const CircleMeasure& sigma);

// σ̂(ξ) = ∫ exp(−2πi ξ·u(θ)) dσ(θ), u(θ) = (cos θ, sin θ). Densities use
// adaptive quadrature with absolute tolerance `tol`.
std::complex<double> measure_ft(const CircleMeasure& sigma, Vec2 xi, double tol = 1e-9);

// --- transforms on whole circles via the Jacobi–Anger expansion ---------------

// Coefficients m_n = ∫ e^{inθ} dσ(θ), 0 ≤ n ≤ order, of a real (possibly
// signed) measure; m_{−n} = conj(m_n).
class CircleSpectrum {
 public:
  CircleSpectrum() = default;
  explicit CircleSpectrum(std::vector<std::complex<double>> coefficients);

  int order() const { return static_cast<int>(m_.size()) - 1; }
  std::complex<double> coefficient(int n) const;

  // σ̂ at ρ·(cos ω_k, sin ω_k), ω_k = ω₀ + 2πk/count.
  std::vector<std::complex<double>> on_circle(double rho, std::size_t count, double omega0 = 0.0) const;

  CircleSpectrum& operator-=(const CircleSpectrum& other);

 private:
  std::vector<std::complex<double>> m_;
};

// Harmonics needed to resolve σ̂ on circles of radius ≤ rho.
int spectrum_order(double rho);

CircleSpectrum spectrum_of(const CircleMeasure& sigma, int order);
CircleSpectrum spectrum_of(const std::vector<SmoothBump>& bumps, int order);

// J_n(x) for 0 ≤ n ≤ order by downward recurrence.
std::vector<double> bessel_j_orders(double x, int order);

struct SampleGrid {
  int min_samples = 64;        // per radius and along the radial direction
  double step = 0.25;          // radial spacing and arc spacing at each radius
  double offset = 0.0;         // in [0, 1): shifts radii and angles by this fraction of a step
};

struct AnnulusSup {
  double sup = 0.0;
  Vec2 at;
  std::size_t samples = 0;
};

// Largest sampled |σ̂| over r_lo ≤ |ξ| ≤ r_hi. A sampled value, so an
// under-estimate of the true supremum.
AnnulusSup sup_on_annulus(const CircleSpectrum& spectrum, double r_lo, double r_hi, const SampleGrid& grid = {});

double ft_sup_on_annulus(const CircleMeasure& sigma, double r_lo, double r_hi, int grid = 64);

// --- mollifier and the goodness threshold ------------------------------------

// ψ(x) = c·exp(−1/(1−(|x|/5)²)) on B₅; φ = ψ ⋆ ψ(−·) on B₁₀ with φ̂ = ψ̂² ≥ 0.
// φ̂ is tabulated radially from the projection P(x) = ∫ψ(x, y) dy.
class MollifierPair {
 public:
  explicit MollifierPair(double amplitude = 1.0);
  static const MollifierPair& standard();

  double psi(double r) const;
  double phi_at_zero() const { return phi0_; }
  double phihat_at_zero() const { return phihat0_; }
  double phihat(double rho) const;
  // φ(r) by the radial inverse transform of the table.
  double phi(double r) const;
  double support_radius() const { return 10.0; }
  // Dilation b with φ_b(x) = φ(x/b)/φ(0) satisfying φ_b(0) = φ̂_b(0) = 1.
  double normalizing_scale() const;

  double table_step() const { return step_; }
  double table_end() const { return step_ * static_cast<double>(table_.size() - 1); }
  // Smallest tabulated ρ beyond which every tabulated φ̂ is below `level`;
  // negative when the table never gets there.
  double tail_radius(double level) const;
  // Fitted log φ̂(ρ) ≈ a − c·√ρ over the tail of the table.
  std::pair<double, double> decay_fit() const { return fit_; }

 private:
  double amplitude_;
  double step_;
  std::vector<double> table_;      // ψ̂ on the grid
  std::vector<double> tail_max_;   // max_{j ≥ i} φ̂
  double phi0_ = 0.0;
  double phihat0_ = 0.0;
  std::pair<double, double> fit_;
};

struct DeltaOptions {
  // Evaluate at ε/(10b) so the normalized φ is supported in B_ε.
  bool strict_epsilon = false;
  // Largest direct dual-lattice sum; beyond it the equivalent real-space
  // Poisson sum is used.
  std::size_t direct_cap = 4'000'000;
};

struct DeltaDetail {
  double delta = 0.0;
  double sum = 0.0;          // Σ_{λ∈Λ*} φ̂(bε'λ)
  double tail_bound = 0.0;   // estimate of the dropped terms
  std::size_t terms = 0;
  std::string method;        // "dual" or "poisson"
  double effective_eps = 0.0;
};

// δ = 1/Σ_{λ∈Λ*} φ̂_b(ελ) for the normalized φ_b; equivalently
// φ̂(0) / Σ φ̂(bελ).
DeltaDetail delta_threshold_detail(const Lattice& lattice, double eps,
                                   const MollifierPair& m = MollifierPair::standard(),
                                   const DeltaOptions& options = {});
double delta_threshold(const Lattice& lattice, double eps, const MollifierPair& m = MollifierPair::standard(),
                       const DeltaOptions& options = {});

enum class CriterionVerdict { passes, fails, inconclusive };
const char* to_string(CriterionVerdict v);

struct CriterionReport {
  CriterionVerdict verdict = CriterionVerdict::inconclusive;
  double delta = 0.0;
  std::vector<std::pair<double, double>> annuli;
  std::vector<double> sups;
  std::string note = "numerical evidence, not proof";
};

// Annuli [2^k, 2^{k+1}], k = 0..9.
std::vector<std::pair<double, double>> default_probe_annuli();

// passes: sups nonincreasing and the last below δ; fails: every sup ≥ δ and the
// last at least 0.95 of the first; otherwise inconclusive.
CriterionReport check_goodness_criterion(const CircleMeasure& sigma, const Lattice& lattice, double eps,
                                         const std::vector<std::pair<double, double>>& annuli =
                                             default_probe_annuli(),
                                         int grid = 64, const DeltaOptions& options = {});

struct RestrictionResult {
  RestrictionMeasure mu;  // normalized arc length on Θ ∩ J
  Arc window;             // J
  double density = 0.0;   // |Θ ∩ J| / |J|
  BumpMeasure nu;         // smooth surrogate on J
  double l1_mu_nu = 0.0;  // ‖μ − ν‖₁ by direct integration
};

RestrictionResult build_restriction_measure(const ArcUnion& theta, double delta_target);

// ∫|f − g| over the circle for two absolutely continuous measures.
double l1_distance(const CircleMeasure& a, const CircleMeasure& b, std::size_t samples_per_unit = 20000);

}  // namespace rotacover
