#include "rotacover/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "rotacover/errors.hpp"
#include "rotacover/parallel.hpp"
#include "rotacover/quadrature.hpp"

namespace rotacover {

using cplx = std::complex<double>;

// --- bumps -------------------------------------------------------------------

namespace {

double unit_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

// C^∞ step from 0 at t ≤ 0 to 1 at t ≥ 1, with S(t) + S(1 − t) = 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Density in terms of the offset o ∈ [0, L] from the arc start.
double bump_profile(const SmoothBump& b, double o) {
  const double L = b.arc.length;
  if (!(o > 0.0 && o < L)) return 0.0;
  if (b.ramp <= 0.0) {
    return b.mass * unit_bump(2.0 * o / L - 1.0) / (standard_bump_integral() * 0.5 * L);
  }
  const double level = b.mass / (L - b.ramp);
  if (o < b.ramp) return level * smooth_step(o / b.ramp);
  if (o > L - b.ramp) return level * smooth_step((L - o) / b.ramp);
  return level;
}

// Gauss panels that resolve the profile itself (ramps need their own panels).
std::size_t profile_panels(const SmoothBump& b) {
  if (b.ramp <= 0.0) return 4;
  return 4 + static_cast<std::size_t>(std::ceil(4.0 * b.arc.length / b.ramp));
}

}  // namespace

double standard_bump_integral() {
  static const double z = gauss_adaptive([](double t) { return unit_bump(t); }, -1.0, 1.0, 1e-16, 8).value;
  return z;
}

double bump_density(const SmoothBump& bump, double angle) {
  return bump_profile(bump, normalize_angle(angle - bump.arc.start));
}

double bump_mass_on(const SmoothBump& bump, double start, double length) {
  if (!(length > 0.0)) return 0.0;
  const double L = bump.arc.length;
  double lo = normalize_angle(start - bump.arc.start);
  if (lo >= L && lo + length < kTwoPi) return 0.0;
  if (lo >= L) lo -= kTwoPi;  // starts before the arc and wraps into it
  double hi = lo + length;
  lo = std::max(lo, 0.0);
  hi = std::min(hi, L);
  if (!(hi > lo)) return 0.0;
  const auto f = [&](double o) { return bump_profile(bump, o); };
  return gauss_adaptive(f, lo, hi, 1e-13 * std::max(bump.mass, 1e-300), profile_panels(bump)).value;
}

// --- measures ----------------------------------------------------------------

double total_mass(const CircleMeasure& sigma) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        double m = 0.0;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          for (const PointMass& a : s.atoms) m += a.weight;
        } else if constexpr (std::is_same_v<T, BumpMeasure>) {
          for (const SmoothBump& b : s.bumps) m += b.mass;
        } else {
          m = s.arcs.empty() ? 0.0 : 1.0;
        }
        return m;
      },
      sigma);
}

void validate(const CircleMeasure& sigma) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          if (s.atoms.empty()) throw PreconditionError("atomic measure needs at least one atom");
          for (const PointMass& a : s.atoms) {
            if (!std::isfinite(a.angle) || !(a.weight >= 0.0)) throw PreconditionError("atom weights must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, BumpMeasure>) {
          if (s.bumps.empty()) throw PreconditionError("bump measure needs at least one bump");
          for (const SmoothBump& b : s.bumps) {
            validate(AngleSet{b.arc});
            if (!(b.mass >= 0.0)) throw PreconditionError("bump mass must be >= 0");
            if (!(b.ramp >= 0.0 && 2.0 * b.ramp < b.arc.length)) {
              throw PreconditionError("bump ramp must lie in [0, length/2)");
            }
          }
        } else {
          if (s.arcs.empty()) throw PreconditionError("restriction measure needs at least one arc");
          for (std::size_t i = 0; i < s.arcs.size(); ++i) {
            validate(AngleSet{s.arcs[i]});
            for (std::size_t j = 0; j < i; ++j) {
              if (!arcs_disjoint(s.arcs[i], s.arcs[j])) throw PreconditionError("restriction arcs must be disjoint");
            }
          }
        }
      },
      sigma);
  if (std::abs(total_mass(sigma) - 1.0) > 1e-12) throw PreconditionError("measure must have total mass 1");
}

std::string kind_name(const CircleMeasure& sigma) {
  static const char* names[] = {"atomic", "bumps", "restriction"};
  return names[sigma.index()];
}

namespace {

double restriction_length(const RestrictionMeasure& r) {
  double t = 0.0;
  for (const Arc& a : r.arcs) t += a.length;
  return t;
}

// Density of an absolutely continuous measure at an angle.
double density_at(const CircleMeasure& sigma, double angle) {
  if (const auto* b = std::get_if<BumpMeasure>(&sigma)) {
    double v = 0.0;
    for (const SmoothBump& bump : b->bumps) v += bump_density(bump, angle);
    return v;
  }
  if (const auto* r = std::get_if<RestrictionMeasure>(&sigma)) {
    for (const Arc& a : r->arcs)
      if (normalize_angle(angle - a.start) < a.length) return 1.0 / restriction_length(*r);
    return 0.0;
  }
  throw PreconditionError("atomic measures have no density");
}

cplx arc_ft(const Arc& arc, double rho, double omega, double tol, std::size_t base_panels,
            const std::function<double(double)>& weight) {
  const auto f = [&](double o) {
    return weight(o) * std::polar(1.0, -kTwoPi * rho * std::cos(arc.start + o - omega));
  };
  const auto start = base_panels + static_cast<std::size_t>(std::ceil(rho * arc.length));
  return gauss_adaptive(f, 0.0, arc.length, tol, start).value;
}

}  // namespace

cplx measure_ft(const CircleMeasure& sigma, Vec2 xi, double tol) {
  const double rho = norm(xi);
  const double omega = polar_angle(xi);
  cplx v = std::visit(
      [&](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        cplx acc = 0.0;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          for (const PointMass& a : s.atoms) acc += a.weight * std::polar(1.0, -kTwoPi * dot(xi, from_polar(1.0, a.angle)));
        } else if constexpr (std::is_same_v<T, BumpMeasure>) {
          const double each = tol / static_cast<double>(s.bumps.size());
          for (const SmoothBump& b : s.bumps) {
            if (b.mass == 0.0) continue;
            acc += arc_ft(b.arc, rho, omega, each, profile_panels(b), [&b](double o) { return bump_profile(b, o); });
          }
        } else {
          const double w = 1.0 / restriction_length(s);
          const double each = tol / static_cast<double>(s.arcs.size());
          for (const Arc& a : s.arcs) acc += arc_ft(a, rho, omega, each, 2, [w](double) { return w; });
        }
        return acc;
      },
      sigma);
  if (std::abs(v) > 1.0 + 1e-9) throw InvariantFailure("transform of a probability measure exceeds 1");
  return v;
}

// --- spectra -----------------------------------------------------------------

CircleSpectrum::CircleSpectrum(std::vector<cplx> coefficients) : m_(std::move(coefficients)) {
  if (m_.empty()) throw PreconditionError("spectrum needs the zeroth coefficient");
}

cplx CircleSpectrum::coefficient(int n) const {
  const int a = std::abs(n);
  if (a > order()) return 0.0;
  return n >= 0 ? m_[a] : std::conj(m_[a]);
}

CircleSpectrum& CircleSpectrum::operator-=(const CircleSpectrum& other) {
  if (other.m_.size() > m_.size()) m_.resize(other.m_.size(), 0.0);
  for (std::size_t n = 0; n < other.m_.size(); ++n) m_[n] -= other.m_[n];
  return *this;
}

int spectrum_order(double rho) {
  const double x = kTwoPi * std::abs(rho);
  return static_cast<int>(std::ceil(x + 12.0 * std::cbrt(x) + 24.0));
}

std::vector<double> bessel_j_orders(double x, int order) {
  if (order < 0) throw PreconditionError("order must be nonnegative");
  std::vector<double> j(static_cast<std::size_t>(order) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double ax = std::abs(x);
  int start = std::max(order, static_cast<int>(std::ceil(ax))) + 40 + static_cast<int>(8.0 * std::cbrt(ax));
  if (start % 2) ++start;
  double next = 0.0, cur = 1e-300, norm_sum = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / ax * cur - next;
    next = cur;
    cur = prev;
    // cur = J_{k−1} up to scale
    if (k - 1 <= order) j[static_cast<std::size_t>(k - 1)] = cur;
    if ((k - 1) % 2 == 0) norm_sum += (k - 1 == 0 ? 1.0 : 2.0) * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm_sum *= 1e-250;
      for (int i = k - 1; i <= order; ++i) j[static_cast<std::size_t>(i)] *= 1e-250;
    }
  }
  for (double& v : j) v /= norm_sum;
  if (x < 0.0)
    for (std::size_t n = 1; n < j.size(); n += 2) j[n] = -j[n];
  return j;
}

namespace {

void add_bump_moments(const SmoothBump& b, std::vector<cplx>& m) {
  if (b.mass == 0.0) return;
  const int order = static_cast<int>(m.size()) - 1;
  const double L = b.arc.length;
  const auto panels = profile_panels(b) + static_cast<std::size_t>(std::ceil(order * L / kTwoPi));
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& gx = Rule::abscissa();
  const auto& gw = Rule::weights();
  const double h = L / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = h * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double o = mid + sgn * 0.5 * h * gx[i];
        const double w = 0.5 * h * gw[i] * bump_profile(b, o);
        if (w == 0.0) continue;
        const double theta = b.arc.start + o;
        const cplx step = std::polar(1.0, theta);
        cplx z = w;
        for (int n = 0; n <= order; ++n) {
          if (n % 128 == 0) z = std::polar(w, n * theta);
          m[static_cast<std::size_t>(n)] += z;
          z *= step;
        }
      }
    }
  }
}

}  // namespace

CircleSpectrum spectrum_of(const std::vector<SmoothBump>& bumps, int order) {
  if (order < 0) throw PreconditionError("order must be nonnegative");
  std::vector<cplx> m(static_cast<std::size_t>(order) + 1, 0.0);
  for (const SmoothBump& b : bumps) add_bump_moments(b, m);
  return CircleSpectrum(std::move(m));
}

CircleSpectrum spectrum_of(const CircleMeasure& sigma, int order) {
  if (order < 0) throw PreconditionError("order must be nonnegative");
  if (const auto* b = std::get_if<BumpMeasure>(&sigma)) return spectrum_of(b->bumps, order);
  std::vector<cplx> m(static_cast<std::size_t>(order) + 1, 0.0);
  if (const auto* a = std::get_if<AtomicMeasure>(&sigma)) {
    for (const PointMass& p : a->atoms)
      for (int n = 0; n <= order; ++n) m[static_cast<std::size_t>(n)] += std::polar(p.weight, n * p.angle);
  } else {
    const auto& r = std::get<RestrictionMeasure>(sigma);
    const double total = restriction_length(r);
    for (const Arc& arc : r.arcs) {
      m[0] += arc.length / total;
      for (int n = 1; n <= order; ++n) {
        const cplx diff = std::polar(1.0, n * arc.end()) - std::polar(1.0, n * arc.start);
        m[static_cast<std::size_t>(n)] += diff / (cplx(0.0, n) * total);
      }
    }
  }
  return CircleSpectrum(std::move(m));
}

namespace {

fftw_plan forward_plan(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(size);
  if (it != plans.end()) return it->second;
  std::vector<fftw_complex> in(size), out(size);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(size), in.data(), out.data(), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(size, p);
  return p;
}

std::size_t pow2_at_least(double v) {
  std::size_t n = 1;
  while (static_cast<double>(n) < v) n *= 2;
  return n;
}

}  // namespace

std::vector<cplx> CircleSpectrum::on_circle(double rho, std::size_t count, double omega0) const {
  const int N = std::min(order(), spectrum_order(rho));
  if (count < static_cast<std::size_t>(2 * N + 1)) throw PreconditionError("too few directions for the spectrum");
  const std::vector<double> J = bessel_j_orders(kTwoPi * rho, N);
  // σ̂(ρ, ω) = Σ_n (−i)ⁿ J_n(2πρ) m_n e^{−inω}
  std::vector<cplx> a(count, 0.0);
  static const cplx powers[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};
  for (int n = 0; n <= N; ++n) {
    const cplx c = powers[n % 4] * J[static_cast<std::size_t>(n)];
    a[static_cast<std::size_t>(n) % count] += c * m_[static_cast<std::size_t>(n)] * std::polar(1.0, -n * omega0);
    if (n > 0) {
      a[(count - static_cast<std::size_t>(n) % count) % count] +=
          c * std::conj(m_[static_cast<std::size_t>(n)]) * std::polar(1.0, n * omega0);
    }
  }
  std::vector<cplx> out(count);
  fftw_execute_dft(forward_plan(count), reinterpret_cast<fftw_complex*>(a.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

AnnulusSup sup_on_annulus(const CircleSpectrum& spectrum, double r_lo, double r_hi, const SampleGrid& grid) {
  if (!(r_lo >= 0.0 && r_hi >= r_lo)) throw PreconditionError("need 0 <= r_lo <= r_hi");
  if (spectrum.order() < spectrum_order(r_hi)) throw PreconditionError("spectrum order too small for the annulus");
  const double width = r_hi - r_lo;
  const std::size_t n_r =
      width == 0.0 ? 1
                   : std::max<std::size_t>(static_cast<std::size_t>(std::max(grid.min_samples, 2)),
                                           static_cast<std::size_t>(std::ceil(width / grid.step)) + 1);
  const double dr = n_r > 1 ? width / static_cast<double>(n_r - 1) : 0.0;
  std::vector<AnnulusSup> per(n_r);
  parallel_for(n_r, [&](std::size_t i) {
    const double r = std::min(r_hi, r_lo + (static_cast<double>(i) + grid.offset) * dr);
    const int N = spectrum_order(r);
    const std::size_t M = pow2_at_least(
        std::max({static_cast<double>(grid.min_samples), 2.0 * N + 1.0, kTwoPi * r / grid.step}));
    const double omega0 = grid.offset * kTwoPi / static_cast<double>(M);
    const std::vector<cplx> v = spectrum.on_circle(r, M, omega0);
    AnnulusSup best;
    best.samples = M;
    for (std::size_t k = 0; k < M; ++k) {
      const double a = std::abs(v[k]);
      if (a > best.sup) {
        best.sup = a;
        best.at = from_polar(r, omega0 + kTwoPi * static_cast<double>(k) / static_cast<double>(M));
      }
    }
    per[i] = best;
  });
  AnnulusSup out;
  for (const AnnulusSup& s : per) {
    out.samples += s.samples;
    if (s.sup > out.sup) {
      out.sup = s.sup;
      out.at = s.at;
    }
  }
  return out;
}

double ft_sup_on_annulus(const CircleMeasure& sigma, double r_lo, double r_hi, int grid) {
  if (!(r_lo > 0.0 && r_hi > r_lo)) throw PreconditionError("need 0 < r_lo < r_hi");
  validate(sigma);
  const CircleSpectrum spec = spectrum_of(sigma, spectrum_order(r_hi));
  SampleGrid g;
  g.min_samples = grid;
  return sup_on_annulus(spec, r_lo, r_hi, g).sup;
}

// --- threshold and criterion -------------------------------------------------

DeltaDetail delta_threshold_detail(const Lattice& lattice, double eps, const MollifierPair& m,
                                   const DeltaOptions& options) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("epsilon must be positive");
  const double b = m.normalizing_scale();
  DeltaDetail out;
  out.effective_eps = options.strict_epsilon ? eps / (m.support_radius() * b) : eps;
  const double s = b * out.effective_eps;
  const double det = lattice.det_abs();
  const double phihat0 = m.phihat_at_zero();

  // Poisson: Σ_{Λ*} φ̂(sλ) = det·s⁻²·Σ_Λ φ(λ/s) ≥ max(φ̂(0), det·φ(0)/s²).
  const double lower = std::max(phihat0, det * m.phi_at_zero() / (s * s));
  const double rho_cut = m.tail_radius(1e-14 * lower);
  if (rho_cut < 0.0) throw BudgetExceeded("truncation bound not achieved within tabulation range");
  const double radius = rho_cut / s;
  const double expected_terms = kPi * radius * radius * det + 1.0;

  if (expected_terms <= static_cast<double>(options.direct_cap)) {
    const Lattice dual = dual_lattice(lattice);
    double sum = 0.0;
    std::size_t terms = 0;
    for_each_point_in_disk(dual, {0.0, 0.0}, radius, [&](Vec2 lam) {
      sum += m.phihat(s * norm(lam));
      ++terms;
      return true;
    }, 4 * options.direct_cap + 64);
    // Dropped terms: density det of Λ* times ∫_{|η|>ρ_cut} φ̂(s|η|) dη.
    const double step = m.table_step();
    double tail = 0.0;
    for (double rho = rho_cut; rho < m.table_end(); rho += step) tail += m.phihat(rho) * rho * step;
    out.tail_bound = det * kTwoPi * tail / (s * s);
    out.sum = sum;
    out.terms = terms;
    out.method = "dual";
  } else {
    double sum = 0.0;
    std::size_t terms = 0;
    for (Vec2 lam : points_in_disk(lattice, {0.0, 0.0}, m.support_radius() * s)) {
      sum += m.phi(norm(lam) / s);
      ++terms;
    }
    out.sum = det * sum / (s * s);
    out.terms = terms;
    out.method = "poisson";
  }
  out.delta = phihat0 / out.sum;
  if (!(out.delta > 0.0 && out.delta <= 1.0 + 1e-12)) throw InvariantFailure("delta outside (0, 1]");
  return out;
}

double delta_threshold(const Lattice& lattice, double eps, const MollifierPair& m, const DeltaOptions& options) {
  return delta_threshold_detail(lattice, eps, m, options).delta;
}

const char* to_string(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::passes: return "passes";
    case CriterionVerdict::fails: return "fails";
    case CriterionVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::pair<double, double>> default_probe_annuli() {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < 10; ++k) out.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  return out;
}

CriterionReport check_goodness_criterion(const CircleMeasure& sigma, const Lattice& lattice, double eps,
                                         const std::vector<std::pair<double, double>>& annuli, int grid,
                                         const DeltaOptions& options) {
  validate(sigma);
  if (annuli.empty()) throw PreconditionError("need at least one probe annulus");
  CriterionReport rep;
  rep.delta = delta_threshold(lattice, eps, MollifierPair::standard(), options);
  rep.annuli = annuli;
  double r_max = 0.0;
  for (const auto& [lo, hi] : annuli) {
    if (!(lo > 0.0 && hi > lo)) throw PreconditionError("probe annuli need 0 < r_lo < r_hi");
    r_max = std::max(r_max, hi);
  }
  const CircleSpectrum spec = spectrum_of(sigma, spectrum_order(r_max));
  SampleGrid g;
  g.min_samples = grid;
  for (const auto& [lo, hi] : annuli) rep.sups.push_back(sup_on_annulus(spec, lo, hi, g).sup);

  bool nonincreasing = true;
  bool all_above = true;
  for (std::size_t i = 0; i < rep.sups.size(); ++i) {
    if (i > 0 && rep.sups[i] > rep.sups[i - 1]) nonincreasing = false;
    if (rep.sups[i] < rep.delta) all_above = false;
  }
  if (nonincreasing && rep.sups.back() < rep.delta) {
    rep.verdict = CriterionVerdict::passes;
  } else if (all_above && rep.sups.back() >= 0.95 * rep.sups.front()) {
    rep.verdict = CriterionVerdict::fails;
  }
  return rep;
}

// --- restriction measures ----------------------------------------------------

namespace {

// Disjoint components of a union of arcs, sorted by start.
std::vector<Arc> merge_arcs(std::vector<Arc> arcs) {
  for (const Arc& a : arcs) validate(AngleSet{a});
  for (const Arc& a : arcs)
    if (a.length >= kTwoPi) return {Arc{0.0, kTwoPi}};
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
  // Unroll onto [0, 4π) so wrapping arcs merge with those near 0.
  std::vector<std::pair<double, double>> iv;
  for (const Arc& a : arcs) iv.emplace_back(a.start, a.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [lo, hi] : iv) {
    if (!merged.empty() && lo <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, hi);
    } else {
      merged.emplace_back(lo, hi);
    }
  }
  // A component running past 2π may swallow the first ones.
  while (merged.size() > 1 && merged.back().second >= merged.front().first + kTwoPi) {
    merged.back().second = std::max(merged.back().second, merged.front().second + kTwoPi);
    merged.erase(merged.begin());
  }
  std::vector<Arc> out;
  for (const auto& [lo, hi] : merged) out.push_back(Arc{normalize_angle(lo), std::min(hi - lo, kTwoPi)});
  return out;
}

}  // namespace

double l1_distance(const CircleMeasure& a, const CircleMeasure& b, std::size_t samples_per_unit) {
  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi * static_cast<double>(samples_per_unit)));
  const double h = kTwoPi / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * h;
    sum += std::abs(density_at(a, t) - density_at(b, t));
  }
  return sum * h;
}

RestrictionResult build_restriction_measure(const ArcUnion& theta, double delta_target) {
  if (theta.arcs.empty()) throw PreconditionError("angle set has no arcs");
  if (!(delta_target > 0.0 && delta_target <= 1.0)) throw PreconditionError("delta_target must lie in (0, 1]");
  const std::vector<Arc> parts = merge_arcs(theta.arcs);
  // Every point of the longest component is a density point with density 1.
  const Arc window = *std::max_element(parts.begin(), parts.end(),
                                       [](const Arc& x, const Arc& y) { return x.length < y.length; });
  if (window.length >= kTwoPi) throw PreconditionError("angle set is the whole circle; use the uniform measure");
  RestrictionResult out;
  out.window = window;
  out.mu = RestrictionMeasure{{window}};
  out.density = 1.0;
  if (!(out.density > 1.0 - delta_target / 10.0)) throw PreconditionError("no window reaches the density bound");
  out.nu = BumpMeasure{{SmoothBump{window, 1.0, delta_target * window.length / 40.0}}};
  out.l1_mu_nu = l1_distance(CircleMeasure{out.mu}, CircleMeasure{out.nu},
                             static_cast<std::size_t>(std::max(20000.0, 4000.0 / (delta_target * window.length))));
  if (!(out.l1_mu_nu <= delta_target / 10.0)) throw InvariantFailure("surrogate too far from the restriction");
  return out;
}

}  // namespace rotacover
