#include <algorithm>
#include <cmath>
#include <complex>

#include "rotacover/fourier.hpp"
#include "rotacover/quadrature.hpp"

namespace rotacover {

namespace {

constexpr double kPsiRadius = 5.0;
constexpr double kTableEnd = 16.0;
constexpr int kStepsPerUnit = 2048;

double unit_bump(double r) {
  const double t = r / kPsiRadius;
  if (!(t < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

}  // namespace

MollifierPair::MollifierPair(double amplitude) : amplitude_(amplitude), step_(1.0 / kStepsPerUnit) {
  if (!(amplitude > 0.0)) throw PreconditionError("mollifier amplitude must be positive");

  // Projection onto the x-axis on Gauss nodes of [0, 5].
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& gx = Rule::abscissa();
  const auto& gw = Rule::weights();
  const std::size_t panels = 160;
  const double h = kPsiRadius / static_cast<double>(panels);
  std::vector<double> nodes, weights;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = h * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        nodes.push_back(mid + sgn * 0.5 * h * gx[i]);
        weights.push_back(0.5 * h * gw[i]);
      }
    }
  }
  std::vector<double> proj(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double x = nodes[k];
    const double y_max = std::sqrt(std::max(0.0, kPsiRadius * kPsiRadius - x * x));
    proj[k] = 2.0 * amplitude_ *
              gauss_composite([x](double y) { return unit_bump(std::hypot(x, y)); }, 0.0, y_max, 8);
  }

  // ψ̂(ρ) = 2∫₀⁵ P(x) cos(2πρx) dx on the grid ρ_j = j·step.
  const std::size_t n = static_cast<std::size_t>(kTableEnd * kStepsPerUnit) + 1;
  table_.assign(n, 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double wk = 2.0 * weights[k] * proj[k];
    const std::complex<double> rot = std::polar(1.0, kTwoPi * step_ * nodes[k]);
    std::complex<double> z = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j % 256 == 0) z = std::polar(1.0, kTwoPi * step_ * static_cast<double>(j) * nodes[k]);
      table_[j] += wk * z.real();
      z *= rot;
    }
  }

  phihat0_ = table_[0] * table_[0];
  phi0_ = kTwoPi * amplitude_ * amplitude_ *
          gauss_composite([](double r) { return unit_bump(r) * unit_bump(r) * r; }, 0.0, kPsiRadius, 64);

  tail_max_.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    running = std::max(running, table_[j] * table_[j]);
    tail_max_[j] = running;
  }

  // Least squares for log(envelope) ≈ a − c√ρ over 1 ≤ ρ while the envelope
  // stays well above rounding noise.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t j = kStepsPerUnit; j < n; j += 16) {
    if (tail_max_[j] < 1e-26 * phihat0_) break;
    const double x = std::sqrt(static_cast<double>(j) * step_);
    const double y = std::log(tail_max_[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  fit_ = {(sy - slope * sx) / cnt, -slope};
}

const MollifierPair& MollifierPair::standard() {
  static const MollifierPair instance(1.0);
  return instance;
}

double MollifierPair::psi(double r) const { return amplitude_ * unit_bump(r); }

double MollifierPair::phihat(double rho) const {
  rho = std::abs(rho);
  const double pos = rho / step_;
  const auto n = static_cast<double>(table_.size());
  if (pos > n - 3.0) return std::exp(fit_.first - fit_.second * std::sqrt(rho));
  // Cubic Lagrange interpolation of ψ̂ on nodes i−1..i+2, then squared.
  const auto i = static_cast<std::size_t>(std::max(1.0, std::floor(pos)));
  const double t = pos - static_cast<double>(i);
  const double p0 = table_[i - 1], p1 = table_[i], p2 = table_[i + 1], p3 = table_[i + 2];
  const double l = -t * (t - 1) * (t - 2) / 6.0 * p0 + (t + 1) * (t - 1) * (t - 2) / 2.0 * p1 -
                   (t + 1) * t * (t - 2) / 2.0 * p2 + (t + 1) * t * (t - 1) / 6.0 * p3;
  return l * l;
}

double MollifierPair::phi(double r) const {
  r = std::abs(r);
  if (r >= support_radius()) return 0.0;
  const double end = std::max(1.0, tail_radius(1e-20 * phihat0_));
  const auto panels = static_cast<std::size_t>(std::ceil(end * (2.0 * r + 4.0)));
  return kTwoPi * gauss_composite(
                      [&](double rho) { return phihat(rho) * std::cyl_bessel_j(0.0, kTwoPi * rho * r) * rho; },
                      0.0, end, panels);
}

double MollifierPair::normalizing_scale() const { return std::sqrt(phi0_ / phihat0_); }

double MollifierPair::tail_radius(double level) const {
  if (tail_max_.back() >= level) return -1.0;
  const auto it = std::find_if(tail_max_.begin(), tail_max_.end(), [level](double v) { return v < level; });
  return step_ * static_cast<double>(it - tail_max_.begin());
}

}  // namespace rotacover
