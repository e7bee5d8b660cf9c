#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>

#include "rotacover/errors.hpp"

namespace rotacover {

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }
}  // namespace detail

// Composite 20-point Gauss–Legendre over [a, b] with `panels` equal panels.
template <class F>
auto gauss_composite(F&& f, double a, double b, std::size_t panels) -> decltype(f(a)) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double h = (b - a) / static_cast<double>(panels);
  decltype(f(a)) sum{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + h * (static_cast<double>(p) + 0.5);
    const double half = 0.5 * h;
    decltype(f(a)) part{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      part += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
    sum += half * part;
  }
  return sum;
}

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;  // |I(n) − I(2n)| at the accepted level
  std::size_t panels = 0;
};

// Doubles the panel count until two successive levels agree within `tol`.
template <class F>
auto gauss_adaptive(F&& f, double a, double b, double tol, std::size_t start_panels = 1,
                    std::size_t max_panels = std::size_t{1} << 20) -> QuadratureResult<decltype(f(a))> {
  std::size_t n = start_panels == 0 ? 1 : start_panels;
  auto coarse = gauss_composite(f, a, b, n);
  double err = 0.0;
  while (2 * n <= max_panels) {
    auto fine = gauss_composite(f, a, b, 2 * n);
    err = detail::magnitude(fine - coarse);
    if (err <= tol) return {fine, err, 2 * n};
    coarse = fine;
    n *= 2;
  }
  std::ostringstream msg;
  msg << "quadrature did not converge (achieved tolerance " << err << ")";
  throw BudgetExceeded(msg.str());
}

}  // namespace rotacover
