#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace exrmt {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082;
inline constexpr double kStieltjes1 = -0.0728158454836767248605863758749;
// Glaisher-Kinkelin constant A, 30 digits: A = exp(1/12 - zeta'(-1)).
inline constexpr double kGlaisher = 1.28242712910062263687534256887;

// sin(x)/x with the series below |x| < 1e-4.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// sin(m t) / sin(t) as the Chebyshev polynomial U_{m-1}(cos t); regular at t = k pi.
inline double dirichlet_ratio(int m, double t) {
  if (m <= 0) return 0.0;
  const double c = std::cos(t);
  double u0 = 1.0, u1 = 2.0 * c;
  if (m == 1) return u0;
  for (int k = 2; k < m; ++k) {
    const double u2 = 2.0 * c * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

inline double digamma(double x) {
  if (x <= 0 && x == std::floor(x)) throw std::domain_error("digamma: pole at nonpositive integer");
  if (x < 0) return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
  double acc = 0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return acc + std::log(x) - 0.5 / x - series;
}

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol || std::abs(delta) <= 1e-15 * std::abs(left + right))
    return left + right + delta / 15;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

// Adaptive Simpson; the range is pre-split into panels so oscillatory integrands are resolved.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10, int panels = 64) {
  double total = 0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + h * p, hi = (p + 1 == panels) ? b : a + h * (p + 1);
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
    total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, 40);
  }
  return total;
}

// Minimizer of a unimodal f on [a, b].
inline double golden_section_min(const std::function<double(double)>& f, double a, double b, double xtol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace exrmt
