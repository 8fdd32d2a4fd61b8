#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exrmt/haar.hpp"
#include "exrmt/special.hpp"

namespace exrmt {

enum class SymmetryCase { PrincipalEven, PrincipalOdd, SelfCM, Generic };

inline Group symmetry_group(SymmetryCase c) {
  switch (c) {
    case SymmetryCase::PrincipalEven: return Group::SOEven;
    case SymmetryCase::PrincipalOdd: return Group::SOOdd;
    case SymmetryCase::SelfCM: return Group::USp;
    case SymmetryCase::Generic: return Group::Unitary;
  }
  return Group::Unitary;
}

inline const char* case_name(SymmetryCase c) {
  switch (c) {
    case SymmetryCase::PrincipalEven: return "principal_even";
    case SymmetryCase::PrincipalOdd: return "principal_odd";
    case SymmetryCase::SelfCM: return "self_cm";
    case SymmetryCase::Generic: return "generic";
  }
  return "?";
}

inline SymmetryCase parse_case(const std::string& s) {
  if (s == "principal_even" || s == "even") return SymmetryCase::PrincipalEven;
  if (s == "principal_odd" || s == "odd") return SymmetryCase::PrincipalOdd;
  if (s == "self_cm" || s == "selfcm" || s == "cm") return SymmetryCase::SelfCM;
  if (s == "generic") return SymmetryCase::Generic;
  throw std::invalid_argument("unknown symmetry case '" + s + "'");
}

class MissingInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using opt = std::optional<double>;

// Raw constants attached to f and, for the generic case, to its conjugate fbar.
struct CoefficientInputs {
  opt a1, a2, a3, a4, b1, b2, c1, c2, d1;

  opt A1_00;     // A_f^1(0,0)
  opt Bp0, Bpp0; // B'(0), B''(0) with B(s) = A_f(-s, s)
  opt Lp_sym, Lpp_sym;  // L'/L and L''/L at (1, sym^2 f)
  opt Lp_chi, Lpp_chi;  // L'/L and L''/L at (1, chi'_f)
  opt xi0, xi1;
  opt L1_chi, L1_ad;    // L(1, chi'_f), L(1, ad^2 f)
  double euler_gamma = kEulerGamma;
  double stieltjes1 = kStieltjes1;
  opt digamma_k2;       // psi(k/2); derived from k when absent
  std::optional<int> k;

  // Generic (f != fbar) extras.
  opt A1_00_bar, Lp_chi_bar, Lp_sym_bar;
  opt eta_f, eta_fbar;
  opt Atilde_00, Atilde_00_bar;
  opt Btilde_p0, Btilde_p0_bar;
  opt L1_chi_bar, L1_sym, L1_sym_bar, L1_ad_bar;
  opt Lprime1_sym, Lprime1_sym_bar;  // L'(1, sym^2 f), L'(1, sym^2 fbar)

  // Generic scaling context for N_eff.
  opt mean_e1, mean_e2, R;
};

namespace detail {

inline double need(const opt& v, const char* name, SymmetryCase c) {
  if (!v) throw MissingInput(std::string("missing input '") + name + "' for case " + case_name(c));
  if (!std::isfinite(*v)) throw std::invalid_argument(std::string("input '") + name + "' is not finite");
  return *v;
}

inline double positive_denominator(const opt& v, const char* name, SymmetryCase c) {
  const double x = need(v, name, c);
  if (!(x > 0)) throw std::domain_error(std::string(name) + " must be positive where it divides");
  return x;
}

inline double psi_k2(const CoefficientInputs& in, SymmetryCase c) {
  if (in.digamma_k2) return *in.digamma_k2;
  if (in.k) return digamma(*in.k / 2.0);
  throw MissingInput(std::string("missing input 'k' or 'digamma_k2' for case ") + case_name(c));
}

}  // namespace detail

// Fills the case's one-level coefficients from raw inputs; other fields are copied through.
inline CoefficientInputs coefficient_assembly(SymmetryCase c, const CoefficientInputs& in) {
  using detail::need;
  CoefficientInputs out = in;
  const double g = in.euler_gamma, g1 = in.stieltjes1;
  const double psi = detail::psi_k2(in, c);
  switch (c) {
    case SymmetryCase::PrincipalEven: {
      const double A1 = need(in.A1_00, "A1_00", c), Ls = need(in.Lp_sym, "Lp_sym", c);
      out.a1 = 1 - psi - A1 + g - Ls;
      if (in.Bp0 && in.Bpp0 && in.Lpp_sym) {
        const double Bp = *in.Bp0, Bpp = *in.Bpp0, Lss = *in.Lpp_sym;
        out.a2 = -2 * psi - 2 * psi * g + 2 * g - 2 * g1 + (2 * psi - 2 - 2 * g - Bp) * Ls + (g + 1 - psi) * Bp +
                 Bpp / 4 + 2 * Lss;
      }
      break;
    }
    case SymmetryCase::PrincipalOdd: {
      const double A1 = need(in.A1_00, "A1_00", c), Ls = need(in.Lp_sym, "Lp_sym", c);
      out.a3 = 2 - 2 * psi + 2 * g1 - 2 * Ls - 2 * A1;
      if (in.Bp0 && in.Bpp0 && in.Lpp_sym) {
        const double Bp = *in.Bp0, Bpp = *in.Bpp0, Lss = *in.Lpp_sym;
        out.a4 = 4 * psi + 4 * psi * g + 4 * g1 + (2 * psi - 2 - 2 * g) * Bp + (4 + 4 * g + 2 * Bp - 4 * psi) * Ls -
                 Bpp / 2 - Lss;
      }
      break;
    }
    case SymmetryCase::SelfCM: {
      const double A1 = need(in.A1_00, "A1_00", c), Lc = need(in.Lp_chi, "Lp_chi", c);
      const double x0 = need(in.xi0, "xi0", c), L1c = need(in.L1_chi, "L1_chi", c);
      const double L1a = detail::positive_denominator(in.L1_ad, "L1_ad", c);
      out.b1 = 1 - psi - x0 * L1c / L1a - A1 + Lc;
      if (in.Bp0 && in.Bpp0 && in.Lpp_chi && in.xi1) {
        const double Bp = *in.Bp0, Bpp = *in.Bpp0, Lcc = *in.Lpp_chi, x1 = *in.xi1;
        out.b2 = -2 * psi + Bp - psi * Bp + Bpp / 4 + 2 * Lcc + Lc * (-2 * x0 + Bp + 2 - 2 * psi) +
                 (L1c / L1a) * (2 * psi * x0 - 2 * x0 + 2 * x1 - x0 * Bp);
      }
      break;
    }
    case SymmetryCase::Generic: {
      const double A1 = need(in.A1_00, "A1_00", c), A1b = need(in.A1_00_bar, "A1_00_bar", c);
      const double Lc = need(in.Lp_chi, "Lp_chi", c), Lcb = need(in.Lp_chi_bar, "Lp_chi_bar", c);
      const double Ls = need(in.Lp_sym, "Lp_sym", c), Lsb = need(in.Lp_sym_bar, "Lp_sym_bar", c);
      out.c1 = psi + 0.5 * ((A1 + A1b) - Lc - Lcb + Ls + Lsb);
      const double eta = need(in.eta_f, "eta_f", c), etab = need(in.eta_fbar, "eta_fbar", c);
      const double At = need(in.Atilde_00, "Atilde_00", c), Atb = need(in.Atilde_00_bar, "Atilde_00_bar", c);
      const double L1c = need(in.L1_chi, "L1_chi", c), L1cb = need(in.L1_chi_bar, "L1_chi_bar", c);
      const double L1s = need(in.L1_sym, "L1_sym", c), L1sb = need(in.L1_sym_bar, "L1_sym_bar", c);
      const double L1a = detail::positive_denominator(in.L1_ad, "L1_ad", c);
      const double L1ab = detail::positive_denominator(in.L1_ad_bar, "L1_ad_bar", c);
      out.c2 = -0.5 * (eta * At * L1c * L1sb / L1a + etab * Atb * L1cb * L1s / L1ab);
      const double Bt = need(in.Btilde_p0, "Btilde_p0", c), Btb = need(in.Btilde_p0_bar, "Btilde_p0_bar", c);
      const double Lps = need(in.Lprime1_sym, "Lprime1_sym", c), Lpsb = need(in.Lprime1_sym_bar, "Lprime1_sym_bar", c);
      out.d1 = eta * L1sb / L1a * (-0.5 * Bt * L1c + psi * At * L1c - At * L1c) +
               etab * L1s / L1ab * (-0.5 * Btb * L1cb + psi * Atb * L1cb - Atb * L1cb) +
               eta * Lpsb / L1a * At * L1c + eta * Lps / L1ab * Atb * L1cb;
      break;
    }
  }
  return out;
}

// Unscaled one-level density kernels on [0, pi] (SOEven, USp) or [0, 2pi] (SOOdd, Unitary).
inline double finite_n_density(Group g, int N, double theta) {
  const double pi = std::numbers::pi;
  switch (g) {
    case Group::SOEven: return (2.0 * N - 1) / (2 * pi) + dirichlet_ratio(2 * N - 1, theta) / (2 * pi);
    case Group::SOOdd: return N / pi - dirichlet_ratio(2 * N, theta) / (2 * pi);
    case Group::USp: return (2.0 * N + 1) / (2 * pi) - dirichlet_ratio(2 * N + 1, theta) / (2 * pi);
    case Group::Unitary: return N / (2 * pi);
  }
  return 0;
}

// Scaled density 1 + W(tau) truncated after the given power of 1/N (or 1/(2N+1) for SOOdd).
// N <= 0 means the N -> infinity limit.
inline double scaled_density_expansion(Group g, int N, double tau, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("scaled_density_expansion: order must be 0, 1 or 2");
  const double pi = std::numbers::pi;
  const double s2 = sinc(2 * pi * tau);
  const double c = std::cos(2 * pi * tau), s = std::sin(2 * pi * tau);
  const bool finite = N > 0;
  switch (g) {
    case Group::SOEven: {
      double v = 1 + s2;
      if (finite && order >= 1) v -= (1 + c) / (2.0 * N);
      if (finite && order >= 2) v -= pi * tau * s / (6.0 * N * N);
      return v;
    }
    case Group::SOOdd: {
      const double m = 2.0 * N + 1;
      double v = 1 - s2;
      if (finite && order >= 1) v -= (1 - c) / m;
      if (finite && order >= 2) v += 2 * pi * tau * s / (3 * m * m);
      return v;
    }
    case Group::USp: {
      double v = 1 - s2;
      if (finite && order >= 1) v += (1 - c) / (2.0 * N);
      if (finite && order >= 2) v += pi * tau * s / (6.0 * N * N);
      return v;
    }
    case Group::Unitary: return 1.0;
  }
  return 0;
}

// Exact finite-N kernel at the scaled angle (the quantity the expansion approximates).
inline double scaled_density_exact(Group g, int N, double tau) {
  const double pi = std::numbers::pi;
  switch (g) {
    case Group::SOEven:
    case Group::USp: return finite_n_density(g, N, pi * tau / N) * pi / N;
    case Group::SOOdd: {
      const double m = 2.0 * N + 1;
      return finite_n_density(g, N, 2 * pi * tau / m) * 2 * pi / m;
    }
    case Group::Unitary: return finite_n_density(g, N, 2 * pi * tau / N) * 2 * pi / N;
  }
  return 0;
}

// Lower-order terms Q(tau) of the scaled one-level density. R = infinity gives the limiting term.
inline double q_lower_order(SymmetryCase c, double tau, double R, const CoefficientInputs& k) {
  if (!(R > 0)) throw std::invalid_argument("q_lower_order: R must be positive");
  using detail::need;
  const double pi = std::numbers::pi;
  const double sc = sinc(2 * pi * tau), cs = std::cos(2 * pi * tau), sn = std::sin(2 * pi * tau);
  switch (c) {
    case SymmetryCase::PrincipalEven:
      return sc - need(k.a1, "a1", c) * (1 + cs) / R - need(k.a2, "a2", c) * pi * tau * sn / (R * R);
    case SymmetryCase::PrincipalOdd: {
      const double m = 2 * R + 1;
      return -sc - need(k.a3, "a3", c) * (1 - cs) / m + need(k.a4, "a4", c) * 2 * pi * tau * sn / (m * m);
    }
    case SymmetryCase::SelfCM:
      return -sc + need(k.b1, "b1", c) * (1 - cs) / R + need(k.b2, "b2", c) * pi * tau * sn / (R * R);
    case SymmetryCase::Generic:
      return (need(k.c1, "c1", c) + need(k.c2, "c2", c) * cs) / R + need(k.d1, "d1", c) * pi * tau * sn / (R * R);
  }
  return 0;
}

inline double n_std(double M, double d) {
  if (!(M > 0) || !(d > 0)) throw std::invalid_argument("n_std: M and d must be positive");
  return std::log(std::sqrt(M) * d / (2 * std::numbers::pi));
}

inline double n_eff_generic(double R, double e1, double e2) {
  const double disc = 3 * e2 - 4 * e1;
  if (!(disc > 0)) throw std::domain_error("n_eff: requires 3<e2> - 4<e1> > 0");
  return R / std::sqrt(disc);
}

inline double n_eff(SymmetryCase c, double M, double X, const CoefficientInputs& k) {
  using detail::need;
  const double L = std::log(std::sqrt(M) * X / (2 * std::numbers::pi));
  auto nonzero = [&](const opt& v, const char* name) {
    const double x = need(v, name, c);
    if (x == 0) throw std::domain_error(std::string("n_eff: ") + name + " must be nonzero");
    return x;
  };
  switch (c) {
    case SymmetryCase::PrincipalEven: return L / (2 * nonzero(k.a1, "a1"));
    case SymmetryCase::PrincipalOdd: return (L - 0.5) / nonzero(k.a3, "a3") - 0.5;
    case SymmetryCase::SelfCM: return L / nonzero(k.b1, "b1");
    case SymmetryCase::Generic:
      return n_eff_generic(need(k.R, "R", c), need(k.mean_e1, "mean_e1", c), need(k.mean_e2, "mean_e2", c));
  }
  return 0;
}

// Minimizes the L2 norm over `periods` unit periods of
// (e1 - e2 sin^2 pi y)/R^2 + sin^2(pi y)/(3 N^2) by golden section in log N.
inline double n_eff_l2_optimize(double e1, double e2, double R, int periods = 1) {
  if (!(3 * e2 - 4 * e1 > 0)) throw std::domain_error("n_eff_l2_optimize: requires 3 e2 - 4 e1 > 0");
  if (!(R > 0) || periods < 1) throw std::invalid_argument("n_eff_l2_optimize: invalid R or period count");
  const double pi = std::numbers::pi;
  auto cost = [&](double logN) {
    const double N = std::exp(logN);
    auto f = [&](double y) {
      const double s2 = std::sin(pi * y) * std::sin(pi * y);
      const double v = (e1 - e2 * s2) / (R * R) + s2 / (3 * N * N);
      return v * v;
    };
    const double scale = (std::abs(e1) + std::abs(e2)) / (R * R) + 1 / (3 * N * N);
    return integrate(f, 0.0, static_cast<double>(periods), 1e-12 * scale * scale * periods, 8 * periods);
  };
  const double centre = std::log(R);
  return std::exp(golden_section_min(cost, centre - 15, centre + 15, 1e-9));
}

struct PairCorrCoefficients {
  double e1 = 0, e2 = 0, e3 = 0;
  opt App0, Appp0, Lp_ad_prime, lambda_M_sq, M;
};

inline double montgomery_r2(double y) {
  const double s = sinc(std::numbers::pi * y);
  return 1 - s * s;
}

inline double u_pair_corr(double x, int N) {
  const double s = std::sin(std::numbers::pi * x);
  return montgomery_r2(x) - s * s / (3.0 * N * N);
}

// Exact CUE two-point function in scaled units, 1 - (sin pi x / (N sin(pi x/N)))^2.
inline double u_pair_corr_exact(double x, int N) {
  const double pi = std::numbers::pi;
  const double den = N * std::sin(pi * x / N);
  if (std::abs(den) < 1e-300) return 0.0;
  const double r = std::sin(pi * x) / den;
  return 1 - r * r;
}

inline double pair_corr_expansion(double y, double R, const PairCorrCoefficients& e) {
  if (!(R > 0)) throw std::invalid_argument("pair_corr_expansion: R must be positive");
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * y);
  return montgomery_r2(y) + (e.e1 - e.e2 * s * s) / (R * R) - e.e3 * pi * y * std::sin(2 * pi * y) / (R * R * R);
}

inline PairCorrCoefficients e_coefficients_from_inputs(const PairCorrCoefficients& raw,
                                                       double euler_gamma = kEulerGamma,
                                                       double stieltjes1 = kStieltjes1) {
  auto need = [](const opt& v, const char* name) {
    if (!v) throw MissingInput(std::string("missing pair-correlation input '") + name + "'");
    return *v;
  };
  PairCorrCoefficients out = raw;
  const double lam2 = need(raw.lambda_M_sq, "lambda_M_sq"), M = need(raw.M, "M");
  if (!(lam2 > 0)) throw std::domain_error("e1: |lambda(M)| must be nonzero");
  const double lm = std::log(M);
  out.e1 = 0.5 * lm * lm / (M / lam2 - 1);
  out.e2 = -2 + euler_gamma * euler_gamma + 2 * stieltjes1 - need(raw.App0, "App0") / 2 -
           need(raw.Lp_ad_prime, "Lp_ad_prime");
  out.e3 = (16 + need(raw.Appp0, "Appp0")) / 12;
  return out;
}

// Arithmetic means of e1 and e2 over a family.
inline std::pair<double, double> family_average_e(const std::vector<PairCorrCoefficients>& family) {
  if (family.empty()) throw std::invalid_argument("family_average_e: empty family");
  double s1 = 0, s2 = 0;
  for (const auto& e : family) {
    s1 += e.e1;
    s2 += e.e2;
  }
  const double n = static_cast<double>(family.size());
  return {s1 / n, s2 / n};
}

// G(1/2) = 2^{1/24} e^{1/8} pi^{-1/4} A^{-3/2}.
inline double barnes_g_half() {
  return std::pow(2.0, 1.0 / 24) * std::exp(0.125) * std::pow(std::numbers::pi, -0.25) * std::pow(kGlaisher, -1.5);
}

inline double h_asymp(double N) {
  if (!(N > 0)) throw std::invalid_argument("h_asymp: N must be positive");
  return std::pow(2.0, -7.0 / 8) * barnes_g_half() * std::pow(std::numbers::pi, -0.25) * std::pow(N, 3.0 / 8);
}

inline double small_value_prob(double rho, double N) {
  if (!(rho >= 0)) throw std::invalid_argument("small_value_prob: rho must be nonnegative");
  return 2 * h_asymp(N) * std::sqrt(rho);
}

struct VanishingModel {
  int k = 2;
  double delta_f = 0;
  double kappa_f = 0;
  double a_f_half = 0;
};

struct VanishingCount {
  bool divergent = false;
  double leading_term = 0;  // 0 when the sum converges
  double growth_exponent = 0;
};

inline VanishingCount vanishing_count(double X, const VanishingModel& m) {
  if (m.k < 2) throw std::invalid_argument("vanishing_count: weight must be >= 2");
  if (!(X > 2)) throw std::invalid_argument("vanishing_count: X must exceed 2");
  if (m.delta_f < 0 || m.kappa_f < 0) throw std::invalid_argument("vanishing_count: delta_f, kappa_f must be >= 0");
  VanishingCount r;
  r.growth_exponent = (5.0 - 2.0 * m.k) / 4.0;
  r.divergent = m.k < 3;
  if (!r.divergent) return r;
  const double lx = std::log(X);
  r.leading_term = 1.0 / (4 * lx) * 2 * m.a_f_half * std::sqrt(m.delta_f * m.kappa_f) * std::pow(2.0, -7.0 / 8) *
                   barnes_g_half() * std::pow(std::numbers::pi, -0.25) * std::pow(lx, 3.0 / 8) *
                   (4.0 / (5.0 - 2.0 * m.k)) * std::pow(X, r.growth_exponent);
  return r;
}

}  // namespace exrmt
