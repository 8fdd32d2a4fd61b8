#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exrmt/arithmetic.hpp"
#include "exrmt/stats.hpp"

namespace exrmt {

struct LocalFactor {
  cplx lambda;  // lambda_f(p)
  cplx chi;     // chi_f(p)
};

struct NewformLocalData {
  std::int64_t M = 11;
  int k = 2;
  std::map<std::uint64_t, LocalFactor> primes;

  std::uint64_t max_prime() const { return primes.empty() ? 0 : primes.rbegin()->first; }

  const LocalFactor& at(std::uint64_t p) const {
    const auto it = primes.find(p);
    if (it == primes.end()) throw std::out_of_range("NewformLocalData: no data at p=" + std::to_string(p));
    return it->second;
  }

  // Ramanujan bound away from the level and chi(p) = 0 exactly at p = M.
  void validate(double tol = 1e-9) const {
    for (const auto& [p, f] : primes) {
      if (!is_prime(p)) throw std::invalid_argument("NewformLocalData: " + std::to_string(p) + " is not prime");
      if (static_cast<std::int64_t>(p) == M) {
        if (std::abs(f.chi) != 0.0) throw std::invalid_argument("NewformLocalData: chi(M) must be 0");
      } else {
        if (std::abs(f.lambda) > 2 + tol)
          throw std::invalid_argument("NewformLocalData: |lambda(" + std::to_string(p) + ")| exceeds 2");
        if (std::abs(std::abs(f.chi) - 1) > tol)
          throw std::invalid_argument("NewformLocalData: chi(" + std::to_string(p) + ") is not a root of unity");
      }
    }
  }
};

inline NewformLocalData read_local_data(std::istream& is, std::int64_t M, int k) {
  NewformLocalData d{M, k, {}};
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t last = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "p,re_lambda,im_lambda,re_chi,im_chi")
        throw std::runtime_error("local data: bad header at line 1");
      continue;
    }
    std::stringstream ss(line);
    std::string f[5];
    for (int i = 0; i < 5; ++i)
      if (!std::getline(ss, f[i], ','))
        throw std::runtime_error("local data: expected 5 fields at line " + std::to_string(lineno));
    try {
      const std::uint64_t p = std::stoull(f[0]);
      if (p <= last) throw std::runtime_error("primes not ascending");
      last = p;
      d.primes[p] = {cplx(std::stod(f[1]), std::stod(f[2])), cplx(std::stod(f[3]), std::stod(f[4]))};
    } catch (const std::exception& e) {
      throw std::runtime_error("local data: parse error at line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  d.validate();
  return d;
}

inline NewformLocalData read_local_data(const std::string& path, std::int64_t M, int k) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_local_data(is, M, k);
}

inline void write_local_data(std::ostream& os, const NewformLocalData& d) {
  os << "p,re_lambda,im_lambda,re_chi,im_chi\n";
  for (const auto& [p, f] : d.primes)
    os << p << ',' << format_double(f.lambda.real()) << ',' << format_double(f.lambda.imag()) << ','
       << format_double(f.chi.real()) << ',' << format_double(f.chi.imag()) << '\n';
}

// Roots of x^2 - lambda x + chi.
inline std::pair<cplx, cplx> satake(cplx lambda, cplx chi) {
  const cplx disc = std::sqrt(lambda * lambda - 4.0 * chi);
  return {(lambda + disc) / 2.0, (lambda - disc) / 2.0};
}

// lambda(p^0..p^m) by lambda(p^{j+1}) = lambda(p) lambda(p^j) - chi(p) lambda(p^{j-1}).
inline std::vector<cplx> lambda_powers(cplx lambda, cplx chi, int m) {
  std::vector<cplx> v(static_cast<std::size_t>(m) + 1);
  v[0] = 1.0;
  if (m >= 1) v[1] = lambda;
  for (int j = 1; j < m; ++j) v[j + 1] = lambda * v[j] - chi * v[j - 1];
  return v;
}

inline cplx lambda_power(std::uint64_t p, int m, const NewformLocalData& data) {
  const auto& f = data.at(p);
  return lambda_powers(f.lambda, f.chi, m)[static_cast<std::size_t>(m)];
}

// sum_{l=0}^m alpha^l beta^{m-l}.
inline cplx satake_power_sum(cplx lambda, cplx chi, int m) {
  const auto [a, b] = satake(lambda, chi);
  cplx s = 0;
  for (int l = 0; l <= m; ++l) s += std::pow(a, l) * std::pow(b, m - l);
  return s;
}

struct EulerProductValue {
  cplx value;
  double tail_estimate = 0;  // |value(P) - value(P/10)|
  bool converged = true;
};

namespace detail {

inline cplx p_pow(double p, cplx s) { return std::exp(-s * std::log(p)); }  // p^{-s}

// Local L-factor at p of sym^2 with Satake data (lambda, chi), at t = p^{-s}.
inline cplx sym2_local(cplx lam, cplx chi, cplx t) {
  const cplx a = lam * lam - chi;
  return 1.0 / (1.0 - a * t + chi * a * t * t - chi * chi * chi * t * t * t);
}

// Local factor of L(s, ad^2) = L(s, f x fbar) / zeta(s) from Satake roots.
inline cplx ad2_local(cplx lam, cplx chi, cplx t) {
  const auto [a, b] = satake(lam, chi);
  const cplx roots[2] = {a, b};
  cplx inv = 1.0;
  for (const cplx& u : roots)
    for (const cplx& v : roots) inv *= 1.0 - u * std::conj(v) * t;
  return (1.0 - t) / inv;
}

inline int terms_needed(double p, double re_shift) {
  // |x| = p^{-(1+2 Re alpha)}; stop when (m+1)|x|^m is below 1e-18.
  const double x = std::pow(p, -re_shift);
  int m = 1;
  while (m < 400 && (m + 1) * std::pow(x, m) > 1e-18) ++m;
  return m;
}

struct Factors {
  bool principal;
  std::int64_t M;
  cplx level_sign;
};

// Y_p^{-1} V_p for A_f(alpha, gamma).
inline cplx a_local(double p, const LocalFactor& f, const Factors& fx, cplx al, cplx ga) {
  const cplx chi_prime = fx.principal ? cplx(1.0) : f.chi;
  const cplx y = (1.0 / (1.0 - chi_prime * p_pow(p, 1.0 + 2.0 * ga))) * sym2_local(f.lambda, f.chi, p_pow(p, 1.0 + 2.0 * al)) /
                 ((1.0 / (1.0 - chi_prime * p_pow(p, 1.0 + al + ga))) * sym2_local(f.lambda, f.chi, p_pow(p, 1.0 + al + ga)));
  cplx v;
  if (static_cast<std::int64_t>(p) == fx.M) {
    const int m = terms_needed(p, 0.5 + al.real());
    const auto lp = lambda_powers(f.lambda, f.chi, m);
    const cplx x = p_pow(p, 0.5 + al), w = f.lambda * p_pow(p, 0.5 + ga);
    cplx e = 1.0, xm = 1.0;
    v = 0;
    for (int j = 0; j <= m; ++j) {
      v += lp[j] * e * xm - w * lp[j] * e * fx.level_sign * xm;
      e *= fx.level_sign;
      xm *= x;
    }
  } else {
    const int m = terms_needed(p, 1.0 + 2 * al.real());
    const auto lp = lambda_powers(f.lambda, f.chi, 2 * m + 1);
    const cplx x = p_pow(p, 1.0 + 2.0 * al);
    cplx even1 = 0, even0 = 0, odd = 0, xm = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j >= 1) even1 += lp[2 * j] * xm;
      even0 += lp[2 * j] * xm;
      odd += lp[2 * j + 1] * xm;
      xm *= x;
    }
    v = 1.0 + (p / (p + 1)) * (even1 - f.lambda * p_pow(p, 1.0 + al + ga) * odd + f.chi * p_pow(p, 1.0 + 2.0 * ga) * even0);
  }
  return v / y;
}

// Ytilde_p^{-1} Vtilde_p for Atilde_f(-alpha, gamma).
inline cplx a_tilde_local(double p, const LocalFactor& f, const Factors& fx, cplx al, cplx ga) {
  const cplx chi_prime = fx.principal ? cplx(1.0) : f.chi;
  const cplx lam_bar = std::conj(f.lambda), chi_bar = std::conj(f.chi);
  const cplx t_mix = p_pow(p, 1.0 - al + ga);
  const cplx num = (1.0 / (1.0 - chi_prime * p_pow(p, 1.0 + 2.0 * ga))) * sym2_local(lam_bar, chi_bar, p_pow(p, 1.0 - 2.0 * al));
  const cplx den = (1.0 / (1.0 - t_mix)) * ad2_local(f.lambda, f.chi, t_mix);
  const cplx y = num / den;
  cplx v;
  if (static_cast<std::int64_t>(p) == fx.M) {
    const int m = terms_needed(p, 0.5 - al.real());
    const auto lp = lambda_powers(f.lambda, f.chi, m);
    const cplx x = p_pow(p, 0.5 - al), w = f.lambda * p_pow(p, 0.5 + ga);
    cplx e = 1.0, xm = 1.0;
    v = 0;
    for (int j = 0; j <= m; ++j) {
      v += std::conj(lp[j]) * e * xm - w * std::conj(lp[j]) * e * fx.level_sign * xm;
      e *= fx.level_sign;
      xm *= x;
    }
  } else {
    const int m = terms_needed(p, 1.0 - 2 * al.real());
    const auto lp = lambda_powers(f.lambda, f.chi, 2 * m + 1);
    const cplx x = p_pow(p, 1.0 - 2.0 * al);
    cplx even1 = 0, even0 = 0, odd = 0, xm = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j >= 1) even1 += std::conj(lp[2 * j]) * xm;
      even0 += std::conj(lp[2 * j]) * xm;
      odd += std::conj(lp[2 * j + 1]) * xm;
      xm *= x;
    }
    v = 1.0 + (p / (p + 1)) * (even1 - f.lambda * p_pow(p, 1.0 - al + ga) * odd + f.chi * p_pow(p, 1.0 + 2.0 * ga) * even0);
  }
  return v / y;
}

template <class Local>
EulerProductValue truncated_product(const NewformLocalData& data, std::uint64_t P, double tol, Local local) {
  if (P < 2) throw std::invalid_argument("truncated product: P must be >= 2");
  const auto primes = primes_up_to(P);
  for (auto p : primes)
    if (!data.primes.count(p))
      throw std::invalid_argument("insufficient prime coverage: no data at p=" + std::to_string(p));
  if (!data.primes.count(static_cast<std::uint64_t>(data.M)))
    throw std::invalid_argument("insufficient prime coverage: no data at the level p=M");
  cplx prod = 1.0, at_decade = 1.0;
  bool level_done = false;
  const std::uint64_t decade = P / 10;
  for (auto p : primes) {
    prod *= local(static_cast<double>(p), data.at(p));
    if (static_cast<std::int64_t>(p) == data.M) level_done = true;
    if (p <= decade) at_decade = prod;
  }
  if (!level_done) {
    const cplx lv = local(static_cast<double>(data.M), data.at(static_cast<std::uint64_t>(data.M)));
    prod *= lv;
    at_decade *= lv;
  } else if (static_cast<std::uint64_t>(data.M) > decade) {
    at_decade *= local(static_cast<double>(data.M), data.at(static_cast<std::uint64_t>(data.M)));
  }
  EulerProductValue r{prod, std::abs(prod - at_decade), true};
  r.converged = r.tail_estimate <= tol;
  return r;
}

}  // namespace detail

inline bool principal_case(SymmetryCase c) {
  return c == SymmetryCase::PrincipalEven || c == SymmetryCase::PrincipalOdd;
}

// A_f(alpha, gamma) truncated to p <= P (the level prime is always included).
inline EulerProductValue truncated_a_f(const NewformLocalData& data, SymmetryCase c, cplx level_sign, cplx alpha,
                                       cplx gamma, std::uint64_t P, double tol = 1e-6) {
  if (std::abs(alpha.real()) >= 0.25 || std::abs(gamma.real()) >= 0.25)
    throw std::invalid_argument("truncated_a_f: shifts must satisfy |Re| < 1/4");
  const detail::Factors fx{principal_case(c), data.M, level_sign};
  return detail::truncated_product(data, P, tol, [&](double p, const LocalFactor& f) {
    return detail::a_local(p, f, fx, alpha, gamma);
  });
}

// A_f(r, r); named separately so real (alpha, gamma, P) calls cannot bind here.
inline EulerProductValue truncated_a_f_diagonal(const NewformLocalData& data, SymmetryCase c, cplx level_sign, cplx r,
                                                std::uint64_t P, double tol = 1e-6) {
  return truncated_a_f(data, c, level_sign, r, r, P, tol);
}

inline EulerProductValue truncated_a_tilde(const NewformLocalData& data, SymmetryCase c, cplx level_sign, cplx alpha,
                                           cplx gamma, std::uint64_t P, double tol = 1e-6) {
  if (std::abs(alpha.real()) >= 0.25 || std::abs(gamma.real()) >= 0.25)
    throw std::invalid_argument("truncated_a_tilde: shifts must satisfy |Re| < 1/4");
  const detail::Factors fx{principal_case(c), data.M, level_sign};
  return detail::truncated_product(data, P, tol, [&](double p, const LocalFactor& f) {
    return detail::a_tilde_local(p, f, fx, alpha, gamma);
  });
}

// A_f^1(r, r) = d/d alpha A_f(alpha, gamma) at alpha = gamma = r: central differences
// at step h and h/2 combined by one Richardson step.
inline EulerProductValue a_f_derivative(const NewformLocalData& data, SymmetryCase c, cplx level_sign, cplx r,
                                        std::uint64_t P, double h = 1e-3, double tol = 1e-6) {
  auto deriv = [&](std::uint64_t cutoff) {
    auto D = [&](double step) {
      const auto up = truncated_a_f(data, c, level_sign, r + step, r, cutoff);
      const auto dn = truncated_a_f(data, c, level_sign, r - step, r, cutoff);
      return (up.value - dn.value) / (2 * step);
    };
    return (4.0 * D(h / 2) - D(h)) / 3.0;
  };
  EulerProductValue out{deriv(P), 0, true};
  if (P / 10 >= 2) out.tail_estimate = std::abs(out.value - deriv(P / 10));
  out.converged = out.tail_estimate <= tol;
  return out;
}

}  // namespace exrmt
